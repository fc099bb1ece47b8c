#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "lue/common.hpp"

namespace lue {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Gauss-Legendre rule on [-1, 1], Newton iteration on P_n.
inline QuadRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: n >= 1");
  QuadRule q;
  q.x.resize(n);
  q.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.x[i] = -x;
    q.x[n - 1 - i] = x;
    q.w[i] = q.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return q;
}

/// Composite Gauss-Legendre integral of f over [a, b] with m equal panels.
template <typename F>
double integrate_panels(F&& f, double a, double b, int panels, const QuadRule& rule) {
  KahanSum s;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    for (std::size_t i = 0; i < rule.x.size(); ++i)
      s.add(0.5 * h * rule.w[i] * f(lo + 0.5 * h * (rule.x[i] + 1.0)));
  }
  return s.value();
}

/// Panel doubling until two successive refinements agree to reltol.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double reltol, int start_panels = 8,
                          int max_panels = 4096, const char* what = "integral") {
  const QuadRule rule = gauss_legendre(16);
  double prev = integrate_panels(f, a, b, start_panels, rule);
  for (int m = 2 * start_panels; m <= max_panels; m *= 2) {
    double cur = integrate_panels(f, a, b, m, rule);
    if (std::abs(cur - prev) <= reltol * std::max(std::abs(cur), 1e-300)) return cur;
    prev = cur;
  }
  throw numeric_error(std::string("integrate_adaptive: no convergence for ") + what);
}

}  // namespace lue
