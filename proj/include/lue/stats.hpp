#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lue/common.hpp"
#include "lue/ensembles.hpp"
#include "lue/laguerre.hpp"
#include "lue/quadrature.hpp"

namespace lue {

struct Histogram {
  double lo = 0.0, hi = 1.0;
  int bins = 1;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_draws = 0;
  std::uint64_t overflow = 0;  // eigenvalues outside [lo, hi]

  double bin_width() const { return (hi - lo) / bins; }
  double center(int i) const { return lo + (i + 0.5) * bin_width(); }
  /// Empirical density estimate comparable to a 1-point correlation function.
  double density(int i) const {
    return static_cast<double>(counts[i]) / (static_cast<double>(total_draws) * bin_width());
  }
};

inline Histogram histogram(const std::vector<Spectrum>& samples, double lo, double hi, int bins) {
  require(!samples.empty(), "histogram: requires at least one spectrum");
  require(bins >= 1 && lo < hi, "histogram: requires bins >= 1 and lo < hi");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.bins = bins;
  h.counts.assign(bins, 0);
  h.total_draws = samples.size();
  const double w = h.bin_width();
  for (const Spectrum& sp : samples)
    for (double x : sp.values) {
      if (x < lo || x > hi) {
        ++h.overflow;
        continue;
      }
      int idx = static_cast<int>((x - lo) / w);
      if (idx >= bins) idx = bins - 1;  // x == hi lands in the top bin
      ++h.counts[idx];
    }
  return h;
}

/// sup |empirical CDF - cdf| over the sample points.
inline double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  require(!samples.empty(), "ks_distance: requires samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::max(std::abs((i + 1) / n - f), std::abs(i / n - f)));
  }
  return d;
}

inline std::vector<double> flatten(const std::vector<Spectrum>& samples) {
  std::vector<double> out;
  for (const Spectrum& sp : samples) out.insert(out.end(), sp.values.begin(), sp.values.end());
  return out;
}

struct CountingMoments {
  double mean = 0.0;
  double variance = 0.0;
  double error_estimate = 0.0;  // last Richardson move of the variance quadrature
};

/// Determinantal counting statistics on (a, b): mean = int K, variance =
/// mean - int int K^2, by tensor Gauss-Legendre panels refined until stable.
inline CountingMoments counting_moments_exact(const KernelContext& ctx, double a, double b) {
  require(ctx.real_scale(), "counting_moments_exact: requires a real scale");
  require(a >= 0.0 && a < b, "counting_moments_exact: requires 0 <= a < b");
  CountingMoments cm;
  cm.mean = integrate_adaptive([&](double x) { return ctx.kernel_diag(x); }, a, b, 1e-10, 8, 4096,
                               "counting mean");
  const QuadRule rule = gauss_legendre(12);
  auto k2 = [&](int panels) {
    const double h = (b - a) / panels;
    const int m = panels * static_cast<int>(rule.x.size());
    std::vector<double> xs(m), ws(m);
    std::vector<std::pair<double, double>> pp(m);
    for (int p = 0; p < panels; ++p)
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const int i = p * static_cast<int>(rule.x.size()) + static_cast<int>(q);
        xs[i] = a + (p + 0.5 * (rule.x[q] + 1.0)) * h;
        ws[i] = 0.5 * h * rule.w[q];
        pp[i] = ctx.phi_top_pair(xs[i]);
      }
    KahanSum s;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double k = (i == j) ? ctx.kernel_diag(xs[i])
                                  : ctx.kernel_two_term(pp[i], pp[j], xs[i], xs[j]);
        s.add(ws[i] * ws[j] * k * k);
      }
    }
    return s.value();
  };
  double prev = k2(8);
  for (int panels = 16; panels <= 128; panels *= 2) {
    const double cur = k2(panels);
    cm.error_estimate = std::abs(cur - prev);
    prev = cur;
    if (cm.error_estimate <= 1e-6 * std::max(1.0, std::abs(cur))) break;
  }
  cm.variance = cm.mean - prev;
  return cm;
}

enum class Regime { bulk, soft, hard };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::bulk: return "bulk";
    case Regime::soft: return "soft";
    case Regime::hard: return "hard";
  }
  return "?";
}

struct ConvergenceRow {
  int n = 0;
  Regime regime = Regime::bulk;
  double bulk_u = 0.0;  // bulk reference point, unused otherwise
  std::string window;
  double sup_error = 0.0;
  int points_checked = 0;
};

/// Pointwise comparison of the rescaled finite-N kernel with its limit on a
/// window grid. Bulk comparisons are phase-invariant: magnitudes off the
/// diagonal, exact values on it.
inline ConvergenceRow kernel_convergence(Regime regime, double bulk_u, int n, double alpha,
                                         const std::vector<double>& grid) {
  require(grid.size() >= 2, "kernel_convergence: grid too small");
  KernelContext ctx(n, alpha, complex_t(1.0 / (4.0 * n), 0.0));
  ConvergenceRow row;
  row.n = n;
  row.regime = regime;
  row.bulk_u = bulk_u;
  double scale = 0.0;
  std::function<double(double)> to_x;
  LimitingKernel lim = LimitingKernel::sine();
  switch (regime) {
    case Regime::bulk: {
      require(bulk_u > 0.0 && bulk_u < 1.0, "kernel_convergence: bulk u must be in (0,1)");
      scale = n * mp_density(bulk_u);
      to_x = [=](double t) { return bulk_u + t / scale; };
      lim = LimitingKernel::sine();
      row.window = "u=" + std::to_string(bulk_u) + " |t|<=" + std::to_string(std::abs(grid.back()));
      break;
    }
    case Regime::soft: {
      scale = std::pow(2.0 * n, 2.0 / 3.0);
      to_x = [=](double t) { return 1.0 + t / scale; };
      lim = LimitingKernel::airy();
      row.window = "soft t in [" + std::to_string(grid.front()) + "," + std::to_string(grid.back()) + "]";
      break;
    }
    case Regime::hard: {
      scale = 16.0 * static_cast<double>(n) * n;
      to_x = [=](double t) { return t / scale; };
      lim = LimitingKernel::bessel(alpha);
      row.window = "hard t in (0," + std::to_string(grid.back()) + "]";
      break;
    }
  }
  const int m = static_cast<int>(grid.size());
  std::vector<double> xs(m);
  std::vector<std::pair<double, double>> pp(m);
  for (int i = 0; i < m; ++i) {
    xs[i] = to_x(grid[i]);
    pp[i] = ctx.phi_top_pair(xs[i]);
  }
  double sup = 0.0;
  int checked = 0;
  if (regime == Regime::bulk) {
    // phase-invariant magnitudes off the diagonal; on the diagonal the
    // density ratio (1/(N psi)) K~(u, u) -> 1 is checked at the window center
    sup = std::abs(ctx.kernel_diag(bulk_u) / scale - 1.0);
    ++checked;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        const double scaled = ctx.kernel_two_term(pp[i], pp[j], xs[i], xs[j]) / scale;
        const double ref = limiting_kernel_eval(lim, grid[i], grid[j]);
        sup = std::max(sup, std::abs(std::abs(scaled) - std::abs(ref)));
        ++checked;
      }
  } else {
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        const double scaled = (i == j) ? ctx.kernel_diag(xs[i]) / scale
                                       : ctx.kernel_two_term(pp[i], pp[j], xs[i], xs[j]) / scale;
        const double ref = limiting_kernel_eval(lim, grid[i], grid[j]);
        sup = std::max(sup, std::abs(scaled - ref));
        ++checked;
      }
  }
  row.sup_error = sup;
  row.points_checked = checked;
  return row;
}

struct PageAverage {
  double mean = 0.0;
  double std_error = 0.0;
  double asymptotic_approx = 0.0;  // ln N - N/(2M)
};

inline PageAverage page_average(const std::vector<Spectrum>& samples) {
  require(!samples.empty(), "page_average: requires samples");
  const EnsembleSpec& spec = samples.front().spec;
  for (const Spectrum& sp : samples)
    require(sp.spec.mode == TraceMode::fixed_trace && sp.spec.parameter == 1.0 &&
                sp.spec.n == spec.n && sp.spec.m == spec.m,
            "page_average: all samples must share one fixed(1) spec");
  KahanSum s, s2;
  for (const Spectrum& sp : samples) {
    const double e = entropy(sp);
    s.add(e);
    s2.add(e * e);
  }
  const double cnt = static_cast<double>(samples.size());
  PageAverage pa;
  pa.mean = s.value() / cnt;
  const double var = std::max(0.0, s2.value() / cnt - pa.mean * pa.mean);
  pa.std_error = std::sqrt(var / cnt);
  pa.asymptotic_approx = std::log(static_cast<double>(spec.n)) - spec.n / (2.0 * spec.m);
  return pa;
}

}  // namespace lue
