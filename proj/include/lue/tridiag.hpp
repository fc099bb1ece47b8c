#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "lue/common.hpp"

namespace lue {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// iteration (EISPACK tql1 lineage), eigenvalues only, returned ascending.
inline std::vector<double> tridiag_eigenvalues(std::vector<double> d, std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  require(e.size() + 1 == d.size() || (n == 0 && e.empty()),
          "tridiag_eigenvalues: offdiag size must be n-1");
  for (double v : d)
    if (!std::isfinite(v)) throw std::invalid_argument("tridiag_eigenvalues: non-finite diagonal");
  for (double v : e)
    if (!std::isfinite(v)) throw std::invalid_argument("tridiag_eigenvalues: non-finite offdiagonal");
  if (n == 0) return {};
  e.push_back(0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    for (;;) {
      int m = l;
      for (; m < n - 1; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (++iter > 50) throw numeric_error("tridiag_eigenvalues: QL iteration failed to converge");
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (int i = m - 1; i >= l; --i) {
        double f = s * e[i];
        double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace lue
