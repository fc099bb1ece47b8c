#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "lue/common.hpp"
#include "lue/quadrature.hpp"
#include "lue/specfun.hpp"
#include "lue/tridiag.hpp"

namespace lue {

using complex_t = std::complex<double>;

/// Marchenko-Pastur density (2/pi) sqrt((1-x)/x) on (0, 1].
inline double mp_density(double x) {
  if (x <= 0.0 || x > 1.0) return 0.0;
  return (2.0 / pi) * std::sqrt((1.0 - x) / x);
}

inline double mp_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return (2.0 / pi) * (std::asin(std::sqrt(x)) + std::sqrt(x * (1.0 - x)));
}

/// Monomial coefficients of L_k^alpha in the positive-leading-coefficient
/// convention (leading term x^k / k!), ascending order.
inline std::vector<double> laguerre_coeffs(int k, double alpha) {
  require(alpha > -1.0, "laguerre_coeffs: requires alpha > -1");
  if (k < 0 || k > 64) throw std::out_of_range("laguerre_coeffs: k must be in [0, 64]");
  std::vector<double> c(k + 1);
  double lead = 1.0;
  for (int j = 2; j <= k; ++j) lead /= j;
  c[k] = lead;
  for (int j = k - 1; j >= 0; --j) c[j] = -c[j + 1] * (j + 1) * (j + 1 + alpha) / (k - j);
  return c;
}

namespace detail {

inline double phi0(double alpha, double z, double log_norm0) {
  if (z < 0.0) throw std::domain_error("phi: negative real argument off the principal branch");
  if (z == 0.0) {
    if (alpha == 0.0) return std::exp(log_norm0);
    return alpha > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::exp(0.5 * (alpha * std::log(z) - z) + log_norm0);
}

inline complex_t phi0(double alpha, complex_t z, double log_norm0) {
  if (z.imag() == 0.0) return complex_t(phi0(alpha, z.real(), log_norm0), 0.0);
  return std::exp(0.5 * (alpha * std::log(z) - z) + log_norm0);
}

}  // namespace detail

enum class KernelBranch { automatic, direct_sum, two_term };

// Finite-N Christoffel-Darboux kernel machinery for the weight x^alpha e^{-x/s}.
// The recurrence runs on the weighted functions phi_k = x^{alpha/2} e^{-x/2} h_k(x)
// so no raw polynomial values materialize; values stay O(1) over the support.
class KernelContext {
 public:
  KernelContext(int n, double alpha, complex_t scale = complex_t(1.0, 0.0))
      : n_(n), alpha_(alpha), scale_(scale) {
    require(n >= 1, "KernelContext: requires n >= 1");
    require(alpha > -1.0, "KernelContext: requires alpha > -1");
    if (!(scale.real() > 0.0)) throw std::domain_error("KernelContext: requires Re(scale) > 0");
    a_.resize(n + 1);
    b_.resize(n + 1);
    for (int k = 0; k <= n; ++k) {
      a_[k] = 2.0 * k + alpha + 1.0;
      b_[k] = std::sqrt(static_cast<double>(k) * (k + alpha));
    }
    log_norm0_ = -0.5 * std::lgamma(alpha + 1.0);
  }

  int n() const { return n_; }
  double alpha() const { return alpha_; }
  complex_t scale() const { return scale_; }
  bool real_scale() const { return scale_.imag() == 0.0; }
  double recurrence_a(int k) const { return a_[k]; }
  double recurrence_b(int k) const { return b_[k]; }

  /// Weighted orthonormal function phi~_k(x, s) = s^{-1/2} phi_k(x/s), k <= n.
  double phi(int k, double x) const {
    require(k >= 0 && k <= n_, "phi: k must be in [0, n]");
    require(real_scale(), "phi: complex scale requires a complex argument");
    const double s = scale_.real();
    return run_to<double>(k, x / s) / std::sqrt(s);
  }

  complex_t phi(int k, complex_t x) const {
    require(k >= 0 && k <= n_, "phi: k must be in [0, n]");
    complex_t z = x / scale_;
    check_domain(z);
    return run_to<complex_t>(k, z) * std::exp(-0.5 * std::log(scale_));
  }

  /// K~_N(x, y, s). The two-term Christoffel-Darboux form is used away from
  /// the diagonal, the direct sum below a relative separation of 1e-6 where
  /// the two-term numerator starts losing digits.
  double kernel_cd(double x, double y, KernelBranch branch = KernelBranch::automatic) const {
    require(real_scale(), "kernel_cd: complex scale requires complex arguments");
    const double s = scale_.real();
    return eval_kernel<double>(x / s, y / s, branch) / s;
  }

  complex_t kernel_cd(complex_t x, complex_t y, KernelBranch branch = KernelBranch::automatic) const {
    complex_t zx = x / scale_, zy = y / scale_;
    check_domain(zx);
    check_domain(zy);
    return eval_kernel<complex_t>(zx, zy, branch) / scale_;
  }

  double kernel_diag(double x) const { return kernel_cd(x, x); }
  complex_t kernel_diag(complex_t x) const { return kernel_cd(x, x); }

  /// (phi~_{n-1}, phi~_n) at x: the Christoffel-Darboux building blocks, so
  /// grid evaluations can reuse one recurrence pass per point.
  std::pair<double, double> phi_top_pair(double x) const {
    require(real_scale(), "phi_top_pair: requires a real scale");
    const double s = scale_.real();
    double lo, up;
    top_pair<double>(x / s, lo, up);
    const double f = 1.0 / std::sqrt(s);
    return {lo * f, up * f};
  }

  /// K~(x, y) assembled from cached phi_top_pair values. The weighted
  /// functions absorb s^{-1/2} each, so the two-term form carries a factor s.
  double kernel_two_term(const std::pair<double, double>& px, const std::pair<double, double>& py,
                         double x, double y) const {
    const double pref = std::sqrt(static_cast<double>(n_) * (n_ + alpha_));
    return scale_.real() * pref * (px.second * py.first - py.second * px.first) / (x - y);
  }

 private:
  static void check_domain(complex_t z) {
    if (z.imag() == 0.0 && z.real() < 0.0)
      throw std::domain_error("kernel: negative real argument off the principal branch");
    if (z.real() < 0.0)
      throw std::domain_error("kernel: Re(x/s) >= 0 is required");
  }

  template <class S>
  S run_to(int k, S z) const {
    S prev = S(0.0), cur = detail::phi0(alpha_, z, log_norm0_);
    for (int j = 0; j < k; ++j) {
      S nxt = ((z - a_[j]) * cur - b_[j] * prev) / b_[j + 1];
      prev = cur;
      cur = nxt;
    }
    return cur;
  }

  template <class S>
  void top_pair(S z, S& lower, S& upper) const {
    S prev = S(0.0), cur = detail::phi0(alpha_, z, log_norm0_);
    for (int j = 0; j < n_; ++j) {
      S nxt = ((z - a_[j]) * cur - b_[j] * prev) / b_[j + 1];
      prev = cur;
      cur = nxt;
    }
    lower = prev;  // phi_{n-1}
    upper = cur;   // phi_n
  }

  template <class S>
  S direct_sum(S zx, S zy) const {
    S px = S(0.0), cx = detail::phi0(alpha_, zx, log_norm0_);
    S py = S(0.0), cy = detail::phi0(alpha_, zy, log_norm0_);
    S acc = cx * cy;
    for (int j = 0; j + 1 < n_; ++j) {
      S nx = ((zx - a_[j]) * cx - b_[j] * px) / b_[j + 1];
      S ny = ((zy - a_[j]) * cy - b_[j] * py) / b_[j + 1];
      px = cx;
      cx = nx;
      py = cy;
      cy = ny;
      acc += cx * cy;
    }
    return acc;
  }

  template <class S>
  S eval_kernel(S zx, S zy, KernelBranch branch) const {
    const double sep = std::abs(zx - zy);
    const double mag = std::max(std::abs(zx), std::abs(zy));
    if (branch == KernelBranch::automatic)
      branch = (sep <= 1e-6 * mag) ? KernelBranch::direct_sum : KernelBranch::two_term;
    if (branch == KernelBranch::direct_sum) return direct_sum(zx, zy);
    S xl, xu, yl, yu;
    top_pair(zx, xl, xu);
    top_pair(zy, yl, yu);
    const double pref = std::sqrt(static_cast<double>(n_) * (n_ + alpha_));
    return pref * (xu * yl - yu * xl) / (zx - zy);
  }

  int n_;
  double alpha_;
  complex_t scale_;
  std::vector<double> a_, b_;
  double log_norm0_;
};

/// Sum of squares of the unweighted orthonormal polynomials h_k, k < n.
/// Overflow-safe companion of the kernel diagonal: the caller applies the
/// weight exponent alpha*log(z) - z itself.
inline complex_t hfun_sumsq(int n, double alpha, complex_t z) {
  require(n >= 1 && alpha > -1.0, "hfun_sumsq: invalid parameters");
  complex_t prev = 0.0, cur = std::exp(complex_t(-0.5 * std::lgamma(alpha + 1.0), 0.0));
  complex_t acc = cur * cur;
  for (int k = 0; k + 1 < n; ++k) {
    const double a = 2.0 * k + alpha + 1.0;
    const double b = std::sqrt(static_cast<double>(k) * (k + alpha));
    const double bn = std::sqrt(static_cast<double>(k + 1) * (k + 1 + alpha));
    complex_t nxt = ((z - a) * cur - b * prev) / bn;
    prev = cur;
    cur = nxt;
    acc += cur * cur;
  }
  return acc;
}

/// K_N(x, y) through the integral representation built from the boundary
/// functions S1, S2. Exists as an independent oracle for kernel_cd.
inline double kernel_integral_rep(const KernelContext& ctx, double x, double y) {
  require(ctx.real_scale(), "kernel_integral_rep: requires a real scale");
  require(x > 0.0 && y > 0.0, "kernel_integral_rep: requires x, y > 0");
  const double s = ctx.scale().real();
  const int n = ctx.n();
  const double alpha = ctx.alpha();
  const double zx = x / s, zy = y / s;
  const double rn = std::sqrt(static_cast<double>(n));
  const double rm = std::sqrt(n + alpha);
  KernelContext unit(n, alpha);
  auto s12 = [&](double u, double& s1, double& s2) {
    const double pn = unit.phi(n, u);
    const double pm = unit.phi(n - 1, u);
    s1 = (rn * pn + rm * pm) / u;
    s2 = (rm * pn + rn * pm) / u;
  };
  auto integrand = [&](double t) {
    double ax1, ax2, ay1, ay2;
    s12(zx + t, ax1, ax2);
    s12(zy + t, ay1, ay2);
    return ax1 * ay2 + ay1 * ax2;
  };
  const double upper = 4.0 * n + 80.0;
  const QuadRule rule = gauss_legendre(16);
  int panels = std::max(32, static_cast<int>(upper));
  double prev = integrate_panels(integrand, 0.0, upper, panels, rule);
  double cur = integrate_panels(integrand, 0.0, upper, 2 * panels, rule);
  if (!(std::abs(cur - prev) <= 1e-9 * std::max(1e-300, std::abs(cur))))
    throw numeric_error("kernel_integral_rep: quadrature did not converge");
  return 0.5 * std::sqrt(static_cast<double>(n) * (n + alpha)) * cur / s;
}

struct LimitingKernel {
  enum class Kind { sine, airy, bessel };
  Kind kind = Kind::sine;
  double alpha = 0.0;  // Bessel index, used only for Kind::bessel

  static LimitingKernel sine() { return {Kind::sine, 0.0}; }
  static LimitingKernel airy() { return {Kind::airy, 0.0}; }
  static LimitingKernel bessel(double alpha) { return {Kind::bessel, alpha}; }
};

inline double limiting_kernel_eval(const LimitingKernel& k, double u, double v) {
  switch (k.kind) {
    case LimitingKernel::Kind::sine: {
      const double d = pi * (u - v);
      if (std::abs(d) < 1e-8) return 1.0 - d * d / 6.0;
      return std::sin(d) / d;
    }
    case LimitingKernel::Kind::airy: {
      if (std::abs(u - v) <= 1e-8 * std::max(1.0, std::max(std::abs(u), std::abs(v)))) {
        const double m = 0.5 * (u + v);
        const AiryAi am = airy(m);
        return am.ai_prime * am.ai_prime - m * am.ai * am.ai;
      }
      // determinant-consistent orientation: the finite-N soft-edge limit
      const AiryAi au = airy(u), av = airy(v);
      return (au.ai * av.ai_prime - au.ai_prime * av.ai) / (u - v);
    }
    case LimitingKernel::Kind::bessel: {
      if (!(u > 0.0) || !(v > 0.0)) throw std::domain_error("bessel kernel: requires u, v > 0");
      if (std::abs(u - v) <= 1e-8 * std::max(u, v)) {
        const double m = 0.5 * (u + v);
        const double z = std::sqrt(m);
        const BesselJ j = bessel_j(k.alpha, z);
        const double t = 1.0 - k.alpha * k.alpha / (z * z);
        return 0.25 * (j.derivative * j.derivative + t * j.value * j.value);
      }
      const double su = std::sqrt(u), sv = std::sqrt(v);
      const BesselJ ju = bessel_j(k.alpha, su), jv = bessel_j(k.alpha, sv);
      return (ju.value * sv * jv.derivative - jv.value * su * ju.derivative) / (2.0 * (u - v));
    }
  }
  throw std::logic_error("limiting_kernel_eval: unknown kind");
}

/// n-point LUE correlation det[K~(x_i, x_j, s)] by pivoted elimination, n <= 8.
inline double correlation_lue(const KernelContext& ctx, const std::vector<double>& points) {
  require(ctx.real_scale(), "correlation_lue: requires a real scale");
  const int n = static_cast<int>(points.size());
  if (n < 1 || n > 8) throw std::out_of_range("correlation_lue: supports 1 <= n <= 8 points");
  double m[8][8];
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m[i][j] = m[j][i] = ctx.kernel_cd(points[i], points[j]);
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m[piv][j], m[c][j]);
      det = -det;
    }
    if (m[c][c] == 0.0) return 0.0;
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r][c] / m[c][c];
      for (int j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

struct LaguerreRule {
  std::vector<double> x;     // nodes
  std::vector<double> w;     // weights for integrals against x^alpha e^{-x}
  std::vector<double> wbar;  // weights for integrands carrying the weight already
};

/// Generalized Gauss-Laguerre rule from the Jacobi matrix; weights via the
/// reciprocal Christoffel sum 1 / sum_k phi_k(x_i)^2.
inline LaguerreRule gauss_laguerre(int n, double alpha) {
  require(n >= 1 && alpha > -1.0, "gauss_laguerre: invalid parameters");
  std::vector<double> d(n), e(n - 1 > 0 ? n - 1 : 0);
  for (int k = 0; k < n; ++k) d[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(static_cast<double>(k) * (k + alpha));
  LaguerreRule rule;
  rule.x = tridiag_eigenvalues(std::move(d), std::move(e));
  rule.w.resize(n);
  rule.wbar.resize(n);
  KernelContext ctx(n, alpha);
  for (int i = 0; i < n; ++i) {
    const double xi = rule.x[i];
    double prev = 0.0, cur = detail::phi0(alpha, xi, -0.5 * std::lgamma(alpha + 1.0));
    double sum = cur * cur;
    for (int k = 0; k + 1 < n; ++k) {
      double nxt = ((xi - ctx.recurrence_a(k)) * cur - ctx.recurrence_b(k) * prev) /
                   ctx.recurrence_b(k + 1);
      prev = cur;
      cur = nxt;
      sum += cur * cur;
    }
    rule.wbar[i] = 1.0 / sum;
    rule.w[i] = std::exp(alpha * std::log(xi) - xi) / sum;
  }
  return rule;
}

}  // namespace lue
