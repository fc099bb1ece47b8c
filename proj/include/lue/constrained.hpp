#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "lue/common.hpp"
#include "lue/ensembles.hpp"
#include "lue/laguerre.hpp"
#include "lue/quadrature.hpp"
#include "lue/specfun.hpp"

namespace lue {

/// Monomial coefficients c_l of the weight-stripped LUE 1-point function,
/// R_1^{LUE,1/(4N)}(x) = x^alpha e^{-4Nx} sum_l c_l x^l. The extraction runs
/// in the variable z = 4Nx where the h_k coefficients stay moderate.
struct PolyExpansion {
  int n = 0;
  double alpha = 0.0;
  std::vector<double> coefficients;  // c_l, l = 0..2n-2
  std::vector<double> zcoeffs;       // same polynomial in z = 4Nx, c_l = zcoeffs_l (4N)^{l+alpha+1}
};

inline PolyExpansion lue_poly_expansion(int n, double alpha) {
  require(alpha > -1.0, "lue_poly_expansion: requires alpha > -1");
  if (n < 1 || n > 24) throw std::out_of_range("lue_poly_expansion: supports 1 <= n <= 24");
  // h_k coefficient vectors via the orthonormal three-term recurrence
  std::vector<std::vector<double>> h(n);
  h[0] = {std::exp(-0.5 * std::lgamma(alpha + 1.0))};
  for (int k = 0; k + 1 < n; ++k) {
    const double a = 2.0 * k + alpha + 1.0;
    const double b = std::sqrt(static_cast<double>(k) * (k + alpha));
    const double bn = std::sqrt(static_cast<double>(k + 1) * (k + 1 + alpha));
    std::vector<double> next(k + 2, 0.0);
    for (int j = 0; j <= k; ++j) {
      next[j + 1] += h[k][j] / bn;
      next[j] -= a * h[k][j] / bn;
    }
    if (k > 0)
      for (int j = 0; j < k; ++j) next[j] -= b * h[k - 1][j] / bn;
    h[k + 1] = std::move(next);
  }
  std::vector<KahanSum> acc(2 * n - 1);
  for (int k = 0; k < n; ++k)
    for (std::size_t i = 0; i < h[k].size(); ++i)
      for (std::size_t j = 0; j < h[k].size(); ++j) acc[i + j].add(h[k][i] * h[k][j]);
  PolyExpansion pe;
  pe.n = n;
  pe.alpha = alpha;
  pe.zcoeffs.resize(2 * n - 1);
  pe.coefficients.resize(2 * n - 1);
  const double l4n = std::log(4.0 * n);
  for (int l = 0; l < 2 * n - 1; ++l) {
    pe.zcoeffs[l] = acc[l].value();
    pe.coefficients[l] = pe.zcoeffs[l] * std::exp((l + alpha + 1.0) * l4n);
  }
  return pe;
}

/// R_1^{LUE,1/(4N)}(x) rebuilt from the expansion (test surface for the
/// kernel-diagonal oracle and the hard-edge factor structure).
inline double lue_density_from_expansion(const PolyExpansion& pe, double x) {
  require(x >= 0.0, "lue_density_from_expansion: requires x >= 0");
  const double z = 4.0 * pe.n * x;
  if (z == 0.0) {
    if (pe.alpha > 0.0) return 0.0;
    if (pe.alpha < 0.0) return std::numeric_limits<double>::infinity();
    return 4.0 * pe.n * pe.zcoeffs[0];
  }
  double s = 0.0;
  for (int l = 2 * pe.n - 2; l >= 0; --l) s = s * z + pe.zcoeffs[l];
  if (s == 0.0) return 0.0;
  const double lv = std::log(std::abs(s)) + std::log(4.0 * pe.n) + pe.alpha * std::log(z) - z;
  return std::copysign(std::exp(lv), s);
}

/// Exact fixed-trace 1-point density. Each monomial of the expansion maps to
/// a beta-type factor; general r enters through the homogeneity
/// R^{delta,r}(x) = R^{delta,1}(x/r)/r. Gamma ratios run in log space.
/// *noise receives the absolute roundoff scale of the signed-term sum.
inline double ftlue_density_series(const PolyExpansion& pe, double r, double x,
                                   double* noise = nullptr) {
  require(r > 0.0, "ftlue_density_series: requires r > 0");
  const int n = pe.n;
  const double alpha = pe.alpha;
  if (n < 2)
    throw std::domain_error(
        "ftlue_density_series: n = 1 puts Gamma(n(n+alpha)-1-l') at a pole for l = 0 "
        "(the fixed-trace law is a point mass)");
  const double t = x / r;
  if (t < 0.0 || t > 1.0) return 0.0;
  const double r0 = 0.25 * (n + alpha);
  const double xb = t * r0;  // argument at the base trace r0
  const double na = n * (n + alpha);
  const double lgna = std::lgamma(na);
  const double lnna = std::log(na);
  const double lx = xb > 0.0 ? std::log(xb) : -std::numeric_limits<double>::infinity();
  const double l1t = t < 1.0 ? std::log1p(-t) : -std::numeric_limits<double>::infinity();
  const int terms = 2 * n - 1;
  double mx = -std::numeric_limits<double>::infinity();
  std::vector<double> lt(terms);
  for (int l = 0; l < terms; ++l) {
    const double lp = l + alpha;
    const double e = na - lp - 2.0;  // exponent of (1 - t)
    const double garg = na - 1.0 - lp;
    if (!(garg > 0.0)) throw std::domain_error("ftlue_density_series: nonpositive Gamma argument");
    if (pe.coefficients[l] == 0.0) {
      lt[l] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double v = lgna - (lp + 1.0) * lnna - std::lgamma(garg);
    v += std::log(std::abs(pe.coefficients[l]));
    if (lp != 0.0) v += lp * lx;
    if (e != 0.0) v += e * l1t;
    lt[l] = v;
    mx = std::max(mx, v);
  }
  if (!std::isfinite(mx)) {
    if (noise) *noise = 0.0;
    return mx > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  KahanSum sum, absum;
  for (int l = 0; l < terms; ++l) {
    if (lt[l] == -std::numeric_limits<double>::infinity()) continue;
    const double term = std::exp(lt[l] - mx);
    sum.add(std::copysign(term, pe.coefficients[l]));
    absum.add(term);
  }
  if (noise)
    *noise = std::numeric_limits<double>::epsilon() * absum.value() * std::exp(mx) * (r0 / r);
  return std::exp(mx) * sum.value() * (r0 / r);
}

namespace detail {

// phi_N(y) * Ktilde_N(x, x, 1/(4N(1+iy/N))) with every exponential folded
// into a single exponent, safe on the tail contour where Re(x/s) < 0.
inline complex_t fourier_integrand(int n, double alpha, double x, complex_t y) {
  const double na = n * (n + alpha);
  const complex_t i(0.0, 1.0);
  const complex_t w = 1.0 + i * y / static_cast<double>(n);
  const complex_t z = 4.0 * n * x * w;
  const complex_t expo =
      i * y * (n + alpha) + (1.0 - na) * std::log(w) + std::log(4.0 * n) + alpha * std::log(z) - z;
  return std::exp(expo) * hfun_sumsq(n, alpha, z);
}

}  // namespace detail

struct FourierDiagnostics {
  double imag_residual = 0.0;  // |Im J| / |Re J| of the assembled integral
  double y_cutoff = 0.0;
};

/// Fixed-trace density at the base trace r = (N+alpha)/4 by inverting the
/// characteristic-function identity: quadrature over [-Y, Y] with Y driven by
/// |phi_N|, plus exact vertical-contour tail corrections at +-Y.
inline double ftlue_density_fourier(int n, double alpha, double x,
                                    FourierDiagnostics* diag = nullptr) {
  require(alpha > -1.0, "ftlue_density_fourier: requires alpha > -1");
  if (n < 2 || n > 12) throw std::out_of_range("ftlue_density_fourier: supports 2 <= n <= 12");
  const double r0 = 0.25 * (n + alpha);
  if (!(x > 0.0 && x < r0))
    throw std::domain_error("ftlue_density_fourier: requires x in (0, (n+alpha)/4)");
  const double na = n * (n + alpha);
  // |phi_N(Y)| = (1+Y^2/N^2)^{-na/2} below 1e-12, then doubled
  const double yc = 2.0 * n * std::sqrt(std::pow(10.0, 24.0 / na) - 1.0);
  auto h = [&](complex_t y) { return detail::fourier_integrand(n, alpha, x, y); };
  // real-axis part, panel width tied to the largest phase slope
  const double freq = 2.0 * (n + alpha) + 4.0 * x + 2.0;
  const double width = 2.0 * pi / (10.0 * freq);
  const int panels = std::max(16, static_cast<int>(std::ceil(yc / width)));
  const QuadRule rule = gauss_legendre(12);
  std::complex<double> axis = 0.0;
  {
    KahanSum re, im;
    const double hh = 2.0 * yc / panels;
    for (int p = 0; p < panels; ++p) {
      const double lo = -yc + p * hh;
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const complex_t val = h(complex_t(lo + 0.5 * hh * (rule.x[q] + 1.0), 0.0));
        re.add(0.5 * hh * rule.w[q] * val.real());
        im.add(0.5 * hh * rule.w[q] * val.imag());
      }
    }
    axis = complex_t(re.value(), im.value());
  }
  // vertical rays: int_Y^inf = i int_0^inf h(Y+it) dt and the mirrored piece
  const double c = (n + alpha) - 4.0 * x;  // decay rate along the rays
  static const LaguerreRule glag = gauss_laguerre(48, 0.0);
  auto ray = [&](double sign) {
    complex_t acc = 0.0;
    for (int q = 0; q < 48; ++q) {
      const double t = glag.x[q] / c;
      acc += glag.wbar[q] * h(complex_t(sign * yc, t));
    }
    return acc / c;
  };
  const complex_t i(0.0, 1.0);
  const complex_t rp = ray(+1.0), rm = ray(-1.0);
  const complex_t total = axis + i * rp - i * rm;
  const double scale = 2.0 * pi * std::exp(std::log(static_cast<double>(n)) - na +
                                           (na - 1.0) * std::log(na) - std::lgamma(na));
  // the density has genuine zeros, so the residue is measured against the
  // quadrature component scale as well as the assembled real part
  const double compmag = std::abs(axis) + std::abs(rp) + std::abs(rm) + 1e-300;
  const double residual = std::abs(total.imag()) / std::max(std::abs(total.real()), compmag);
  if (diag) {
    diag->imag_residual = residual;
    diag->y_cutoff = yc;
  }
  const double value = total.real() / scale;
  // deep in the tail the true density sits below the quadrature's absolute
  // resolution; the returned near-zero is honest there, so only a residue
  // failure on a resolvable value is an error
  if (residual > 1e-8 && std::abs(value) > 1e-10)
    throw numeric_error("ftlue_density_fourier: imaginary residue above tolerance");
  return value;
}

/// Bounded-trace density as the radial mixture of fixed-trace densities over
/// u in [u_min, 1], where the u^{n(n+alpha)} weight concentrates.
inline double btlue_density_radial(const PolyExpansion& pe, double r, double x) {
  require(r > 0.0, "btlue_density_radial: requires r > 0");
  const int n = pe.n;
  const double alpha = pe.alpha;
  if (x < 0.0 || x > r) return 0.0;
  if (n == 1) {  // the fixed-trace factor is a point mass; mixture in closed form
    if (x == 0.0)
      return alpha == 0.0 ? 1.0 / r
                          : (alpha > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return (alpha + 1.0) * std::pow(x / r, alpha) / r;
  }
  const double na = n * (n + alpha);
  const double u_concentrate = 1.0 - 10.0 * std::log(na) / na;
  const double u_min = std::max(x / r, std::max(u_concentrate, 0.0));
  if (u_min >= 1.0) return 0.0;
  double noise_peak = 0.0;
  auto g = [&](double u) {
    double pt_noise = 0.0;
    const double w = na * std::exp((na - 2.0) * std::log(u));
    const double v = w * ftlue_density_series(pe, r, x / u, &pt_noise);
    noise_peak = std::max(noise_peak, w * pt_noise);
    return v;
  };
  // geometric panels accumulating at u = 1 resolve the u^{na} concentration
  std::vector<double> knots{u_min};
  for (double span = (1.0 - u_min) * 0.6; span > 1e-14 * na; span *= 0.6)
    knots.push_back(1.0 - span);
  knots.push_back(1.0);
  const QuadRule coarse = gauss_legendre(12), fine = gauss_legendre(24);
  double val = 0.0, val_fine = 0.0;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    val += integrate_panels(g, knots[j], knots[j + 1], 1, coarse);
    val_fine += integrate_panels(g, knots[j], knots[j + 1], 1, fine);
  }
  // quadrature error must sit below the series route's own cancellation noise
  if (!(std::abs(val_fine - val) <= 1e-9 * std::abs(val_fine) + 100.0 * noise_peak + 1e-12))
    throw numeric_error("btlue_density_radial: quadrature did not converge");
  val = val_fine;
  if (u_concentrate > x / r) {  // analytically bounded remainder below the window
    double peak = 0.0;
    for (int q = 0; q < 16; ++q) {
      const double u = x / r + (u_concentrate - x / r) * (q + 0.5) / 16.0;
      peak = std::max(peak, ftlue_density_series(pe, r, x / u) / u);
    }
    const double bound = peak * std::exp((na - 1.0) * std::log(u_concentrate)) * na / (na - 1.0);
    if (bound > 1e-9 * std::max(std::abs(val), 1e-12))
      throw numeric_error("btlue_density_radial: remainder bound above tolerance");
  }
  return val;
}

inline double btlue_density_radial(int n, double alpha, double r, double x) {
  if (n == 1) {
    PolyExpansion pe;
    pe.n = 1;
    pe.alpha = alpha;
    return btlue_density_radial(pe, r, x);
  }
  return btlue_density_radial(lue_poly_expansion(n, alpha), r, x);
}

struct MixtureCheck {
  double lhs;  // LUE density from the kernel diagonal
  double rhs;  // Gamma mixture of fixed-trace densities over the trace variable
};

/// Both sides of the identity R_1^{LUE,s}(x) = int R_1^{delta,u}(x) gamma(u/s) s^{-1} du.
inline MixtureCheck lue_mixture_check(int n, double alpha, double s, double x) {
  require(s > 0.0 && x > 0.0, "lue_mixture_check: requires s, x > 0");
  if (n < 1 || n > 8) throw std::out_of_range("lue_mixture_check: supports 1 <= n <= 8");
  KernelContext ctx(n, alpha, s);
  const double lhs = ctx.kernel_diag(x);
  const double na = n * (n + alpha);
  if (n == 1)  // fixed-trace factor is a point mass at u = x
    return {lhs, gamma_density(na, x / s) / s};
  const PolyExpansion pe = lue_poly_expansion(n, alpha);
  const double spread = 12.0 * std::sqrt(na) + 40.0;
  const double lo = std::max(x, s * std::max(0.0, na - spread));
  const double hi = std::max(s * (na + spread), lo * (1.0 + 1e-6));
  auto f = [&](double u) { return ftlue_density_series(pe, u, x) * gamma_density(na, u / s) / s; };
  const double rhs = integrate_adaptive(f, lo, hi, 1e-11, 32, 8192, "trace mixture");
  return {lhs, rhs};
}

enum class DensityRoute { series, fourier, radial, monte_carlo };

/// A 1-point density evaluated on a grid, tagged with the route that
/// produced it. Fixed- and bounded-trace densities vanish beyond x = r.
struct ConstrainedDensity {
  EnsembleSpec spec;
  std::vector<double> grid;
  std::vector<double> values;
  DensityRoute route = DensityRoute::series;

  void validate() const {
    require(grid.size() == values.size(), "ConstrainedDensity: grid/value size mismatch");
    double peak = 0.0;
    for (double v : values) peak = std::max(peak, v);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      require(values[i] >= -1e-9 * peak, "ConstrainedDensity: negative value beyond tolerance");
      // histogram carriers tag bin centers, so the support cut binds only on
      // the exact routes
      if (route != DensityRoute::monte_carlo && grid[i] > spec.parameter)
        require(values[i] == 0.0, "ConstrainedDensity: support extends past the trace bound");
    }
  }
};

/// Evaluates the exact density of a constrained ensemble on a grid by the
/// requested route. The Fourier route reaches the general trace r through
/// the homogeneity of the fixed-trace correlations.
inline ConstrainedDensity constrained_density(const EnsembleSpec& spec,
                                              std::vector<double> grid, DensityRoute route) {
  spec.validate();
  require(spec.mode != TraceMode::free_scale,
          "constrained_density: spec must carry a fixed or bounded trace");
  ConstrainedDensity out;
  out.spec = spec;
  out.route = route;
  const int n = spec.n;
  const double alpha = spec.alpha();
  const double r = spec.parameter;
  out.values.resize(grid.size());
  switch (route) {
    case DensityRoute::series: {
      require(spec.mode == TraceMode::fixed_trace, "constrained_density: series route is fixed-trace");
      const PolyExpansion pe = lue_poly_expansion(n, alpha);
      for (std::size_t i = 0; i < grid.size(); ++i)
        out.values[i] = ftlue_density_series(pe, r, grid[i]);
      break;
    }
    case DensityRoute::fourier: {
      require(spec.mode == TraceMode::fixed_trace, "constrained_density: fourier route is fixed-trace");
      const double r0 = 0.25 * (n + alpha);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double xb = grid[i] * r0 / r;
        out.values[i] =
            (xb > 0.0 && xb < r0) ? (r0 / r) * ftlue_density_fourier(n, alpha, xb) : 0.0;
      }
      break;
    }
    case DensityRoute::radial: {
      require(spec.mode == TraceMode::bounded_trace, "constrained_density: radial route is bounded-trace");
      const PolyExpansion pe = n == 1 ? PolyExpansion{1, alpha, {}, {}} : lue_poly_expansion(n, alpha);
      for (std::size_t i = 0; i < grid.size(); ++i)
        out.values[i] = btlue_density_radial(pe, r, grid[i]);
      break;
    }
    case DensityRoute::monte_carlo:
      throw std::invalid_argument("constrained_density: the monte_carlo route is sampler-built");
  }
  out.grid = std::move(grid);
  return out;
}

enum class TailMode { fixed, bounded };

struct TailCheck {
  double log_tail;   // exact log of the tail quantity
  double predicted;  // leading-order prediction
};

/// Concentration of the trace variable. Fixed mode reports the standardized
/// radial-weight boundary value log(sqrt(2 pi) N gamma(N(N+alpha)(1 +- b)))
/// whose limit is -(Nb)^2/2; bounded mode reports log((1-b)^{N(N+alpha)})
/// with prediction -N^2 b.
inline TailCheck concentration_tail(int n, double alpha, double b, TailMode mode) {
  require(n >= 1 && alpha > -1.0, "concentration_tail: invalid parameters");
  require(b > 0.0 && b < 1.0, "concentration_tail: requires b in (0, 1)");
  const double na = n * (n + alpha);
  if (mode == TailMode::bounded)
    return {na * std::log1p(-b), -static_cast<double>(n) * n * b};
  auto boundary = [&](double u) {
    const double arg = na * u;
    return 0.5 * std::log(2.0 * pi) + std::log(static_cast<double>(n)) - arg +
           (na - 1.0) * std::log(arg) - std::lgamma(na);
  };
  return {std::max(boundary(1.0 + b), boundary(1.0 - b)),
          -0.5 * static_cast<double>(n) * n * b * b};
}

}  // namespace lue
