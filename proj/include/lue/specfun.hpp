#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "lue/common.hpp"

namespace lue {

inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw std::domain_error("log_gamma: requires finite x > 0");
  return std::lgamma(x);
}

// Ratio expansion Gamma(x) / (x^a Gamma(x-a)) = sum_s L_s(a) / (s! x^s),
// L_s(a) = a(a-1)...(a-s+1) * B_s^{(a+1)}(0) with Noerlund generalized
// Bernoulli values bootstrapped from the generating function t/(e^t-1).
class GammaRatioSeries {
 public:
  double a = 0.0;
  int max_terms = 0;
  std::vector<double> coefficients;  // L_s(a), s = 0..max_terms-1

  static GammaRatioSeries prepare(double a, int max_terms = 13) {
    require(a >= 0.0, "GammaRatioSeries: requires a >= 0");
    require(max_terms >= 1 && max_terms <= 13, "GammaRatioSeries: max_terms in [1,13]");
    GammaRatioSeries gs;
    gs.a = a;
    gs.max_terms = max_terms;
    // log(t/(e^t-1)) = -t/2 - sum_{k>=2} B_k t^k / (k k!), odd B_k vanish.
    static constexpr std::array<double, 13> bernoulli = {
        1.0, -1.0 / 2.0, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0,
        0.0, -1.0 / 30.0, 0.0, 5.0 / 66.0, 0.0, -691.0 / 2730.0};
    std::array<double, 13> lam{};
    lam[1] = -0.5;
    double kfac = 1.0;
    for (int k = 2; k < 13; ++k) {
      kfac *= k;
      lam[k] = -bernoulli[k] / (k * kfac);
    }
    // (t/(e^t-1))^c = exp(c log f): m e_m = c sum_j j lam_j e_{m-j}
    const double c = a + 1.0;
    std::array<double, 13> e{};
    e[0] = 1.0;
    for (int m = 1; m < max_terms; ++m) {
      double acc = 0.0;
      for (int j = 1; j <= m; ++j) acc += j * lam[j] * e[m - j];
      e[m] = c * acc / m;
    }
    gs.coefficients.resize(max_terms);
    double falling = 1.0, sfac = 1.0;
    for (int s = 0; s < max_terms; ++s) {
      if (s > 0) {
        falling *= (a - (s - 1));
        sfac *= s;
      }
      gs.coefficients[s] = falling * sfac * e[s];  // B_s^{(c)}(0) = s! e_s
    }
    return gs;
  }

  // Truncated value; *truncation holds the magnitude of the last term used.
  double evaluate(double x, int terms, double* truncation = nullptr) const {
    require(terms >= 1 && terms <= max_terms, "GammaRatioSeries: terms exceeds prepared table");
    if (!(x > a + 1.0)) throw std::domain_error("GammaRatioSeries: requires x > a + 1");
    KahanSum sum;
    double last = 0.0, sfac = 1.0, xp = 1.0;
    for (int s = 0; s < terms; ++s) {
      if (s > 0) {
        sfac *= s;
        xp *= x;
      }
      last = coefficients[s] / (sfac * xp);
      sum.add(last);
    }
    if (truncation) *truncation = std::abs(last);
    return sum.value();
  }
};

inline double gamma_ratio(double x, double a, int terms, double* truncation = nullptr) {
  return GammaRatioSeries::prepare(a, std::max(terms, 1)).evaluate(x, terms, truncation);
}

struct BesselJ {
  double value;
  double derivative;
};

namespace detail {

// Ascending series, adequate for z <= 12.
inline double bessel_j_series(double alpha, double z) {
  if (z == 0.0) return alpha == 0.0 ? 1.0 : 0.0;
  double t = std::exp(alpha * std::log(0.5 * z) - std::lgamma(alpha + 1.0));
  const double q = 0.25 * z * z;
  KahanSum sum;
  sum.add(t);
  for (int m = 1; m < 400; ++m) {
    t *= -q / (m * (m + alpha));
    sum.add(t);
    if (std::abs(t) < 1e-18 * (std::abs(sum.value()) + 1e-300) && m > 4) break;
  }
  return sum.value();
}

// Hankel asymptotic expansion truncated at the smallest term, for z > 12.
inline double bessel_j_asymptotic(double alpha, double z) {
  const double mu = 4.0 * alpha * alpha;
  double p = 1.0, q = 0.0;
  double term = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 60; ++k) {
    term *= (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * k * z);
    if (std::abs(term) >= prev || std::abs(term) < 1e-19) break;
    prev = std::abs(term);
    int phase = (k / 2) % 2 ? -1 : 1;  // k=1,2 -> +, k=3,4 -> -, ...
    if (k % 2 == 1)
      q += phase * term;
    else
      p += phase * term;
  }
  const double w = z - alpha * 0.5 * pi - 0.25 * pi;
  return std::sqrt(2.0 / (pi * z)) * (p * std::cos(w) - q * std::sin(w));
}

inline double bessel_j_value(double alpha, double z) {
  return z <= 12.0 ? bessel_j_series(alpha, z) : bessel_j_asymptotic(alpha, z);
}

}  // namespace detail

inline BesselJ bessel_j(double alpha, double z) {
  if (!(alpha > -1.0)) throw std::domain_error("bessel_j: requires alpha > -1");
  if (!(z >= 0.0)) throw std::domain_error("bessel_j: requires z >= 0");
  if (z == 0.0) {
    double v = alpha == 0.0 ? 1.0 : 0.0;
    double d;
    if (alpha == 0.0)
      d = 0.0;
    else if (alpha == 1.0)
      d = 0.5;
    else if (alpha > 1.0)
      d = 0.0;
    else
      throw std::domain_error("bessel_j: derivative singular at z = 0 for alpha in (-1,1)\\{0}");
    return {v, d};
  }
  const double v = detail::bessel_j_value(alpha, z);
  const double vnext = detail::bessel_j_value(alpha + 1.0, z);
  return {v, (alpha / z) * v - vnext};
}

struct AiryAi {
  double ai;
  double ai_prime;
};

namespace detail {

// Maclaurin f/g pair, |z| <= 8.
inline AiryAi airy_series(double z) {
  static const double c1 = std::pow(3.0, -2.0 / 3.0) / std::tgamma(2.0 / 3.0);
  static const double c2 = std::pow(3.0, -1.0 / 3.0) / std::tgamma(1.0 / 3.0);
  const double z3 = z * z * z;
  double fa = 1.0, fb = z;            // current terms of f and g
  KahanSum f, g, fp, gp;              // f, g and their derivatives
  f.add(1.0);
  g.add(z);
  gp.add(1.0);
  for (int k = 1; k < 90; ++k) {
    fa *= z3 / ((3.0 * k - 1.0) * (3.0 * k));
    fb *= z3 / ((3.0 * k) * (3.0 * k + 1.0));
    f.add(fa);
    g.add(fb);
    if (z != 0.0) {
      fp.add(3.0 * k * fa / z);
      gp.add((3.0 * k + 1.0) * fb / z);
    }
    if (std::abs(fa) + std::abs(fb) < 1e-20 * (std::abs(f.value()) + std::abs(g.value())) && k > 4)
      break;
  }
  return {c1 * f.value() - c2 * g.value(), c1 * fp.value() - c2 * gp.value()};
}

// Asymptotic expansions for 8 < |z| <= 20, truncated at the smallest term.
inline AiryAi airy_asymptotic(double z) {
  const double x = std::abs(z);
  const double zeta = (2.0 / 3.0) * x * std::sqrt(x);
  const double x14 = std::pow(x, 0.25);
  // u_k and d_k = -u_k (6k+1)/(6k-1)
  double u = 1.0;
  std::array<double, 40> us{}, ds{};
  us[0] = 1.0;
  ds[0] = 1.0;
  int kmax = 1;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 40; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 1.0) / (72.0 * k);
    double t = u / std::pow(zeta, k);
    if (t >= prev || t < 1e-20) break;
    prev = t;
    us[k] = u;
    ds[k] = -u * (6.0 * k + 1.0) / (6.0 * k - 1.0);
    kmax = k + 1;
  }
  if (z > 0.0) {
    double sa = 0.0, sd = 0.0, zp = 1.0, sign = 1.0;
    for (int k = 0; k < kmax; ++k) {
      sa += sign * us[k] / zp;
      sd += sign * ds[k] / zp;
      zp *= zeta;
      sign = -sign;
    }
    const double pre = std::exp(-zeta) / (2.0 * std::sqrt(pi));
    return {pre * sa / x14, -pre * x14 * sd};
  }
  double pa = 0.0, qa = 0.0, pd = 0.0, qd = 0.0;
  double zp = 1.0, sign = 1.0;
  for (int k = 0; 2 * k < kmax; ++k) {
    pa += sign * us[2 * k] / zp;
    pd += sign * ds[2 * k] / zp;
    if (2 * k + 1 < kmax) {
      qa += sign * us[2 * k + 1] / (zp * zeta);
      qd += sign * ds[2 * k + 1] / (zp * zeta);
    }
    zp *= zeta * zeta;
    sign = -sign;
  }
  const double th = zeta - 0.25 * pi;
  const double isp = 1.0 / std::sqrt(pi);
  return {isp / x14 * (std::cos(th) * pa + std::sin(th) * qa),
          isp * x14 * (std::sin(th) * pd - std::cos(th) * qd)};
}

}  // namespace detail

inline AiryAi airy(double z) {
  if (!(std::abs(z) <= 20.0)) throw std::out_of_range("airy: supported range is |z| <= 20");
  return std::abs(z) <= 8.0 ? detail::airy_series(z) : detail::airy_asymptotic(z);
}

/// Gamma(n_alpha, 1) probability density e^{-x} x^{n_alpha-1} / Gamma(n_alpha),
/// evaluated in log space; underflows to 0 in the far tail.
inline double gamma_density(double n_alpha, double x) {
  if (!(n_alpha > 0.0)) throw std::domain_error("gamma_density: requires n_alpha > 0");
  if (!(x >= 0.0)) throw std::domain_error("gamma_density: requires x >= 0");
  if (x == 0.0) {
    if (n_alpha == 1.0) return 1.0;
    return n_alpha > 1.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  return std::exp(-x + (n_alpha - 1.0) * std::log(x) - std::lgamma(n_alpha));
}

/// Characteristic function e^{iy(N+alpha)} (1 + iy/N)^{-(N^2+N alpha)}.
inline std::complex<double> phi_char(int n, double alpha, double y) {
  require(n >= 1, "phi_char: requires n >= 1");
  const double na = n * (n + alpha);
  const std::complex<double> w(1.0, y / n);
  const std::complex<double> logw = std::log(w);  // principal branch, Re w = 1 > 0
  return std::exp(std::complex<double>(0.0, y * (n + alpha)) - na * logw);
}

}  // namespace lue
