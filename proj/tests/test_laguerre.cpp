#include <catch2/catch_amalgamated.hpp>

#include "lue/laguerre.hpp"
#include "lue/rng.hpp"

using namespace lue;

namespace {
double poly_eval(const std::vector<double>& c, double x) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
  return s;
}
}  // namespace

TEST_CASE("laguerre coefficients, positive-leading convention") {
  CHECK(laguerre_coeffs(0, 1.3) == std::vector<double>{1.0});
  const auto l1 = laguerre_coeffs(1, 2.0);
  CHECK(l1[0] == Catch::Approx(-3.0));
  CHECK(l1[1] == Catch::Approx(1.0));
  SECTION("three-term recurrence at k = 2, alpha = 0") {
    const auto l0 = laguerre_coeffs(0, 0.0), l1a = laguerre_coeffs(1, 0.0),
               l2 = laguerre_coeffs(2, 0.0);
    for (double x : {0.0, 1.0, 5.0})
      CHECK(2.0 * poly_eval(l2, x) ==
            Catch::Approx((x - 3.0) * poly_eval(l1a, x) - poly_eval(l0, x)).margin(1e-12));
  }
  CHECK(laguerre_coeffs(64, 0.0)[64] > 0.0);  // leading 1/64!
  CHECK_THROWS_AS(laguerre_coeffs(65, 0.0), std::out_of_range);
}

TEST_CASE("weighted functions phi") {
  KernelContext ctx(8, 0.0);
  CHECK(ctx.phi(0, 1.0) == Catch::Approx(std::exp(-0.5)).epsilon(1e-15));
  SECTION("orthonormality of phi_5 by Gauss-Laguerre quadrature, 128 nodes") {
    const LaguerreRule rule = gauss_laguerre(128, 0.0);
    KahanSum s;
    for (int i = 0; i < 128; ++i) {
      const double p = ctx.phi(5, rule.x[i]);
      s.add(rule.wbar[i] * p * p);
    }
    CHECK(std::abs(s.value() - 1.0) < 1e-9);
  }
  KernelContext a2(6, 2.0);
  for (int k = 0; k <= 6; ++k) CHECK(a2.phi(k, 0.0) == 0.0);
  CHECK_THROWS_AS(ctx.phi(0, -1.0), std::domain_error);
  CHECK_THROWS_AS(ctx.phi(9, 1.0), std::invalid_argument);
}

TEST_CASE("kernel closed forms, symmetry, trace") {
  SECTION("N = 1 kernel is exp(-(x+y)/2)") {
    KernelContext ctx(1, 0.0);
    CHECK(ctx.kernel_cd(1.0, 2.0) == Catch::Approx(std::exp(-1.5)).epsilon(1e-14));
  }
  SECTION("symmetry on a random grid") {
    KernelContext ctx(12, 0.5);
    rng::Stream rs(321);
    for (int i = 0; i < 40; ++i) {
      const double x = 48.0 * rs.next_unit(), y = 48.0 * rs.next_unit();
      const double a = ctx.kernel_cd(x, y), b = ctx.kernel_cd(y, x);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
  }
  SECTION("trace equals N") {
    const int n = 20;
    const double alpha = 1.0;
    const LaguerreRule rule = gauss_laguerre(4 * n, alpha);
    KernelContext ctx(n, alpha);
    KahanSum tr;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p = ctx.phi(k, rule.x[i]);
        s += p * p;
      }
      tr.add(rule.wbar[i] * s);
    }
    CHECK(std::abs(tr.value() - n) < 1e-7);
  }
}

TEST_CASE("kernel branch consistency near the diagonal") {
  for (double alpha : {0.0, 0.5}) {
    KernelContext ctx(20, alpha);
    for (double x : {5.0, 20.0, 50.0, 70.0}) {
      for (double f : {1e-6, 3e-6, 1e-5}) {
        const double y = x * (1.0 + f);
        const double a = ctx.kernel_cd(x, y, KernelBranch::direct_sum);
        const double b = ctx.kernel_cd(x, y, KernelBranch::two_term);
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
      }
      // at the tightest separations the two-term numerator loses ~1 digit more
      const double y = x * (1.0 + 1e-7);
      const double a = ctx.kernel_cd(x, y, KernelBranch::direct_sum);
      const double b = ctx.kernel_cd(x, y, KernelBranch::two_term);
      CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
    }
  }
}

TEST_CASE("kernel scale relation, real and complex") {
  const int n = 16;
  const double alpha = 1.0;
  KernelContext unit(n, alpha);
  for (complex_t s : {complex_t(0.25, 0.0), complex_t(1.0 / (4.0 * n), 0.0),
                      complex_t(1.0 / (4.0 * n), 0.3 / (4.0 * n))}) {
    KernelContext ctx(n, alpha, s);
    for (auto [x, y] : {std::pair<double, double>{0.9, 1.3}, {0.2, 0.2}, {1.1, 0.4}}) {
      const complex_t lhs = ctx.kernel_cd(complex_t(x, 0.0), complex_t(y, 0.0));
      const complex_t rhs = unit.kernel_cd(complex_t(x, 0.0) / s, complex_t(y, 0.0) / s) / s;
      CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
    }
  }
  CHECK_THROWS_AS(KernelContext(4, 0.0, complex_t(-1.0, 0.0)), std::domain_error);
}

TEST_CASE("kernel positive semidefiniteness via pivoted Cholesky") {
  KernelContext ctx(12, 0.0, complex_t(1.0 / 48.0, 0.0));
  const int m = 16;
  std::vector<double> pts(m);
  for (int i = 0; i < m; ++i) pts[i] = 0.03 + 0.06 * i;
  std::vector<std::vector<double>> g(m, std::vector<double>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g[i][j] = ctx.kernel_cd(pts[i], pts[j]);
  double min_pivot = std::numeric_limits<double>::infinity();
  for (int k = 0; k < m; ++k) {
    min_pivot = std::min(min_pivot, g[k][k]);
    if (g[k][k] <= 0.0) break;
    for (int i = k + 1; i < m; ++i)
      for (int j = k + 1; j < m; ++j) g[i][j] -= g[i][k] * g[j][k] / g[k][k];
  }
  CHECK(min_pivot >= -1e-8);
}

TEST_CASE("integral representation oracle") {
  SECTION("N = 1 closed form") {
    KernelContext ctx(1, 0.0);
    CHECK(kernel_integral_rep(ctx, 1.0, 1.0) == Catch::Approx(std::exp(-1.0)).epsilon(1e-10));
  }
  for (auto [n, alpha] : {std::pair<int, double>{8, 0.0}, {8, 2.0}}) {
    KernelContext ctx(n, alpha);
    for (auto [fx, fy] : {std::pair<double, double>{0.3, 0.5}, {0.4, 0.4}}) {
      const double x = 4.0 * n * fx, y = 4.0 * n * fy;
      const double a = kernel_integral_rep(ctx, x, y);
      const double b = ctx.kernel_cd(x, y);
      CHECK(std::abs(a - b) <= 1e-6 * std::abs(b));
    }
  }
}

TEST_CASE("limiting kernels") {
  const auto sine = LimitingKernel::sine();
  CHECK(limiting_kernel_eval(sine, 0.7, 0.7) == 1.0);
  CHECK(limiting_kernel_eval(sine, 0.0, 0.5) == Catch::Approx(2.0 / pi).epsilon(1e-14));

  const auto bes = LimitingKernel::bessel(0.0);
  SECTION("bessel diagonal limit 1/4 at the origin") {
    for (double u : {1e-4, 1e-6, 1e-8})
      CHECK(limiting_kernel_eval(bes, u, u) == Catch::Approx(0.25).margin(1e-3 * std::sqrt(u) + 1e-9));
    CHECK(limiting_kernel_eval(bes, 1e-8, 1e-8) == Catch::Approx(0.25).margin(1e-8));
  }
  SECTION("symmetry and diagonal continuity") {
    const auto ai = LimitingKernel::airy();
    for (auto k : {sine, ai, bes}) {
      for (double u : {0.3, 1.1, 2.5}) {
        for (double v : {0.4, 1.9}) CHECK(limiting_kernel_eval(k, u, v) == limiting_kernel_eval(k, v, u));
        const double eps = 1e-6;
        CHECK(std::abs(limiting_kernel_eval(k, u, u + eps) - limiting_kernel_eval(k, u, u)) <
              10.0 * eps);
      }
    }
  }
  CHECK_THROWS_AS(limiting_kernel_eval(bes, -1.0, 2.0), std::domain_error);
}

TEST_CASE("determinantal correlations") {
  KernelContext ctx(2, 0.0);
  SECTION("n = 1 equals the diagonal") {
    CHECK(correlation_lue(ctx, {1.5}) == Catch::Approx(ctx.kernel_diag(1.5)).epsilon(1e-14));
  }
  SECTION("2x2 determinant by hand") {
    const double k11 = ctx.kernel_diag(1.0), k22 = ctx.kernel_diag(2.0),
                 k12 = ctx.kernel_cd(1.0, 2.0);
    CHECK(correlation_lue(ctx, {1.0, 2.0}) == Catch::Approx(k11 * k22 - k12 * k12).epsilon(1e-12));
  }
  SECTION("coincident points collapse") {
    const double base = correlation_lue(ctx, {1.0, 2.0});
    const double tiny = correlation_lue(ctx, {1.0, 1.0 + 1e-9});
    CHECK(std::abs(tiny) < 1e-9 * std::abs(base) + 1e-15);
  }
  CHECK_THROWS_AS(correlation_lue(ctx, std::vector<double>(9, 1.0)), std::out_of_range);
}

TEST_CASE("Marchenko-Pastur law") {
  CHECK(mp_density(0.5) == Catch::Approx(2.0 / pi).epsilon(1e-15));
  CHECK(mp_density(1.5) == 0.0);
  CHECK(mp_density(-0.1) == 0.0);
  CHECK(mp_cdf(1.0) == 1.0);
  // integrate with x = sin^2(theta), smooth at both endpoints
  auto by_angle = [](double th) {
    const double s = std::sin(th), c = std::cos(th);
    return mp_density(s * s) * 2.0 * s * c;
  };
  const double mass = integrate_adaptive(by_angle, 0.0, 0.5 * pi, 1e-12, 16, 4096, "mp mass");
  CHECK(std::abs(mass - 1.0) < 1e-10);
  const double part = integrate_adaptive(by_angle, 0.0, std::asin(std::sqrt(0.3)), 1e-12, 16,
                                         4096, "mp partial");
  CHECK(mp_cdf(0.3) == Catch::Approx(part).epsilon(1e-10));
}

TEST_CASE("gauss_laguerre exactness") {
  const double alpha = 0.7;
  const LaguerreRule rule = gauss_laguerre(24, alpha);
  for (int m = 0; m <= 10; ++m) {
    KahanSum s;
    for (std::size_t i = 0; i < rule.x.size(); ++i) s.add(rule.w[i] * std::pow(rule.x[i], m));
    CHECK(s.value() == Catch::Approx(std::exp(std::lgamma(alpha + m + 1.0))).epsilon(1e-12));
  }
}

TEST_CASE("recurrence cache reproduces h_0 and h_1") {
  const double alpha = 0.8;
  KernelContext ctx(4, alpha);
  CHECK(ctx.recurrence_a(0) == Catch::Approx(alpha + 1.0).epsilon(1e-14));
  CHECK(ctx.recurrence_b(1) == Catch::Approx(std::sqrt(1.0 + alpha)).epsilon(1e-14));
  // phi_1(x) = (x - alpha - 1)/sqrt(Gamma(alpha+2)) * x^{alpha/2} e^{-x/2}
  const double x = 2.3;
  const double w = std::exp(0.5 * (alpha * std::log(x) - x));
  const double want = w * (x - alpha - 1.0) / std::sqrt(std::exp(std::lgamma(alpha + 2.0)));
  CHECK(ctx.phi(1, x) == Catch::Approx(want).epsilon(1e-14));
}
