#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "lue/common.hpp"
#include "lue/rng.hpp"
#include "lue/tridiag.hpp"

namespace lue {

enum class TraceMode { free_scale, fixed_trace, bounded_trace };

/// Ensemble description: dimensions (n, m with alpha = m - n > -1) plus the
/// trace constraint (free with scale s, fixed trace r, or bounded trace r).
struct EnsembleSpec {
  int n = 1;
  double m = 1.0;
  TraceMode mode = TraceMode::free_scale;
  double parameter = 1.0;  // s for free_scale, r otherwise

  double alpha() const { return m - n; }

  void validate() const {
    require(n >= 1, "EnsembleSpec: requires n >= 1");
    require(alpha() > -1.0, "EnsembleSpec: requires alpha = m - n > -1");
    require(parameter > 0.0, "EnsembleSpec: scale/trace parameter must be positive");
  }

  static EnsembleSpec lue(int n, double alpha, double s = 1.0) {
    return {n, n + alpha, TraceMode::free_scale, s};
  }
  static EnsembleSpec ftlue(int n, double alpha, double r = 1.0) {
    return {n, n + alpha, TraceMode::fixed_trace, r};
  }
  static EnsembleSpec btlue(int n, double alpha, double r = 1.0) {
    return {n, n + alpha, TraceMode::bounded_trace, r};
  }
};

/// One sampled eigenvalue configuration, ascending and nonnegative.
struct Spectrum {
  std::vector<double> values;
  EnsembleSpec spec;
  std::uint64_t seed = 0;

  double trace() const {
    KahanSum s;
    for (double v : values) s.add(v);
    return s.value();
  }
};

namespace detail {

// beta = 2 bidiagonal Laguerre model squared into a symmetric tridiagonal
// matrix: diagonal Gamma(m - i), offdiagonal couplings Gamma(n - 1 - i).
inline std::vector<double> lue_eigenvalues_unit(int n, double alpha, rng::Stream& rs) {
  std::vector<double> g(n), h(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) g[i] = rs.next_gamma(n + alpha - i);
  for (int i = 0; i + 1 < n; ++i) h[i] = rs.next_gamma(static_cast<double>(n - 1 - i));
  std::vector<double> diag(n), off(n > 1 ? n - 1 : 0);
  for (int i = 0; i < n; ++i) diag[i] = g[i] + (i > 0 ? h[i - 1] : 0.0);
  for (int i = 0; i + 1 < n; ++i) off[i] = std::sqrt(h[i] * g[i]);
  std::vector<double> ev = tridiag_eigenvalues(std::move(diag), std::move(off));
  for (double& v : ev) v = std::max(v, 0.0);
  return ev;
}

}  // namespace detail

/// Laguerre unitary ensemble draw, weight x^alpha e^{-x/s}.
inline Spectrum sample_lue(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  require(spec.mode == TraceMode::free_scale, "sample_lue: spec must use the free constraint");
  rng::Stream rs(seed);
  Spectrum sp{detail::lue_eigenvalues_unit(spec.n, spec.alpha(), rs), spec, seed};
  for (double& v : sp.values) v *= spec.parameter;
  return sp;
}

/// Fixed-trace draw: an LUE configuration renormalized to trace r exactly
/// (the trace factorizes from the simplex configuration, so this is exact in law).
inline Spectrum sample_ftlue(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  require(spec.mode == TraceMode::fixed_trace, "sample_ftlue: spec must use the fixed constraint");
  rng::Stream rs(seed);
  std::vector<double> ev;
  for (int attempt = 0;; ++attempt) {
    ev = detail::lue_eigenvalues_unit(spec.n, spec.alpha(), rs);
    KahanSum t;
    for (double v : ev) t.add(v);
    if (t.value() > 0.0) {
      const double f = spec.parameter / t.value();
      for (double& v : ev) v *= f;
      break;
    }
    if (attempt > 8) throw numeric_error("sample_ftlue: degenerate all-zero draw");
  }
  // pin the trace invariant to roundoff by dumping the residual on the top eigenvalue
  KahanSum t2;
  for (double v : ev) t2.add(v);
  ev.back() += spec.parameter - t2.value();
  return {std::move(ev), spec, seed};
}

/// Bounded-trace draw: radial factor u = U^{1/(n(n+alpha))} applied to a
/// trace-1 fixed-trace configuration scaled by r.
inline Spectrum sample_btlue(const EnsembleSpec& spec, std::uint64_t seed) {
  spec.validate();
  require(spec.mode == TraceMode::bounded_trace, "sample_btlue: spec must use the bounded constraint");
  EnsembleSpec inner = EnsembleSpec::ftlue(spec.n, spec.alpha(), 1.0);
  Spectrum sp = sample_ftlue(inner, seed);
  rng::Stream rs(rng::Stream::derive(seed, 0x62744c5545ull));  // radial coordinate stream
  const double n_alpha = spec.n * (spec.n + spec.alpha());
  const double u = std::exp(std::log(rs.next_unit()) / n_alpha);
  for (double& v : sp.values) v *= u * spec.parameter;
  sp.spec = spec;
  sp.seed = seed;
  return sp;
}

inline Spectrum sample(const EnsembleSpec& spec, std::uint64_t seed) {
  switch (spec.mode) {
    case TraceMode::free_scale: return sample_lue(spec, seed);
    case TraceMode::fixed_trace: return sample_ftlue(spec, seed);
    case TraceMode::bounded_trace: return sample_btlue(spec, seed);
  }
  throw std::logic_error("sample: unknown trace mode");
}

/// Von Neumann entropy -sum x_i ln x_i of a trace-1 spectrum.
inline double entropy(const Spectrum& sp) {
  require(sp.spec.mode == TraceMode::fixed_trace && sp.spec.parameter == 1.0,
          "entropy: requires a fixed(1) spectrum");
  if (std::abs(sp.trace() - 1.0) > 1e-9)
    throw std::invalid_argument("entropy: trace must equal 1");
  KahanSum s;
  for (double x : sp.values)
    if (x > 0.0) s.add(-x * std::log(x));
  return std::max(0.0, s.value());
}

}  // namespace lue
