#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace lue {

inline constexpr const char* version_string = "0.1.0";

inline constexpr double pi = 3.14159265358979323846264338327950288;

/// Thrown when a quadrature or iteration fails to reach its tolerance.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Compensated (Kahan) accumulator.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

inline bool nearly_equal(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

inline void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace lue
