#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>

#include "harmap/error.hpp"

namespace harmap {

/// log Gamma(x) for x > 0.
///
/// Shifts the argument upward with the recurrence until x >= 15 and then sums
/// the Stirling series through the B_16 term. Relative error stays below 1e-12
/// away from the roots at 1 and 2, which are returned exactly.
inline double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " +
                      std::to_string(x));
  }
  if (x == 1.0 || x == 2.0) return 0.0;

  constexpr double kShiftTarget = 15.0;
  double shift_log = 0.0;
  if (x < kShiftTarget) {
    double product = 1.0;
    while (x < kShiftTarget) {
      product *= x;
      x += 1.0;
    }
    shift_log = std::log(product);
  }

  // B_{2k} / (2k (2k - 1)), k = 1..8
  static constexpr std::array<double, 8> kCoeffs = {
      1.0 / 12.0,        -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0,      -691.0 / 360360.0, 1.0 / 156.0,
      -3617.0 / 122400.0};
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double power = inv;
  for (double c : kCoeffs) {
    series += c * power;
    power *= inv2;
  }
  const double half_log_two_pi = 0.5 * std::log(2.0 * std::numbers::pi);
  return (x - 0.5) * std::log(x) - x + half_log_two_pi + series - shift_log;
}

inline double log_factorial(std::size_t n) {
  return log_gamma(static_cast<double>(n) + 1.0);
}

/// Rising factorial (a)_n = a (a+1) ... (a+n-1) as (log|value|, sign).
struct SignedLog {
  double log_abs;
  int sign;  // -1, 0 or +1
};

inline SignedLog log_pochhammer(double a, std::size_t n) {
  SignedLog out{0.0, 1};
  std::size_t k = 0;
  // Factors with nonpositive argument are multiplied in directly.
  for (; k < n && a + static_cast<double>(k) <= 0.0; ++k) {
    const double factor = a + static_cast<double>(k);
    if (factor == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    out.log_abs += std::log(-factor);
    out.sign = -out.sign;
  }
  if (k < n) {
    const double start = a + static_cast<double>(k);
    out.log_abs += log_gamma(a + static_cast<double>(n)) - log_gamma(start);
  }
  return out;
}

}  // namespace harmap
