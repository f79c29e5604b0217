#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace harmap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle into (-pi, pi].
inline double wrap_phase(double phase) {
  if (!std::isfinite(phase)) return 0.0;
  double w = std::remainder(phase, kTwoPi);
  if (w <= -std::numbers::pi) w += kTwoPi;
  return w;
}

/// log(e^a + e^b) without overflow; either argument may be -inf.
inline double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// log(e^a - e^b) for a >= b; -inf when equal.
inline double log_sub(double a, double b) {
  if (b == -kInf) return a;
  if (b >= a) return -kInf;
  return a + std::log1p(-std::exp(b - a));
}

/// A complex number held as (log|z|, arg z).
///
/// Coefficients of entire functions range from factorial growth to factorial
/// decay; storing the logarithm of the magnitude keeps every index finite. Zero
/// is encoded as log_abs = -inf with phase 0.
struct ScaledComplex {
  double log_abs = -kInf;
  double phase = 0.0;

  constexpr ScaledComplex() = default;
  ScaledComplex(double log_abs_, double phase_)
      : log_abs(log_abs_), phase(log_abs_ == -kInf ? 0.0 : wrap_phase(phase_)) {}

  static ScaledComplex zero() { return {}; }
  static ScaledComplex one() { return {0.0, 0.0}; }

  static ScaledComplex from_log(double log_abs, double phase = 0.0) {
    return {log_abs, phase};
  }

  static ScaledComplex from_complex(std::complex<double> z) {
    if (z == 0.0) return {};
    return {std::log(std::abs(z)), std::arg(z)};
  }

  static ScaledComplex from_real(double x) {
    if (x == 0.0) return {};
    return {std::log(std::fabs(x)), x < 0 ? std::numbers::pi : 0.0};
  }

  bool is_zero() const { return log_abs == -kInf; }

  double abs() const { return std::exp(log_abs); }

  std::complex<double> to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(std::exp(log_abs), phase);
  }

  ScaledComplex conj() const { return {log_abs, -phase}; }

  /// Multiplies the magnitude by e^delta.
  ScaledComplex scaled_log(double delta) const {
    if (is_zero()) return {};
    return {log_abs + delta, phase};
  }

  friend ScaledComplex operator*(const ScaledComplex& x, const ScaledComplex& y) {
    if (x.is_zero() || y.is_zero()) return {};
    return {x.log_abs + y.log_abs, x.phase + y.phase};
  }

  /// Division by zero yields +inf magnitude; callers guard degenerate divisors.
  friend ScaledComplex operator/(const ScaledComplex& x, const ScaledComplex& y) {
    if (x.is_zero()) return {};
    return {x.log_abs - y.log_abs, x.phase - y.phase};
  }

  friend bool operator==(const ScaledComplex&, const ScaledComplex&) = default;
};

/// Neumaier's compensated summation. Order-dependent but bit-reproducible for
/// a fixed order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace harmap
