#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iostream>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "harmap/error.hpp"
#include "harmap/scaled_complex.hpp"
#include "harmap/special.hpp"

namespace harmap {

/// Immutable, indexed access to power-series coefficients c_0, c_1, ...
///
/// A stream is either backed by a finite list (a polynomial; coefficients past
/// n_max() read as zero) or by a closed-form generator. Copies share state.
class CoeffStream {
 public:
  using Generator = std::function<ScaledComplex(std::size_t)>;
  static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

  /// The zero stream.
  CoeffStream() : CoeffStream(std::vector<ScaledComplex>{ScaledComplex::zero()}, "0") {}

  CoeffStream(std::vector<ScaledComplex> values, std::string label) {
    if (values.empty()) values.push_back(ScaledComplex::zero());
    const std::size_t top = values.size() - 1;
    impl_ = std::make_shared<const Impl>(Impl{{}, std::move(values), top, std::move(label)});
  }

  static CoeffStream from_complex(std::span<const std::complex<double>> values,
                                  std::string label = "poly") {
    std::vector<ScaledComplex> v;
    v.reserve(values.size());
    for (auto z : values) v.push_back(ScaledComplex::from_complex(z));
    return CoeffStream(std::move(v), std::move(label));
  }

  static CoeffStream from_complex(std::initializer_list<std::complex<double>> values,
                                  std::string label = "poly") {
    return from_complex(std::span<const std::complex<double>>(values.begin(), values.size()),
                        std::move(label));
  }

  /// Generator-backed stream. n_max may be kUnbounded.
  static CoeffStream generated(Generator gen, std::size_t n_max, std::string label) {
    CoeffStream s;
    s.impl_ = std::make_shared<const Impl>(Impl{std::move(gen), {}, n_max, std::move(label)});
    return s;
  }

  ScaledComplex coeff(std::size_t n) const {
    if (n > impl_->n_max) return ScaledComplex::zero();
    if (impl_->gen) return impl_->gen(n);
    return impl_->values[n];
  }

  std::size_t n_max() const { return impl_->n_max; }
  bool bounded() const { return impl_->n_max != kUnbounded; }
  const std::string& label() const { return impl_->label; }

  /// Coefficients 0..n-1, materialized once for repeated evaluation.
  std::vector<ScaledComplex> prefix(std::size_t n) const {
    std::vector<ScaledComplex> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(coeff(k));
    return out;
  }

  /// Number of stored coefficients when bounded, else `fallback`.
  std::size_t length_or(std::size_t fallback) const {
    return bounded() ? impl_->n_max + 1 : fallback;
  }

  /// c * s, coefficientwise.
  CoeffStream scaled(ScaledComplex c, std::string label) const {
    CoeffStream base = *this;
    return generated([base, c](std::size_t n) { return c * base.coeff(n); }, n_max(),
                     std::move(label));
  }

  /// The stream with coefficient `n` replaced.
  CoeffStream with_coeff(std::size_t n, ScaledComplex value, std::string label) const {
    CoeffStream base = *this;
    const std::size_t top = bounded() ? std::max(n_max(), n) : kUnbounded;
    return generated(
        [base, n, value](std::size_t k) { return k == n ? value : base.coeff(k); }, top,
        std::move(label));
  }

 private:
  struct Impl {
    Generator gen;
    std::vector<ScaledComplex> values;
    std::size_t n_max;
    std::string label;
  };
  std::shared_ptr<const Impl> impl_;
};

/// f = h + conj(g) with g(0) = 0.
class HarmonicMap {
 public:
  HarmonicMap() = default;
  HarmonicMap(CoeffStream h, CoeffStream g) : h_(std::move(h)), g_(std::move(g)) {
    if (!g_.coeff(0).is_zero()) {
      throw DomainError("HarmonicMap: co-analytic part must vanish at the origin (b_0 = 0)");
    }
  }

  /// Analytic map (g = 0).
  static HarmonicMap analytic(CoeffStream h) { return HarmonicMap(std::move(h), CoeffStream()); }

  const CoeffStream& h() const { return h_; }
  const CoeffStream& g() const { return g_; }

  ScaledComplex a(std::size_t n) const { return h_.coeff(n); }
  ScaledComplex b(std::size_t n) const { return g_.coeff(n); }

  /// log(|a_n| + |b_n|).
  double log_pair_sum(std::size_t n) const { return log_add(a(n).log_abs, b(n).log_abs); }

  bool bounded() const { return h_.bounded() && g_.bounded(); }

  /// Largest finite n_max of the two parts, or kUnbounded.
  std::size_t n_max() const {
    if (!bounded()) return CoeffStream::kUnbounded;
    return std::max(h_.n_max(), g_.n_max());
  }

 private:
  CoeffStream h_;
  CoeffStream g_;
};

/// n-th derivative of a power series: coefficient k is (n+k)!/k! * s_{n+k}.
inline CoeffStream derivative_stream(const CoeffStream& s, std::size_t n) {
  if (n == 0) return s;
  if (s.bounded() && n > s.n_max()) {
    throw EmptyStreamError("derivative_stream: order " + std::to_string(n) +
                           " exceeds the last coefficient index " + std::to_string(s.n_max()));
  }
  const std::size_t top = s.bounded() ? s.n_max() - n : CoeffStream::kUnbounded;
  return CoeffStream::generated(
      [s, n](std::size_t k) {
        const ScaledComplex c = s.coeff(n + k);
        if (c.is_zero()) return c;
        return c.scaled_log(log_factorial(n + k) - log_factorial(k));
      },
      top, "D^" + std::to_string(n) + "(" + s.label() + ")");
}

/// h + conj(lambda h) with the constant term removed from the co-analytic part.
inline HarmonicMap affine_combine(const CoeffStream& h, std::complex<double> lambda) {
  if (std::abs(lambda) >= 1.0) {
    std::cerr << "warning: affine_combine: |lambda| = " << std::abs(lambda)
              << " >= 1, the map is not sense-preserving\n";
  }
  const ScaledComplex l = ScaledComplex::from_complex(lambda);
  CoeffStream g = h.scaled(l, "lambda*" + h.label()).with_coeff(0, ScaledComplex::zero(),
                                                                 "lambda*" + h.label());
  return HarmonicMap(h, std::move(g));
}

/// conj(f) = g + conj(h), with h(0) moved into the new analytic part.
inline HarmonicMap conjugate(const HarmonicMap& f) {
  const ScaledComplex a0 = f.a(0);
  CoeffStream new_h = f.g().with_coeff(0, a0.conj(), f.g().label());
  CoeffStream new_g = f.h().with_coeff(0, ScaledComplex::zero(), f.h().label());
  return HarmonicMap(std::move(new_h), std::move(new_g));
}

namespace detail {
inline CoeffStream derivative_or_zero(const CoeffStream& s, std::size_t n) {
  if (s.bounded() && n > s.n_max()) return CoeffStream();
  return derivative_stream(s, n);
}
}  // namespace detail

/// f^(n) = h^(n) + conj(g^(n)); the constant n! b_n is folded into the analytic part.
inline HarmonicMap derivative_map(const HarmonicMap& f, std::size_t n) {
  if (n == 0) return f;
  CoeffStream hn = detail::derivative_or_zero(f.h(), n);
  CoeffStream gn = detail::derivative_or_zero(f.g(), n);
  const ScaledComplex g0 = gn.coeff(0);
  if (!g0.is_zero()) {
    const ScaledComplex h0 = hn.coeff(0);
    // h0 + conj(g0), assembled in ordinary precision.
    hn = hn.with_coeff(0, ScaledComplex::from_complex(h0.to_complex() + std::conj(g0.to_complex())),
                       hn.label());
    gn = gn.with_coeff(0, ScaledComplex::zero(), gn.label());
  }
  return HarmonicMap(std::move(hn), std::move(gn));
}

/// F_n = (h^(n) - n! a_n)/((n+1)! a_{n+1}) + conj((g^(n) - n! b_n)/((n+1)! a_{n+1})).
///
/// The analytic part has coefficient 0 at index 0 and exactly 1 at index 1.
inline HarmonicMap normalized_shifted_derivative(const HarmonicMap& f, std::size_t n) {
  if (f.a(n + 1).is_zero()) {
    throw DegenerateError("normalized_shifted_derivative: a_" + std::to_string(n + 1) +
                          " = 0, the normalization is degenerate");
  }
  const CoeffStream hn = derivative_stream(f.h(), n);
  const CoeffStream gn = detail::derivative_or_zero(f.g(), n);
  const ScaledComplex lead = hn.coeff(1);
  const std::string tag = "F_" + std::to_string(n);
  CoeffStream H = CoeffStream::generated(
      [hn, lead](std::size_t k) {
        if (k == 0) return ScaledComplex::zero();
        if (k == 1) return ScaledComplex::one();
        return hn.coeff(k) / lead;
      },
      hn.n_max(), tag + ".h");
  CoeffStream G = CoeffStream::generated(
      [gn, lead](std::size_t k) {
        if (k == 0) return ScaledComplex::zero();
        return gn.coeff(k) / lead;
      },
      gn.n_max(), tag + ".g");
  return HarmonicMap(std::move(H), std::move(G));
}

}  // namespace harmap
