#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "harmap/coeff_stream.hpp"
#include "harmap/error.hpp"
#include "harmap/scaled_complex.hpp"

namespace harmap {

/// Largest log-magnitude that converts to a finite double.
inline const double kLogDoubleMax = std::log(std::numeric_limits<double>::max());

struct EvalResult {
  std::complex<double> value;
  std::size_t terms_used = 0;
  /// Geometric-ratio estimate of the omitted tail; +inf when the last retained
  /// terms are not decreasing.
  double truncation_bound = 0.0;
};

/// Series value kept in log-domain, for magnitudes outside double range.
struct ScaledEval {
  ScaledComplex value;
  std::size_t terms_used = 0;
  double log_truncation_bound = -kInf;
  double max_term_log = -kInf;
};

/// How many terms a series needs at radius r before its terms become negligible.
struct TermsEstimate {
  std::size_t n = 0;  // highest index to include
  bool converged = true;
};

inline TermsEstimate suggest_terms(const HarmonicMap& f, double r,
                                   std::size_t max_terms = std::size_t{1} << 20) {
  if (f.bounded()) return {f.n_max(), true};
  if (!(r > 0.0)) return {1, true};
  constexpr double kDrop = 60.0;
  constexpr std::size_t kQuietRun = 32;
  const double log_r = std::log(r);
  double best = -kInf;
  std::size_t best_n = 0;
  std::size_t quiet = 0;
  for (std::size_t n = 0; n <= max_terms; ++n) {
    const double t = std::max(f.a(n).log_abs, f.b(n).log_abs) + static_cast<double>(n) * log_r;
    if (t > best) {
      best = t;
      best_n = n;
      quiet = 0;
    } else if (t < best - kDrop) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= kQuietRun && n > best_n + 8) return {n, true};
  }
  return {max_terms, false};
}

/// Materialized coefficient prefixes of f, f_z and f_zbar for repeated evaluation.
class SeriesEvaluator {
 public:
  /// Sums indices 0..N (clamped to the stream length for polynomials).
  SeriesEvaluator(const HarmonicMap& f, std::size_t N, double tol = 1e-16) : tol_(tol) {
    h_complete_ = f.h().bounded() && N >= f.h().n_max();
    g_complete_ = f.g().bounded() && N >= f.g().n_max();
    h_ = f.h().prefix(std::min(N, f.h().length_or(N + 1) - 1) + 1);
    g_ = f.g().prefix(std::min(N, f.g().length_or(N + 1) - 1) + 1);
    dh_ = differentiate(h_);
    dg_ = differentiate(g_);
  }

  ScaledEval at_polar(double log_r, double theta) const {
    return sum(h_, g_, h_complete_, g_complete_, log_r, theta);
  }

  ScaledEval at(std::complex<double> z) const {
    if (z == 0.0) return at_polar(-kInf, 0.0);
    return at_polar(std::log(std::abs(z)), std::arg(z));
  }

  /// Value in ordinary precision; throws OverflowError outside double range.
  EvalResult value(std::complex<double> z) const {
    const ScaledEval s = at(z);
    if (s.max_term_log > kLogDoubleMax || s.value.log_abs > kLogDoubleMax) {
      throw OverflowError("value exceeds representable range; use log-domain norms");
    }
    return {s.value.to_complex(), s.terms_used, std::exp(s.log_truncation_bound)};
  }

  /// |h'(z)|^2 - |g'(z)|^2.
  double jacobian(std::complex<double> z) const {
    const ScaledEval dh = sum(dh_, {}, true, true, z == 0.0 ? -kInf : std::log(std::abs(z)),
                              z == 0.0 ? 0.0 : std::arg(z));
    const ScaledEval dg = sum(dg_, {}, true, true, z == 0.0 ? -kInf : std::log(std::abs(z)),
                              z == 0.0 ? 0.0 : std::arg(z));
    const double lh = 2.0 * dh.value.log_abs;
    const double lg = 2.0 * dg.value.log_abs;
    if (lh >= lg) return std::exp(log_sub(lh, lg));
    return -std::exp(log_sub(lg, lh));
  }

  /// (h'(z), g'(z)) in ordinary precision.
  std::pair<std::complex<double>, std::complex<double>> gradients(std::complex<double> z) const {
    const double lr = z == 0.0 ? -kInf : std::log(std::abs(z));
    const double th = z == 0.0 ? 0.0 : std::arg(z);
    return {sum(dh_, {}, true, true, lr, th).value.to_complex(),
            sum(dg_, {}, true, true, lr, th).value.to_complex()};
  }

  /// d/dtheta f(r e^{i theta}) = i z h'(z) + conj(i z g'(z)).
  std::complex<double> dtheta(std::complex<double> z) const {
    const auto [dh, dg] = gradients(z);
    const std::complex<double> i(0.0, 1.0);
    return i * z * dh + std::conj(i * z * dg);
  }

  std::size_t terms() const { return std::max(h_.size(), g_.size()); }

 private:
  static std::vector<ScaledComplex> differentiate(const std::vector<ScaledComplex>& c) {
    std::vector<ScaledComplex> d;
    for (std::size_t k = 1; k < c.size(); ++k) {
      d.push_back(c[k].scaled_log(std::log(static_cast<double>(k))));
    }
    if (d.empty()) d.push_back(ScaledComplex::zero());
    return d;
  }

  struct PartTail {
    double last = -kInf;
    double prev = -kInf;
    std::size_t last_n = 0;
    std::size_t prev_n = 0;
    void push(std::size_t n, double t) {
      prev = last;
      prev_n = last_n;
      last = t;
      last_n = n;
    }
    double log_bound(bool complete) const {
      if (complete || last == -kInf) return -kInf;
      if (prev == -kInf) return kInf;
      const double q = (last - prev) / static_cast<double>(last_n - prev_n);
      if (q >= 0.0) return kInf;
      return last + q - std::log(-std::expm1(q));
    }
  };

  ScaledEval sum(const std::vector<ScaledComplex>& h, const std::vector<ScaledComplex>& g,
                 bool h_complete, bool g_complete, double log_r, double theta) const {
    ScaledEval out;
    if (log_r == -kInf) {
      out.value = h.empty() ? ScaledComplex::zero() : h[0];
      out.terms_used = 1;
      out.max_term_log = out.value.log_abs;
      return out;
    }
    auto term_log = [log_r](const ScaledComplex& c, std::size_t n) {
      return c.is_zero() ? -kInf : c.log_abs + static_cast<double>(n) * log_r;
    };
    double top = -kInf;
    for (std::size_t n = 0; n < h.size(); ++n) top = std::max(top, term_log(h[n], n));
    for (std::size_t n = 0; n < g.size(); ++n) top = std::max(top, term_log(g[n], n));
    out.max_term_log = top;
    if (top == -kInf) return out;

    const double cut = top + std::log(tol_) - 40.0;
    CompensatedComplexSum acc;
    PartTail h_tail, g_tail;
    for (std::size_t n = 0; n < h.size(); ++n) {
      const double t = term_log(h[n], n);
      if (t == -kInf) continue;
      h_tail.push(n, t);
      if (t < cut) continue;
      acc.add(std::polar(std::exp(t - top), h[n].phase + static_cast<double>(n) * theta));
      ++out.terms_used;
    }
    for (std::size_t n = 0; n < g.size(); ++n) {
      const double t = term_log(g[n], n);
      if (t == -kInf) continue;
      g_tail.push(n, t);
      if (t < cut) continue;
      acc.add(std::polar(std::exp(t - top), -(g[n].phase + static_cast<double>(n) * theta)));
      ++out.terms_used;
    }
    const std::complex<double> s = acc.value();
    out.value = s == 0.0 ? ScaledComplex::zero()
                         : ScaledComplex(top + std::log(std::abs(s)), std::arg(s));
    out.log_truncation_bound =
        log_add(h_tail.log_bound(h_complete), g_tail.log_bound(g_complete));
    return out;
  }

  double tol_;
  bool h_complete_ = false;
  bool g_complete_ = false;
  std::vector<ScaledComplex> h_;
  std::vector<ScaledComplex> g_;
  std::vector<ScaledComplex> dh_;
  std::vector<ScaledComplex> dg_;
};

/// Sum_{n<=N} a_n z^n + conj(Sum_{n<=N} b_n z^n) by compensated summation.
inline EvalResult evaluate(const HarmonicMap& f, std::complex<double> z, std::size_t N,
                           double tol = 1e-16) {
  if (!(tol > 0.0)) throw DomainError("evaluate: tol must be positive");
  return SeriesEvaluator(f, N, tol).value(z);
}

/// As evaluate, but returns the value in log-domain.
inline ScaledEval evaluate_log(const HarmonicMap& f, std::complex<double> z, std::size_t N,
                               double tol = 1e-16) {
  return SeriesEvaluator(f, N, tol).at(z);
}

/// J_f(z) = |h'(z)|^2 - |g'(z)|^2.
inline double jacobian(const HarmonicMap& f, std::complex<double> z, std::size_t N) {
  return SeriesEvaluator(f, N).jacobian(z);
}

}  // namespace harmap
