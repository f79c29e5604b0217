#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "harmap/coeff_stream.hpp"
#include "harmap/detail/fit.hpp"
#include "harmap/error.hpp"
#include "harmap/evaluate.hpp"
#include "harmap/scaled_complex.hpp"

namespace harmap {

struct GrowthSample {
  std::size_t n;
  double value;
};

/// Order or type estimate from a coefficient window.
struct GrowthReport {
  /// Largest sample in [window_lo, window_hi].
  double raw_tail_value = 0.0;
  /// Limit of the defining sequence after extrapolation.
  double extrapolated = 0.0;
  std::size_t window_lo = 0;
  std::size_t window_hi = 0;
  bool converged = false;
  /// Extrapolations from the lower and upper half of the fit window.
  std::array<double, 2> half_estimates{0.0, 0.0};
  std::vector<GrowthSample> samples;
  std::size_t skipped_zero = 0;
  /// Indices with |a_n| + |b_n| >= 1, excluded from the order sequence.
  std::size_t skipped_large = 0;
  std::string note;
};

struct EstimatorConfig {
  /// Half-window extrapolations must agree to this relative tolerance.
  double rel_tol = 1e-2;
  std::size_t min_samples = 8;
  /// limsup |a_n|^{1/n} below this reads as an infinite radius.
  double zero_threshold = 1e-8;
};

struct ConvergenceRadii {
  double r_h = kInf;
  double r_g = kInf;
  double r_f = kInf;
};

namespace detail {

using Basis = std::vector<std::function<double(double)>>;

inline const Basis& order_basis() {
  static const Basis basis = {
      [](double) { return 1.0; },
      [](double n) { return 1.0 / std::log(n); },
      [](double n) { return 1.0 / (n * std::log(n)); },
  };
  return basis;
}

inline const Basis& inverse_n_basis() {
  static const Basis basis = {
      [](double) { return 1.0; },
      [](double n) { return 1.0 / n; },
  };
  return basis;
}

/// Intercept of a least-squares fit of (n, y) over the given basis.
inline double fit_intercept(const std::vector<GrowthSample>& pts, const Basis& basis) {
  std::vector<double> x, y;
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& p : pts) {
    x.push_back(static_cast<double>(p.n));
    y.push_back(p.value);
  }
  return least_squares(x, y, basis)[0];
}

/// Fills the window, fit and convergence fields of `report` from its samples.
///
/// `transform` maps a sample to the fitted quantity and `untransform` maps the
/// fitted intercept back to the reported estimate.
inline void extrapolate(GrowthReport& report, std::size_t window_lo, std::size_t window_hi,
                        const Basis& basis, const std::function<double(double)>& transform,
                        const std::function<double(double)>& untransform,
                        const EstimatorConfig& cfg) {
  report.window_lo = window_lo;
  report.window_hi = window_hi;
  std::vector<GrowthSample> fit_pts;
  double raw = -kInf;
  for (const auto& s : report.samples) {
    if (s.n < window_lo || s.n > window_hi) continue;
    fit_pts.push_back({s.n, transform(s.value)});
    raw = std::max(raw, s.value);
  }
  if (fit_pts.size() < cfg.min_samples) {
    throw InsufficientDataError("only " + std::to_string(fit_pts.size()) +
                                " usable coefficients in [" + std::to_string(window_lo) + ", " +
                                std::to_string(window_hi) + "], need " +
                                std::to_string(cfg.min_samples));
  }
  report.raw_tail_value = raw;
  report.extrapolated = untransform(fit_intercept(fit_pts, basis));

  const std::size_t half = fit_pts.size() / 2;
  if (half >= basis.size() + 1) {
    std::vector<GrowthSample> lo(fit_pts.begin(), fit_pts.begin() + static_cast<std::ptrdiff_t>(half));
    std::vector<GrowthSample> hi(fit_pts.begin() + static_cast<std::ptrdiff_t>(half), fit_pts.end());
    report.half_estimates = {untransform(fit_intercept(lo, basis)),
                             untransform(fit_intercept(hi, basis))};
    const double spread = std::fabs(report.half_estimates[0] - report.half_estimates[1]);
    report.converged = std::isfinite(spread) &&
                       spread <= cfg.rel_tol * std::max(std::fabs(report.extrapolated), 1e-300);
  } else {
    report.half_estimates = {report.extrapolated, report.extrapolated};
    report.converged = false;
  }
}

inline void check_window(std::size_t n_lo, std::size_t n_hi) {
  if (n_lo < 2 || n_lo >= n_hi) {
    throw DomainError("coefficient window must satisfy 2 <= n_lo < n_hi, got [" +
                      std::to_string(n_lo) + ", " + std::to_string(n_hi) + "]");
  }
}

inline void check_theta_grid(std::size_t n_theta) {
  if (n_theta < 16 || !std::has_single_bit(n_theta)) {
    throw DomainError("n_theta must be a power of two >= 16, got " + std::to_string(n_theta));
  }
}

}  // namespace detail

/// Order from coefficients: limsup of n log n / log(1/(|a_n| + |b_n|)).
///
/// The reciprocal sequence is fitted as A + B/log n + C/(n log n) over the top
/// half of the window and 1/A is reported. The C term absorbs constant factors
/// in the coefficients, so rescaling f leaves the estimate unchanged.
inline GrowthReport order_from_coeffs(const HarmonicMap& f, std::size_t n_lo, std::size_t n_hi,
                                      const EstimatorConfig& cfg = {}) {
  detail::check_window(n_lo, n_hi);
  GrowthReport report;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const double lp = f.log_pair_sum(n);
    if (lp == -kInf) {
      ++report.skipped_zero;
      continue;
    }
    if (lp >= 0.0) {
      ++report.skipped_large;
      continue;
    }
    const double dn = static_cast<double>(n);
    report.samples.push_back({n, dn * std::log(dn) / (-lp)});
  }
  const std::size_t window_lo = std::max(n_lo, n_hi / 2);

  // A polynomial has order 0 however its finitely many coefficients look.
  bool zero_tail = f.bounded();
  if (!zero_tail) {
    zero_tail = std::none_of(report.samples.begin(), report.samples.end(),
                             [&](const GrowthSample& s) { return s.n >= window_lo; }) &&
                report.skipped_large == 0;
  }
  if (zero_tail) {
    report.window_lo = window_lo;
    report.window_hi = n_hi;
    report.converged = true;
    report.note = f.bounded() ? "finitely many nonzero coefficients; order 0"
                              : "coefficients vanish beyond the window start; order 0";
    return report;
  }
  detail::extrapolate(
      report, window_lo, n_hi, detail::order_basis(), [](double s) { return 1.0 / s; },
      [](double a) { return a > 0.0 ? 1.0 / a : kInf; }, cfg);
  if (report.skipped_large > 0) {
    report.note = std::to_string(report.skipped_large) +
                  " indices with |a_n|+|b_n| >= 1 excluded";
  }
  return report;
}

/// Type for a given order rho: limsup of n (|a_n|+|b_n|)^{rho/n} / (e rho),
/// extrapolated linearly in 1/n.
inline GrowthReport type_from_coeffs(const HarmonicMap& f, double rho, std::size_t n_lo,
                                     std::size_t n_hi, const EstimatorConfig& cfg = {}) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("type_from_coeffs: rho must be finite and positive");
  }
  detail::check_window(n_lo, n_hi);
  GrowthReport report;
  const double log_rho = std::log(rho);
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const double lp = f.log_pair_sum(n);
    if (lp == -kInf) {
      ++report.skipped_zero;
      continue;
    }
    const double dn = static_cast<double>(n);
    report.samples.push_back({n, std::exp(std::log(dn) + rho * lp / dn - 1.0 - log_rho)});
  }
  const std::size_t window_lo = std::max(n_lo, n_hi / 2);
  const bool empty_tail = std::none_of(report.samples.begin(), report.samples.end(),
                                       [&](const GrowthSample& s) { return s.n >= window_lo; });
  if (empty_tail) {
    report.window_lo = window_lo;
    report.window_hi = n_hi;
    report.converged = true;
    report.note = "coefficients vanish beyond the window start; type 0";
    return report;
  }
  detail::extrapolate(
      report, window_lo, n_hi, detail::inverse_n_basis(), [](double t) { return t; },
      [](double a) { return a; }, cfg);
  return report;
}

struct MaxModulus {
  double log_m = -kInf;
  double theta = 0.0;
  std::size_t n_theta = 0;
};

/// log M(r, f) over the grid theta_k = 2 pi k / n_theta, summing indices 0..N.
inline MaxModulus max_modulus_detail(const HarmonicMap& f, double r, std::size_t n_theta,
                                     std::size_t N) {
  if (!(r > 0.0)) throw DomainError("max_modulus: r must be positive");
  detail::check_theta_grid(n_theta);
  const SeriesEvaluator eval(f, N);
  const double log_r = std::log(r);
  MaxModulus best;
  best.n_theta = n_theta;
  for (std::size_t k = 0; k < n_theta; ++k) {
    const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(n_theta);
    const double lm = eval.at_polar(log_r, theta).value.log_abs;
    if (lm > best.log_m) {
      best.log_m = lm;
      best.theta = theta;
    }
  }
  return best;
}

inline double max_modulus(const HarmonicMap& f, double r, std::size_t n_theta, std::size_t N) {
  return max_modulus_detail(f, r, n_theta, N).log_m;
}

/// Doubles the theta grid until log M moves by less than `tol`.
inline MaxModulus max_modulus_refined(const HarmonicMap& f, double r, std::size_t n_theta,
                                      std::size_t N, std::size_t max_n_theta = 1u << 16,
                                      double tol = 1e-10) {
  MaxModulus current = max_modulus_detail(f, r, n_theta, N);
  while (current.n_theta < max_n_theta) {
    const MaxModulus next = max_modulus_detail(f, r, current.n_theta * 2, N);
    const bool settled = std::fabs(next.log_m - current.log_m) < tol;
    current = next;
    if (settled) break;
  }
  return current;
}

struct EmpiricalOrderPoint {
  double r;
  double log_m;
  double eta;  // log(log M) / log r
};

struct EmpiricalOrder {
  std::vector<EmpiricalOrderPoint> points;
  std::vector<std::string> notes;
};

/// log(log M(r,f)) / log r along a radius grid. N = 0 picks the number of terms
/// per radius automatically.
inline EmpiricalOrder empirical_order(const HarmonicMap& f, const std::vector<double>& r_values,
                                      std::size_t n_theta, std::size_t N = 0) {
  EmpiricalOrder out;
  for (double r : r_values) {
    if (!(r > 1.0)) throw DomainError("empirical_order: every radius must exceed 1");
    const TermsEstimate te = suggest_terms(f, r);
    const std::size_t terms = N > 0 ? N : te.n;
    if (N == 0 && !te.converged) {
      out.notes.push_back("r = " + std::to_string(r) + ": series truncated at " + std::to_string(te.n) +
                          " terms before its terms became negligible");
    }
    const double lm = max_modulus(f, r, n_theta, terms);
    if (!(lm > 0.0)) {
      out.notes.push_back("r = " + std::to_string(r) + " omitted: log M <= 0");
      continue;
    }
    out.points.push_back({r, lm, std::log(lm) / std::log(r)});
  }
  return out;
}

struct CauchyBoundRow {
  std::size_t n;
  double lhs;  // log(|a_n| + |b_n|)
  double rhs;  // log(2 r^{-n} M(r,f))
  bool ok;
};

/// |a_n| + |b_n| <= 2 r^{-n} M(r, f) for n = 0..N, with a 1e-9 slack on the logs.
inline std::vector<CauchyBoundRow> cauchy_pair_bound_check(const HarmonicMap& f, double r,
                                                           std::size_t N, std::size_t n_theta) {
  const std::size_t terms = std::max(N, suggest_terms(f, r).n);
  const double log_m = max_modulus(f, r, n_theta, terms);
  std::vector<CauchyBoundRow> rows;
  rows.reserve(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    const double lhs = f.log_pair_sum(n);
    const double rhs = std::log(2.0) - static_cast<double>(n) * std::log(r) + log_m;
    rows.push_back({n, lhs, rhs, lhs <= rhs + 1e-9});
  }
  return rows;
}

struct RecoveredCoefficients {
  std::vector<std::complex<double>> a;
  std::vector<std::complex<double>> b;
};

/// Coefficients from boundary samples by the m-point trapezoid rule:
/// a_n = mean(r^{-n} e^{-int} f), b_n = mean(r^{-n} e^{-int} conj f), b_0 := 0.
inline RecoveredCoefficients recover_coefficients(
    const std::function<std::complex<double>(double)>& sampler, double r, std::size_t n_max,
    std::size_t m) {
  if (!(r > 0.0)) throw DomainError("recover_coefficients: r must be positive");
  if (m < 4 || !std::has_single_bit(m) || m < 4 * n_max) {
    throw DomainError("recover_coefficients: m must be a power of two with m >= 4 n_max");
  }
  std::vector<std::complex<double>> twiddle(m);
  std::vector<std::complex<double>> samples(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = kTwoPi * static_cast<double>(k) / static_cast<double>(m);
    twiddle[k] = std::polar(1.0, -t);
    samples[k] = sampler(t);
  }
  RecoveredCoefficients out;
  out.a.resize(n_max + 1);
  out.b.resize(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    CompensatedComplexSum sa, sb;
    for (std::size_t k = 0; k < m; ++k) {
      const std::complex<double> w = twiddle[(k * n) % m];
      sa.add(w * samples[k]);
      sb.add(w * std::conj(samples[k]));
    }
    const double scale = std::pow(r, -static_cast<double>(n)) / static_cast<double>(m);
    out.a[n] = sa.value() * scale;
    out.b[n] = n == 0 ? std::complex<double>{} : sb.value() * scale;
  }
  return out;
}

/// Boundary sampler theta -> f(r e^{i theta}) summing indices 0..N.
inline std::function<std::complex<double>(double)> map_sampler(const HarmonicMap& f, double r,
                                                               std::size_t N) {
  auto eval = std::make_shared<const SeriesEvaluator>(f, N);
  return [eval, r](double theta) { return eval->value(std::polar(r, theta)).value; };
}

/// sum_{n>=1} (n / (rho e))^{-n/rho} z^n: order rho, type 1.
inline CoeffStream f_rho_stream(double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("f_rho_stream: rho must be finite and positive");
  }
  const double log_rho = std::log(rho);
  return CoeffStream::generated(
      [rho, log_rho](std::size_t n) {
        if (n == 0) return ScaledComplex::zero();
        const double dn = static_cast<double>(n);
        return ScaledComplex::from_log(-(dn / rho) * (std::log(dn) - log_rho - 1.0));
      },
      CoeffStream::kUnbounded, "F_rho(" + std::to_string(rho) + ")");
}

namespace detail {

/// Estimate of limsup |c_n|^{1/n}.
///
/// Fits u_n = |c_n|^{1/n} as A + B/n on three nested windows ending at n_hi/4,
/// n_hi/2 and n_hi and applies Aitken's delta-squared to the three intercepts.
/// Sequences tending to zero like a power of n then extrapolate to ~0.
inline double root_test_limit(const CoeffStream& s, std::size_t n_lo, std::size_t n_hi,
                              const EstimatorConfig& cfg) {
  std::vector<GrowthSample> pts;
  for (std::size_t n = std::max<std::size_t>(n_lo, 1); n <= n_hi; ++n) {
    const ScaledComplex c = s.coeff(n);
    if (c.is_zero()) continue;
    pts.push_back({n, std::exp(c.log_abs / static_cast<double>(n))});
  }
  if (pts.empty()) return 0.0;
  if (pts.size() < cfg.min_samples) {
    throw InsufficientDataError("convergence_radii: only " + std::to_string(pts.size()) +
                                " nonzero coefficients in the window");
  }
  auto window_fit = [&](std::size_t lo, std::size_t hi) -> std::optional<double> {
    std::vector<GrowthSample> w;
    for (const auto& p : pts) {
      if (p.n >= lo && p.n <= hi) w.push_back(p);
    }
    if (w.size() < 4) return std::nullopt;
    return fit_intercept(w, inverse_n_basis());
  };
  const std::size_t top_lo = std::max(n_lo, n_hi / 2);
  const std::optional<double> a2 = window_fit(top_lo, n_hi);
  const std::optional<double> a1 = window_fit(std::max(n_lo, n_hi / 4), n_hi / 2);
  const std::optional<double> a0 = window_fit(std::max(n_lo, n_hi / 8), n_hi / 4);
  if (!a2) return fit_intercept(pts, inverse_n_basis());
  if (!a1 || !a0 || n_hi / 8 < n_lo) return *a2;
  const double d1 = *a1 - *a0;
  const double d2 = *a2 - *a1;
  const double den = d2 - d1;
  const double size = std::max({std::fabs(*a0), std::fabs(*a1), std::fabs(*a2)});
  if (std::fabs(den) <= 1e-12 * size) return *a2;
  return *a2 - d2 * d2 / den;
}

inline double radius_of(const CoeffStream& s, std::size_t n_lo, std::size_t n_hi,
                        const EstimatorConfig& cfg) {
  if (s.bounded()) return kInf;
  const double limit = root_test_limit(s, n_lo, n_hi, cfg);
  if (limit < cfg.zero_threshold) return kInf;
  return 1.0 / limit;
}

}  // namespace detail

/// Radii of convergence of h, g and f = h + conj(g).
inline ConvergenceRadii convergence_radii(const HarmonicMap& f, std::size_t n_lo,
                                          std::size_t n_hi, const EstimatorConfig& cfg = {}) {
  if (n_lo < 1 || n_lo >= n_hi) {
    throw DomainError("convergence_radii: window must satisfy 1 <= n_lo < n_hi");
  }
  ConvergenceRadii out;
  out.r_h = detail::radius_of(f.h(), n_lo, n_hi, cfg);
  out.r_g = detail::radius_of(f.g(), n_lo, n_hi, cfg);
  out.r_f = std::min(out.r_h, out.r_g);
  return out;
}

/// The order of h + conj(g) is the larger of the orders of h and g.
inline bool order_of_sum_check(double h_order, double g_order, double f_order, double tol) {
  return std::fabs(f_order - std::max(h_order, g_order)) <= tol;
}

}  // namespace harmap
