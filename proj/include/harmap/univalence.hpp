#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "harmap/coeff_stream.hpp"
#include "harmap/error.hpp"
#include "harmap/evaluate.hpp"
#include "harmap/growth.hpp"
#include "harmap/scaled_complex.hpp"

namespace harmap {

struct AnalysisConfig {
  /// Coefficient suprema over the univalent class; configuration, not constants.
  double alpha = 3.0;
  double beta = 3.0;
  /// Optional suprema over the class with all derivatives univalent.
  std::optional<double> alpha0;
  std::optional<double> beta0;

  double collision_tol = 1e-8;
  double bisect_tol = 1e-12;

  /// Search cap for the coefficient-lemma radius.
  double radius_cap = 1e3;
  std::size_t max_terms = std::size_t{1} << 16;
  /// Prefix length for coefficient-pattern checks (Ozaki, affine structure).
  std::size_t coeff_window = 60;

  bool scan_upper = true;
  double upper_r_max = 4.0;
  std::size_t upper_radii = 48;
  std::size_t upper_n_theta = 256;
  /// Smallest scanned radius as a fraction of upper_r_max.
  double upper_r_min_fraction = 1e-3;

  void validate() const {
    if (!(alpha > 0.0) || !(beta > 0.0)) throw DomainError("alpha and beta must be positive");
    if (!(collision_tol > 0.0) || !(bisect_tol > 0.0)) {
      throw DomainError("tolerances must be positive");
    }
    if (upper_radii < 2) throw DomainError("upper_radii must be at least 2");
  }
};

enum class Orientation { preserving, reversing, degenerate };

inline const char* to_string(Orientation o) {
  switch (o) {
    case Orientation::preserving: return "preserving";
    case Orientation::reversing: return "reversing";
    case Orientation::degenerate: return "degenerate";
  }
  return "?";
}

/// Sign of J_f(0) = |a_1|^2 - |b_1|^2.
inline Orientation sense_preserving_at_origin(const HarmonicMap& f) {
  const double la = f.a(1).log_abs;
  const double lb = f.b(1).log_abs;
  if (la > lb) return Orientation::preserving;
  if (la < lb) return Orientation::reversing;
  return Orientation::degenerate;
}

struct CoefficientTestResult {
  bool pass = false;
  /// (1 - |b_1|) - sum_{n=2}^{N} n (|a_n| + |b_n|), after dividing by |a_1|.
  double margin = 0.0;
  /// Geometric estimate of the omitted terms beyond N; 0 for complete polynomials.
  double tail_bound = 0.0;
  /// The prefix passes but the tail could not be certified small enough.
  bool inconclusive = false;
};

/// Coefficient criterion for univalence of a normalized harmonic map in the unit
/// disk: sum_{n>=2} n (|a_n| + |b_n|) <= 1 - |b_1| with a_1 = 1.
inline CoefficientTestResult coefficient_univalence_test(const HarmonicMap& f, std::size_t N) {
  const ScaledComplex a1 = f.a(1);
  if (a1.is_zero()) throw DegenerateError("coefficient_univalence_test: a_1 = 0");
  const double la1 = a1.log_abs;
  CompensatedSum sum;
  double last = -kInf, prev = -kInf;
  std::size_t last_n = 0, prev_n = 0;
  for (std::size_t n = 2; n <= N; ++n) {
    const double lp = f.log_pair_sum(n);
    if (lp == -kInf) continue;
    const double t = std::log(static_cast<double>(n)) + lp - la1;
    sum.add(std::exp(t));
    prev = last;
    prev_n = last_n;
    last = t;
    last_n = n;
  }
  CoefficientTestResult out;
  out.margin = (1.0 - std::exp(f.b(1).log_abs - la1)) - sum.value();
  if (f.bounded() && N >= f.n_max()) {
    out.tail_bound = 0.0;
  } else if (last == -kInf) {
    out.tail_bound = kInf;
  } else if (prev == -kInf) {
    out.tail_bound = kInf;
  } else {
    const double q = (last - prev) / static_cast<double>(last_n - prev_n);
    out.tail_bound = q < 0.0 ? std::exp(last + q - std::log(-std::expm1(q))) : kInf;
  }
  out.pass = out.margin >= 0.0 && out.margin - out.tail_bound >= 0.0;
  out.inconclusive = out.margin >= 0.0 && !out.pass;
  return out;
}

namespace detail {

/// log sum_{n>=2} n (|a_n| + |b_n|) r^{n-1}, summed until the terms are
/// negligible; +inf when the series does not settle within max_terms.
class LemmaSeries {
 public:
  LemmaSeries(const HarmonicMap& f, std::size_t max_terms) : f_(f), max_terms_(max_terms) {}

  double log_sum(double r) {
    const double log_r = std::log(r);
    const std::size_t last =
        f_.bounded() ? std::min(f_.n_max(), max_terms_) : max_terms_;
    double top = -kInf;
    double scaled = 0.0;
    std::size_t top_n = 0;
    std::size_t quiet = 0;
    for (std::size_t n = 2; n <= last; ++n) {
      const double t = weight(n) + static_cast<double>(n - 1) * log_r;
      if (t != -kInf) {
        if (t > top) {
          scaled = scaled * std::exp(top - t) + 1.0;
          top = t;
          top_n = n;
          quiet = 0;
        } else {
          scaled += std::exp(t - top);
          quiet = t < top - 50.0 ? quiet + 1 : 0;
        }
      } else if (top != -kInf) {
        ++quiet;
      }
      if (!f_.bounded() && quiet >= 32 && n > top_n + 8) return top + std::log(scaled);
    }
    if (!f_.bounded()) return kInf;
    return top == -kInf ? -kInf : top + std::log(scaled);
  }

 private:
  double weight(std::size_t n) {
    while (weights_.size() <= n) {
      const std::size_t k = weights_.size();
      weights_.push_back(k < 2 ? -kInf
                               : std::log(static_cast<double>(k)) + f_.log_pair_sum(k));
    }
    return weights_[n];
  }

  HarmonicMap f_;
  std::size_t max_terms_;
  std::vector<double> weights_;
};

}  // namespace detail

struct LowerRadius {
  double radius = 0.0;
  /// The criterion held up to the search cap.
  bool unbounded = false;
};

/// Largest r with sum_{n>=2} n (|a_n| + |b_n|) r^{n-1} <= |a_1| - |b_1|: the
/// rescaled map f(rz)/r passes the coefficient criterion, so f is univalent in
/// |z| < r. The left side increases in r, so bisection applies.
inline LowerRadius univalence_radius_lower(const HarmonicMap& f, const AnalysisConfig& cfg = {}) {
  const ScaledComplex a1 = f.a(1);
  if (a1.is_zero()) throw DegenerateError("univalence_radius_lower: a_1 = 0");
  const double budget = log_sub(a1.log_abs, f.b(1).log_abs);
  if (budget == -kInf) return {0.0, false};

  detail::LemmaSeries series(f, cfg.max_terms);
  auto holds = [&](double r) { return series.log_sum(r) <= budget; };

  double lo = 0.0;
  double hi = 1.0;
  if (holds(hi)) {
    while (true) {
      lo = hi;
      if (lo >= cfg.radius_cap) return {cfg.radius_cap, true};
      hi = std::min(2.0 * hi, cfg.radius_cap);
      if (!holds(hi)) break;
    }
  }
  while (hi - lo > cfg.bisect_tol * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (holds(mid) ? lo : hi) = mid;
  }
  return {lo, false};
}

enum class LowerMethod { coefficient_lemma, ozaki_affine };
enum class UpperMethod { jacobian_zero, collision, none_found };

inline const char* to_string(LowerMethod m) {
  return m == LowerMethod::ozaki_affine ? "ozaki-affine" : "coefficient-lemma";
}

inline const char* to_string(UpperMethod m) {
  switch (m) {
    case UpperMethod::jacobian_zero: return "jacobian-zero";
    case UpperMethod::collision: return "collision";
    case UpperMethod::none_found: return "none-found";
  }
  return "?";
}

/// A point where the Jacobian has lost the sign it has at the origin.
struct JacobianWitness {
  std::complex<double> z;
  double jacobian;
};

/// Two distinct points with (numerically) equal images.
struct CollisionWitness {
  std::complex<double> z1;
  std::complex<double> z2;
  double distance;
};

using Witness = std::variant<std::monostate, JacobianWitness, CollisionWitness>;

struct UpperRadius {
  double radius = kInf;
  UpperMethod method = UpperMethod::none_found;
  Witness witness;
  double r_max = 0.0;
  std::size_t radii = 0;
  std::size_t n_theta = 0;
};

namespace detail {

inline double circular_gap(double t1, double t2) {
  const double d = std::fabs(std::remainder(t1 - t2, kTwoPi));
  return d;
}

/// Parameters (s, t) in [0,1]^2 where segments p0-p1 and q0-q1 cross properly.
inline std::optional<std::pair<double, double>> segment_crossing(std::complex<double> p0,
                                                                 std::complex<double> p1,
                                                                 std::complex<double> q0,
                                                                 std::complex<double> q1) {
  auto cross = [](std::complex<double> u, std::complex<double> v) {
    return u.real() * v.imag() - u.imag() * v.real();
  };
  const std::complex<double> d1 = p1 - p0;
  const std::complex<double> d2 = q1 - q0;
  const double den = cross(d1, d2);
  if (den == 0.0) return std::nullopt;
  const double s = cross(q0 - p0, d2) / den;
  const double t = cross(q0 - p0, d1) / den;
  if (s <= 0.0 || s >= 1.0 || t <= 0.0 || t >= 1.0) return std::nullopt;
  return std::make_pair(s, t);
}

/// Violation search on the circle |z| = r for a map sense-preserving at 0.
class CircleProbe {
 public:
  CircleProbe(const SeriesEvaluator& eval, double orientation, const AnalysisConfig& cfg)
      : eval_(eval), orientation_(orientation), cfg_(cfg) {}

  std::optional<Witness> probe(double r) const {
    const std::size_t m = cfg_.upper_n_theta;
    const double dt = kTwoPi / static_cast<double>(m);
    std::vector<std::complex<double>> z(m), w(m);
    double worst = kInf;
    std::size_t worst_k = 0;
    for (std::size_t k = 0; k < m; ++k) {
      z[k] = std::polar(r, dt * static_cast<double>(k));
      const double j = orientation_ * eval_.jacobian(z[k]);
      if (j < worst) {
        worst = j;
        worst_k = k;
      }
      w[k] = eval_.value(z[k]).value;
    }
    if (worst <= 0.0) return JacobianWitness{z[worst_k], orientation_ * worst};

    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;
        const double d = std::abs(w[i] - w[j]);
        if (d < cfg_.collision_tol) return CollisionWitness{z[i], z[j], d};
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 2; j < m; ++j) {
        if (i == 0 && j == m - 1) continue;
        const auto hit = segment_crossing(w[i], w[(i + 1) % m], w[j], w[(j + 1) % m]);
        if (!hit) continue;
        const double t1 = dt * (static_cast<double>(i) + hit->first);
        const double t2 = dt * (static_cast<double>(j) + hit->second);
        if (auto c = refine(r, t1, t2, dt)) return *c;
      }
    }
    return std::nullopt;
  }

 private:
  /// Damped Newton on f(r e^{i t1}) - f(r e^{i t2}) = 0 over (t1, t2).
  std::optional<CollisionWitness> refine(double r, double t1, double t2, double dt) const {
    auto residual = [&](double a, double b) {
      return eval_.value(std::polar(r, a)).value - eval_.value(std::polar(r, b)).value;
    };
    std::complex<double> res = residual(t1, t2);
    for (int iter = 0; iter < 40 && std::abs(res) >= 1e-3 * cfg_.collision_tol; ++iter) {
      const std::complex<double> c1 = eval_.dtheta(std::polar(r, t1));
      const std::complex<double> c2 = -eval_.dtheta(std::polar(r, t2));
      const double det = c1.real() * c2.imag() - c2.real() * c1.imag();
      if (det == 0.0) break;
      const double s1 = (-res.real() * c2.imag() + c2.real() * res.imag()) / det;
      const double s2 = (-c1.real() * res.imag() + res.real() * c1.imag()) / det;
      double step = 1.0;
      bool improved = false;
      for (int h = 0; h < 12; ++h, step *= 0.5) {
        const std::complex<double> trial = residual(t1 + step * s1, t2 + step * s2);
        if (std::abs(trial) < std::abs(res)) {
          t1 += step * s1;
          t2 += step * s2;
          res = trial;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
    if (std::abs(res) >= cfg_.collision_tol) return std::nullopt;
    if (circular_gap(t1, t2) < 0.5 * dt) return std::nullopt;
    return CollisionWitness{std::polar(r, t1), std::polar(r, t2), std::abs(res)};
  }

  const SeriesEvaluator& eval_;
  double orientation_;
  const AnalysisConfig& cfg_;
};

}  // namespace detail

/// Smallest radius, on a geometric grid refined by bisection, at which f stops
/// being univalent: the Jacobian changes sign, or two boundary points collide.
///
/// The result bounds the radius of univalence from above up to the grid
/// resolution; (inf, none-found) when no violation occurs up to r_max.
inline UpperRadius univalence_radius_upper(const HarmonicMap& f, double r_max, std::size_t grid,
                                           const AnalysisConfig& cfg = {}) {
  if (!(r_max > 0.0)) throw DomainError("univalence_radius_upper: r_max must be positive");
  cfg.validate();
  if (grid < 2) throw DomainError("univalence_radius_upper: grid must hold at least 2 radii");
  UpperRadius out;
  out.r_max = r_max;
  out.radii = grid;
  out.n_theta = cfg.upper_n_theta;

  const std::size_t terms = suggest_terms(f, r_max, cfg.max_terms).n + 2;
  const SeriesEvaluator eval(f, terms);
  const double j0 = eval.jacobian(0.0);
  if (j0 == 0.0) {
    out.radius = 0.0;
    out.method = UpperMethod::jacobian_zero;
    out.witness = JacobianWitness{0.0, 0.0};
    return out;
  }
  const detail::CircleProbe probe(eval, j0 > 0.0 ? 1.0 : -1.0, cfg);

  const double r_min = r_max * cfg.upper_r_min_fraction;
  double previous = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double frac = static_cast<double>(j) / static_cast<double>(grid - 1);
    const double r = r_min * std::pow(r_max / r_min, frac);
    std::optional<Witness> hit = probe.probe(r);
    if (!hit) {
      previous = r;
      continue;
    }
    double lo = previous;
    double hi = r;
    Witness witness = *hit;
    for (int it = 0; it < 60 && hi - lo > cfg.bisect_tol * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (auto w = probe.probe(mid)) {
        hi = mid;
        witness = *w;
      } else {
        lo = mid;
      }
    }
    out.radius = hi;
    out.witness = witness;
    out.method = std::holds_alternative<JacobianWitness>(witness) ? UpperMethod::jacobian_zero
                                                                  : UpperMethod::collision;
    return out;
  }
  return out;
}

struct OzakiResult {
  bool pass = false;
  /// 1 * s_1 - N * s_N, the telescoped sum of |k s_k - (k+1) s_{k+1}|.
  double telescoped_sum = 0.0;
  /// First k where k s_k exceeds (k-1) s_{k-1}; 0 when monotone.
  std::size_t first_increase = 0;
};

/// Ozaki's close-to-convexity condition 1 >= 2 s_2 >= 3 s_3 >= ... >= 0 on a
/// normalized stream with real nonnegative coefficients.
inline OzakiResult ozaki_close_to_convex_check(const CoeffStream& s, std::size_t N) {
  constexpr double kTol = 1e-12;
  if (!s.coeff(0).is_zero()) {
    throw NotApplicableError("ozaki check: coefficient 0 must vanish");
  }
  const ScaledComplex s1 = s.coeff(1);
  if (s1.is_zero() || std::fabs(s1.log_abs) > kTol || std::fabs(s1.phase) > kTol) {
    throw NotApplicableError("ozaki check: coefficient 1 must equal 1");
  }
  OzakiResult out;
  out.pass = true;
  double prev = 0.0;  // log(1 * s_1)
  double last = 0.0;
  for (std::size_t k = 2; k <= N; ++k) {
    const ScaledComplex c = s.coeff(k);
    if (!c.is_zero() && std::fabs(c.phase) > kTol) {
      throw NotApplicableError("ozaki check: coefficient " + std::to_string(k) +
                               " is not real and nonnegative");
    }
    const double cur = c.is_zero() ? -kInf : std::log(static_cast<double>(k)) + c.log_abs;
    if (out.pass && cur > prev + kTol) {
      out.pass = false;
      out.first_increase = k;
    }
    prev = cur;
    last = cur;
  }
  out.telescoped_sum = 1.0 - (N >= 2 ? std::exp(last) : 0.0);
  return out;
}

struct UnivalenceCertificate {
  std::size_t n = 0;
  double r_lower = 0.0;
  double r_upper = kInf;
  LowerMethod lower_method = LowerMethod::coefficient_lemma;
  UpperMethod upper_method = UpperMethod::none_found;
  /// Refers to f^(n), or to its conjugate when `conjugated` is set.
  Witness witness;
  bool degenerate = false;
  bool conjugated = false;
  bool lower_unbounded = false;
  bool upper_scanned = false;
  double upper_r_max = 0.0;
  std::size_t upper_radii = 0;
  std::size_t upper_n_theta = 0;
  std::vector<std::string> notes;
};

namespace detail {

/// f^(n), conjugated if needed so that it preserves orientation at 0, with the
/// constant term dropped.
struct OrientedDerivative {
  HarmonicMap map;
  Orientation orientation;
};

inline OrientedDerivative oriented_derivative(const HarmonicMap& f, std::size_t n) {
  HarmonicMap d = derivative_map(f, n);
  const Orientation o = sense_preserving_at_origin(d);
  if (o == Orientation::reversing) d = conjugate(d);
  HarmonicMap centered(d.h().with_coeff(0, ScaledComplex::zero(), d.h().label()), d.g());
  return {std::move(centered), o};
}

/// g = lambda h on the prefix 1..N, and the normalized h passes the Ozaki test.
inline bool ozaki_affine_applies(const HarmonicMap& oriented, std::size_t N) {
  const HarmonicMap normalized = normalized_shifted_derivative(oriented, 0);
  const ScaledComplex lambda = normalized.b(1);
  for (std::size_t k = 2; k <= N; ++k) {
    const ScaledComplex expect = lambda * normalized.a(k);
    const ScaledComplex got = normalized.b(k);
    if (expect.is_zero() != got.is_zero()) return false;
    if (got.is_zero()) continue;
    if (std::fabs(expect.log_abs - got.log_abs) > 1e-9) return false;
    if (std::fabs(wrap_phase(expect.phase - got.phase)) > 1e-9) return false;
  }
  try {
    return ozaki_close_to_convex_check(normalized.h(), N).pass;
  } catch (const NotApplicableError&) {
    return false;
  }
}

}  // namespace detail

/// Interval [r_lower, r_upper] containing the radius of univalence of f^(n).
inline UnivalenceCertificate radius_certificate(const HarmonicMap& f, std::size_t n,
                                                const AnalysisConfig& cfg = {}) {
  cfg.validate();
  UnivalenceCertificate cert;
  cert.n = n;
  const detail::OrientedDerivative od = detail::oriented_derivative(f, n);
  cert.conjugated = od.orientation == Orientation::reversing;
  if (od.orientation == Orientation::degenerate) {
    // also covers a_{n+1} = b_{n+1} = 0
    cert.degenerate = true;
    cert.r_lower = 0.0;
    cert.r_upper = 0.0;
    cert.notes.push_back("|a_" + std::to_string(n + 1) + "| = |b_" + std::to_string(n + 1) +
                         "|: Jacobian vanishes at the origin");
    return cert;
  }
  if (cert.conjugated) cert.notes.push_back("sense-reversing at 0; analyzed the conjugate");

  const LowerRadius lemma = univalence_radius_lower(od.map, cfg);
  cert.r_lower = lemma.radius;
  cert.lower_unbounded = lemma.unbounded;
  cert.lower_method = LowerMethod::coefficient_lemma;
  if (lemma.radius <= 1.0 && detail::ozaki_affine_applies(od.map, cfg.coeff_window)) {
    cert.r_lower = 1.0;
    cert.lower_method = LowerMethod::ozaki_affine;
    cert.lower_unbounded = false;
  }

  if (cfg.scan_upper) {
    const UpperRadius up = univalence_radius_upper(od.map, cfg.upper_r_max, cfg.upper_radii, cfg);
    cert.upper_scanned = true;
    cert.r_upper = up.radius;
    cert.upper_method = up.method;
    cert.witness = up.witness;
    cert.upper_r_max = up.r_max;
    cert.upper_radii = up.radii;
    cert.upper_n_theta = up.n_theta;
  }
  if (cert.r_lower > cert.r_upper) {
    cert.notes.push_back("lower bound " + std::to_string(cert.r_lower) +
                         " exceeds the grid upper bound; clamped");
    cert.r_lower = cert.r_upper;
  }
  return cert;
}

/// Smallest gamma with (n+2) max(|a_{n+2}|, |b_{n+2}|) <= 2 gamma |a_{n+1}| for
/// 0 <= n <= N-2.
inline double gamma_empirical(const HarmonicMap& f, std::size_t N) {
  if (f.bounded()) N = std::min(N, f.n_max());
  double gamma = 0.0;
  for (std::size_t n = 0; n + 2 <= N; ++n) {
    const ScaledComplex lead = f.a(n + 1);
    if (lead.is_zero()) {
      throw DegenerateError("gamma_empirical: a_" + std::to_string(n + 1) + " = 0");
    }
    const double top = std::max(f.a(n + 2).log_abs, f.b(n + 2).log_abs);
    if (top == -kInf) continue;
    const double ratio =
        std::exp(std::log(static_cast<double>(n + 2)) + top - std::log(2.0) - lead.log_abs);
    gamma = std::max(gamma, ratio);
  }
  return gamma;
}

struct CoeffGrowthRow {
  std::size_t n;
  bool ok;
  /// log bound - log|a_n| (resp. |b_n|); +inf for vanishing coefficients.
  double slack_a;
  double slack_b;
};

/// |a_n|, |b_n| <= (2 gamma)^{n-1} / n! for n = 1..N.
inline std::vector<CoeffGrowthRow> coeff_growth_bound_check(const HarmonicMap& f, double gamma,
                                                            std::size_t N) {
  if (!(gamma > 0.0)) throw DomainError("coeff_growth_bound_check: gamma must be positive");
  std::vector<CoeffGrowthRow> rows;
  const double log_two_gamma = std::log(2.0 * gamma);
  for (std::size_t n = 1; n <= N; ++n) {
    const double bound = static_cast<double>(n - 1) * log_two_gamma - log_factorial(n);
    const double sa = bound - f.a(n).log_abs;
    const double sb = bound - f.b(n).log_abs;
    rows.push_back({n, sa >= -1e-12 && sb >= -1e-12, sa, sb});
  }
  return rows;
}

struct ExpTypeRow {
  double r;
  double log_m;
  double log_bound;  // log((e^{2 gamma r} - 1) / gamma)
  bool ok;
};

/// M(r, f) <= (e^{2 gamma r} - 1) / gamma on each radius.
inline std::vector<ExpTypeRow> exponential_type_bound_check(const HarmonicMap& f, double gamma,
                                                            const std::vector<double>& r_values,
                                                            std::size_t n_theta, std::size_t N) {
  if (!(gamma > 0.0)) throw DomainError("exponential_type_bound_check: gamma must be positive");
  std::vector<ExpTypeRow> rows;
  for (double r : r_values) {
    const std::size_t terms = std::max(N, suggest_terms(f, r).n);
    const double lm = max_modulus(f, r, n_theta, terms);
    const double bound = std::log(std::expm1(2.0 * gamma * r)) - std::log(gamma);
    rows.push_back({r, lm, bound, lm <= bound + 1e-9});
  }
  return rows;
}

struct ShcResult {
  bool pass = true;
  std::vector<std::size_t> violations;
};

/// |a_n|, |b_n| < (2n^2 + 1)/3 for 2 <= n <= N, after normalizing a_1 = 1.
inline ShcResult shc_membership_check(const HarmonicMap& f, std::size_t N) {
  const ScaledComplex a1 = f.a(1);
  if (a1.is_zero()) throw DegenerateError("shc_membership_check: a_1 = 0");
  ShcResult out;
  for (std::size_t n = 2; n <= N; ++n) {
    const double dn = static_cast<double>(n);
    const double limit = std::log((2.0 * dn * dn + 1.0) / 3.0);
    const double top = std::max(f.a(n).log_abs, f.b(n).log_abs) - a1.log_abs;
    if (!(top < limit)) {
      out.pass = false;
      out.violations.push_back(n);
    }
  }
  return out;
}

enum class RatioDirection { g_over_h, h_over_g, mixed };

inline const char* to_string(RatioDirection d) {
  switch (d) {
    case RatioDirection::g_over_h: return "g-over-h";
    case RatioDirection::h_over_g: return "h-over-g";
    case RatioDirection::mixed: return "mixed";
  }
  return "?";
}

struct RatioDelta {
  double delta = 0.0;
  RatioDirection direction = RatioDirection::mixed;
  /// Tail maxima of |b_n/a_n| and |a_n/b_n| (+inf when no index qualifies).
  double g_over_h = kInf;
  double h_over_g = kInf;
  /// 1/n-linear extrapolation of the chosen ratio sequence.
  double extrapolated = 0.0;
};

/// Tail estimate of limsup |b_n/a_n| (or |a_n/b_n|) over [n_lo, n_hi].
inline RatioDelta coefficient_ratio_delta(const HarmonicMap& f, std::size_t n_lo,
                                          std::size_t n_hi) {
  if (n_lo < 1 || n_lo >= n_hi) throw DomainError("coefficient_ratio_delta: bad window");
  std::vector<GrowthSample> gh, hg;
  for (std::size_t n = n_lo; n <= n_hi; ++n) {
    const ScaledComplex a = f.a(n);
    const ScaledComplex b = f.b(n);
    if (!a.is_zero()) gh.push_back({n, std::exp(b.log_abs - a.log_abs)});
    if (!b.is_zero()) hg.push_back({n, std::exp(a.log_abs - b.log_abs)});
  }
  if (gh.size() < 2 && hg.size() < 2) {
    throw InsufficientDataError("coefficient_ratio_delta: fewer than two nonzero coefficients");
  }
  auto tail_max = [](const std::vector<GrowthSample>& v) {
    if (v.empty()) return kInf;
    double m = 0.0;
    for (const auto& s : v) m = std::max(m, s.value);
    return m;
  };
  RatioDelta out;
  out.g_over_h = tail_max(gh);
  out.h_over_g = tail_max(hg);
  const bool use_gh = out.g_over_h <= out.h_over_g;
  out.delta = use_gh ? out.g_over_h : out.h_over_g;
  if (out.g_over_h >= 1.0 && out.h_over_g >= 1.0) {
    out.direction = RatioDirection::mixed;
  } else {
    out.direction = use_gh ? RatioDirection::g_over_h : RatioDirection::h_over_g;
  }
  const auto& seq = use_gh ? gh : hg;
  out.extrapolated = seq.size() >= 2 ? std::max(0.0, detail::fit_intercept(seq, detail::inverse_n_basis()))
                                     : out.delta;
  return out;
}

}  // namespace harmap
