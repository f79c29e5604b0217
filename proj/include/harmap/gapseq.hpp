#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <future>
#include <numbers>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "harmap/coeff_stream.hpp"
#include "harmap/error.hpp"
#include "harmap/growth.hpp"
#include "harmap/scaled_complex.hpp"
#include "harmap/univalence.hpp"

namespace harmap {

/// Strictly increasing nonnegative indices n_1 < n_2 < ...
class GapSequence {
 public:
  GapSequence() = default;
  explicit GapSequence(std::vector<std::size_t> n) : n_(std::move(n)) {
    for (std::size_t p = 1; p < n_.size(); ++p) {
      if (n_[p] <= n_[p - 1]) throw DomainError("GapSequence: indices must strictly increase");
    }
  }

  const std::vector<std::size_t>& values() const { return n_; }
  std::size_t size() const { return n_.size(); }
  std::size_t operator[](std::size_t p) const { return n_[p]; }

 private:
  std::vector<std::size_t> n_;
};

struct GapStats {
  /// min n_p / n_{p+1} over the tail window.
  double lambda_tail = 0.0;
  /// Limit of n_p / n_{p+1} from a fit in 1/n_{p+1} over the same window,
  /// snapped to 1 when within 1e-9; clamped to [0, 1].
  double lambda_extrapolated = 0.0;
  /// max log(n_p - n_{p-1}) / log n_p over the tail window (n_p >= 2 only).
  double gaplog_tail = 0.0;
  std::vector<double> second_diff_ratios;
  double tail_fraction = 0.0;
  /// Number of ratios (resp. gap logs) in the tail window.
  std::size_t lambda_window = 0;
  std::size_t gaplog_window = 0;
};

namespace detail {

inline std::size_t tail_count(std::size_t total, double fraction) {
  if (total == 0) return 0;
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total) - 1e-12));
  return std::clamp<std::size_t>(k, 1, total);
}

}  // namespace detail

/// (n_{p+2} - 2 n_{p+1} + n_p) / n_p for each p; +inf where n_p = 0.
inline std::vector<double> second_difference_ratios(const GapSequence& seq) {
  std::vector<double> out;
  const auto& n = seq.values();
  for (std::size_t p = 0; p + 2 < n.size(); ++p) {
    const double d = static_cast<double>(n[p + 2]) - 2.0 * static_cast<double>(n[p + 1]) +
                     static_cast<double>(n[p]);
    out.push_back(n[p] == 0 ? (d == 0.0 ? 0.0 : kInf) : d / static_cast<double>(n[p]));
  }
  return out;
}

inline GapStats gap_stats(const GapSequence& seq, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw DomainError("gap_stats: tail_fraction must lie in (0, 1]");
  }
  if (seq.size() < 3) throw InsufficientDataError("gap_stats: need at least 3 indices");
  const auto& n = seq.values();
  const std::size_t L = n.size();
  GapStats st;
  st.tail_fraction = tail_fraction;

  const std::size_t k = detail::tail_count(L - 1, tail_fraction);
  st.lambda_window = k;
  st.lambda_tail = 1.0;
  std::vector<GrowthSample> ratios;
  for (std::size_t p = L - 1 - k; p + 1 < L; ++p) {
    const double r = static_cast<double>(n[p]) / static_cast<double>(n[p + 1]);
    st.lambda_tail = std::min(st.lambda_tail, r);
    ratios.push_back({n[p + 1], r});
  }
  if (ratios.size() >= 3) {
    double a = detail::fit_intercept(ratios, detail::inverse_n_basis());
    if (std::fabs(a - 1.0) < 1e-9) a = 1.0;
    st.lambda_extrapolated = std::clamp(a, 0.0, 1.0);
  } else {
    st.lambda_extrapolated = st.lambda_tail;
  }

  std::vector<double> gaplogs;
  for (std::size_t p = 1; p < L; ++p) {
    if (n[p] < 2) continue;
    gaplogs.push_back(std::log(static_cast<double>(n[p] - n[p - 1])) /
                      std::log(static_cast<double>(n[p])));
  }
  const std::size_t kg = detail::tail_count(gaplogs.size(), tail_fraction);
  st.gaplog_window = kg;
  st.gaplog_tail = 0.0;
  for (std::size_t i = gaplogs.size() - kg; i < gaplogs.size(); ++i) {
    st.gaplog_tail = std::max(st.gaplog_tail, gaplogs[i]);
  }
  st.second_diff_ratios = second_difference_ratios(seq);
  return st;
}

/// Lower bound for the radius of convergence from lambda = liminf n_p/n_{p+1}.
inline double rf_lower_bound(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("rf_lower_bound: lambda must lie in [0, 1]");
  if (lambda == 1.0) return kInf;
  if (lambda == 0.0) return 1.0;
  return std::exp(lambda / (lambda - 1.0) * std::log(lambda)) / (1.0 - lambda);
}

/// Order bound 1 / (1 - limsup log(n_p - n_{p-1}) / log n_p).
inline double rho_upper_bound(double gaplog) {
  if (!(gaplog >= 0.0 && gaplog <= 1.0)) throw DomainError("rho_upper_bound: gaplog must lie in [0, 1]");
  if (gaplog == 1.0) return kInf;
  return 1.0 / (1.0 - gaplog);
}

/// sqrt(2 pi) e^{-47/24} (mu + 1)^{9/2}.
inline double exp_type_bound(unsigned mu) {
  return std::sqrt(2.0 * std::numbers::pi) * std::exp(-47.0 / 24.0) *
         std::pow(static_cast<double>(mu) + 1.0, 4.5);
}

struct StirlingBounds {
  double lower;  // log(sqrt(2 pi) n^{1/2} (n/e)^n)
  double upper;  // lower + 1/24
};

/// Holds for n >= 2; at n = 1 the upper bound falls below log 1! = 0.
inline StirlingBounds stirling_sandwich(std::size_t n) {
  if (n < 1) throw DomainError("stirling_sandwich: n must be >= 1");
  const double dn = static_cast<double>(n);
  const double lower =
      0.5 * std::log(2.0 * std::numbers::pi) + 0.5 * std::log(dn) + dn * (std::log(dn) - 1.0);
  return {lower, lower + 1.0 / 24.0};
}

struct SecondDifferenceRow {
  std::size_t p;  // 1-based position
  double ratio;
};

inline std::vector<SecondDifferenceRow> second_difference_report(const GapSequence& seq) {
  if (seq.size() < 3) throw InsufficientDataError("second_difference_report: need at least 3 indices");
  std::vector<SecondDifferenceRow> rows;
  const auto ratios = second_difference_ratios(seq);
  for (std::size_t i = 0; i < ratios.size(); ++i) rows.push_back({i + 1, ratios[i]});
  return rows;
}

struct GapCandidate {
  std::size_t n = 0;
  bool included = false;
  bool shc_pass = false;
  double r_lower = 0.0;
  LowerMethod lower_method = LowerMethod::coefficient_lemma;
  std::string reason;
};

struct GapAnalysis {
  GapSequence seq;
  GapStats stats;
  double rf_bound = 1.0;
  double rho_bound = kInf;
  bool inconclusive = true;
  double tail_fraction = 0.5;
  std::vector<GapCandidate> candidates;
  std::vector<std::string> notes;
};

namespace detail {

inline GapCandidate gap_candidate(const HarmonicMap& f, std::size_t n, const AnalysisConfig& cfg) {
  GapCandidate c;
  c.n = n;
  try {
    HarmonicMap normalized = normalized_shifted_derivative(f, n);
    if (sense_preserving_at_origin(normalized) == Orientation::reversing) {
      normalized = conjugate(normalized);
    }
    c.shc_pass = shc_membership_check(normalized, cfg.coeff_window).pass;
    const UnivalenceCertificate cert = radius_certificate(f, n, cfg);
    c.r_lower = cert.r_lower;
    c.lower_method = cert.lower_method;
    if (cert.degenerate) {
      c.reason = "degenerate Jacobian at the origin";
    } else if (!c.shc_pass) {
      c.reason = "coefficient bound of the class fails";
    } else if (c.r_lower < 1.0) {
      c.reason = "univalence radius below 1 not excluded";
    } else {
      c.included = true;
    }
  } catch (const DegenerateError& e) {
    c.reason = e.what();
  } catch (const EmptyStreamError& e) {
    c.reason = e.what();
  }
  return c;
}

}  // namespace detail

/// Indices n <= n_max whose normalized shifted derivative is certified
/// univalent in the unit disk, with the gap statistics and bounds they imply.
///
/// The gate (class coefficient bounds plus r_lower >= 1) is sufficient only, so
/// the sequence is a subsequence of all admissible indices. A subsequence has a
/// smaller lambda and larger gaps, so the bounds stay valid, only weaker.
inline GapAnalysis univalent_gap_analysis(const HarmonicMap& f, std::size_t n_max,
                                          AnalysisConfig cfg = {}, double tail_fraction = 0.5) {
  if (n_max < 3) throw DomainError("univalent_gap_analysis: n_max must be >= 3");
  cfg.scan_upper = false;
  cfg.validate();
  GapAnalysis out;
  out.tail_fraction = tail_fraction;

  out.candidates.resize(n_max + 1);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n = next++; n <= n_max; n = next++) {
      out.candidates[n] = detail::gap_candidate(f, n, cfg);
    }
  };
  const std::size_t n_threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, n_max + 1);
  std::vector<std::future<void>> jobs;
  for (std::size_t t = 1; t < n_threads; ++t) jobs.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& j : jobs) j.get();
  std::vector<std::size_t> idx;
  for (const auto& c : out.candidates) {
    if (c.included) idx.push_back(c.n);
  }
  out.seq = GapSequence(idx);
  if (idx.size() < 3) {
    out.notes.push_back("fewer than 3 certified indices; no gap statistics");
    return out;
  }
  out.stats = gap_stats(out.seq, tail_fraction);
  out.rf_bound = rf_lower_bound(out.stats.lambda_extrapolated);
  out.rho_bound = rho_upper_bound(std::min(1.0, out.stats.gaplog_tail));
  out.inconclusive = false;
  out.notes.push_back("bounds hold for the certified subsequence and hence for f");
  return out;
}

}  // namespace harmap
