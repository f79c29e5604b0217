#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "harmap/coeff_stream.hpp"
#include "harmap/error.hpp"
#include "harmap/growth.hpp"
#include "harmap/scaled_complex.hpp"
#include "harmap/special.hpp"

namespace harmap {

using ParamMap = std::map<std::string, std::complex<double>>;

struct CatalogEntry {
  std::string name;
  ParamMap params;  // effective parameters, defaults resolved
  HarmonicMap map;
  std::string notes;
};

struct CatalogParamInfo {
  std::string name;
  std::complex<double> default_value;
  std::string constraint;
};

struct CatalogInfo {
  std::string name;
  std::string description;
  std::vector<CatalogParamInfo> params;
};

/// Lower end of the Bessel parameter range: the root of f_nu'(1) = 0 on (-1, inf).
inline constexpr double kBesselNu0 = -0.5623;

/// Coefficients of 1F2(a; b, c; z): (a)_n / ((b)_n (c)_n n!).
inline CoeffStream hyp1f2_coeffs(double a, double b, double c) {
  auto is_pole = [](double x) { return x <= 0.0 && x == std::floor(x); };
  if (is_pole(b) || is_pole(c)) {
    throw ParameterError("hyp1f2_coeffs: lower parameters must not be nonpositive integers");
  }
  return CoeffStream::generated(
      [a, b, c](std::size_t n) {
        const SignedLog pa = log_pochhammer(a, n);
        if (pa.sign == 0) return ScaledComplex::zero();
        const SignedLog pb = log_pochhammer(b, n);
        const SignedLog pc = log_pochhammer(c, n);
        const int sign = pa.sign * pb.sign * pc.sign;
        return ScaledComplex::from_log(pa.log_abs - pb.log_abs - pc.log_abs - log_factorial(n),
                                       sign < 0 ? std::numbers::pi : 0.0);
      },
      CoeffStream::kUnbounded,
      "1F2(" + std::to_string(a) + ";" + std::to_string(b) + "," + std::to_string(c) + ")");
}

/// e^z - 1.
inline CoeffStream exp_minus_one_stream() {
  return CoeffStream::generated(
      [](std::size_t n) {
        if (n == 0) return ScaledComplex::zero();
        return ScaledComplex::from_log(-log_factorial(n));
      },
      CoeffStream::kUnbounded, "exp(z)-1");
}

/// (2/z)(e^z - 1 - z): a_k = 2/(k+1)!.
inline CoeffStream example3_stream() {
  return CoeffStream::generated(
      [](std::size_t k) {
        if (k == 0) return ScaledComplex::zero();
        return ScaledComplex::from_log(std::log(2.0) - log_factorial(k + 1));
      },
      CoeffStream::kUnbounded, "2(exp(z)-1-z)/z");
}

namespace detail {

/// Stream with coefficient n+1 = (-1)^n exp(log_mag(n)), zero at index 0.
template <class LogMag>
CoeffStream alternating_shifted(LogMag log_mag, std::string label) {
  return CoeffStream::generated(
      [log_mag](std::size_t m) {
        if (m == 0) return ScaledComplex::zero();
        const std::size_t n = m - 1;
        return ScaledComplex::from_log(log_mag(static_cast<double>(n)),
                                       n % 2 == 1 ? std::numbers::pi : 0.0);
      },
      CoeffStream::kUnbounded, std::move(label));
}

}  // namespace detail

/// 2^nu Gamma(nu+1) z^{1-nu/2} J_nu(sqrt z).
inline CoeffStream bessel_f_stream(double nu) {
  const double lg = log_gamma(nu + 1.0);
  return detail::alternating_shifted(
      [nu, lg](double n) {
        return lg - n * std::log(4.0) - log_gamma(n + 1.0) - log_gamma(nu + n + 1.0);
      },
      "bessel_f(" + std::to_string(nu) + ")");
}

/// sqrt(pi) 2^nu Gamma(nu+3/2) z^{(1-nu)/2} H_nu(sqrt z).
inline CoeffStream struve_h_stream(double nu) {
  const double lead = 0.5 * std::log(std::numbers::pi) - std::log(2.0) + log_gamma(nu + 1.5);
  return detail::alternating_shifted(
      [nu, lead](double n) {
        return lead - n * std::log(4.0) - log_gamma(n + 1.5) - log_gamma(nu + n + 1.5);
      },
      "struve_h(" + std::to_string(nu) + ")");
}

/// z 1F2(1; (mu+2)/2, (mu+3)/2; -z/4).
inline CoeffStream lommel_l_stream(double mu) {
  const double lead = log_gamma(0.5 * mu + 1.0) + log_gamma(0.5 * mu + 1.5);
  return detail::alternating_shifted(
      [mu, lead](double n) {
        return lead - n * std::log(4.0) - log_gamma(0.5 * mu + n + 1.0) -
               log_gamma(0.5 * mu + n + 1.5);
      },
      "lommel_l(" + std::to_string(mu) + ")");
}

/// f_nu'(1) summed from the coefficient series.
inline double bessel_derivative_at_one(double nu, std::size_t terms = 60) {
  const CoeffStream s = bessel_f_stream(nu);
  CompensatedSum acc;
  for (std::size_t m = 1; m <= terms; ++m) {
    acc.add(static_cast<double>(m) * s.coeff(m).to_complex().real());
  }
  return acc.value();
}

/// f_nu'(1) changes sign on [-0.57, -0.55], bracketing kBesselNu0.
inline bool bessel_nu0_root_check() {
  return bessel_derivative_at_one(-0.57) < 0.0 && bessel_derivative_at_one(-0.55) > 0.0 &&
         kBesselNu0 > -0.57 && kBesselNu0 < -0.55;
}

inline const std::vector<CatalogInfo>& catalog_list() {
  static const std::vector<CatalogInfo> list = {
      {"f_rho", "sum (n/(rho e))^{-n/rho} z^n, order rho and type 1",
       {{"rho", 1.0, "rho > 0"}, {"lambda", 0.0, "|lambda| < 1"}}},
      {"exp_affine", "e^z - 1 + lambda conj(e^z - 1)", {{"lambda", 0.0, "|lambda| < 1"}}},
      {"example3", "h + lambda conj(h), h = (2/z)(e^z - 1 - z)", {{"lambda", 0.0, "|lambda| < 1"}}},
      {"bessel_f", "2^nu Gamma(nu+1) z^{1-nu/2} J_nu(sqrt z) (+ lambda conj)",
       {{"nu", 0.0, "nu >= -0.5623"}, {"lambda", 0.0, "|lambda| < 1"}}},
      {"struve_h", "sqrt(pi) 2^nu Gamma(nu+3/2) z^{(1-nu)/2} H_nu(sqrt z) (+ lambda conj)",
       {{"nu", 0.0, "|nu| <= 1/2"}, {"lambda", 0.0, "|lambda| < 1"}}},
      {"lommel_l", "z 1F2(1; (mu+2)/2, (mu+3)/2; -z/4) (+ lambda conj)",
       {{"mu", 0.5, "-1 < mu < 1, mu != 0"}, {"lambda", 0.0, "|lambda| < 1"}}},
      {"poly", "harmonic polynomial sum a_k z^k + conj(sum b_k z^k)",
       {{"a<k>", 0.0, "k >= 0, complex"}, {"b<k>", 0.0, "k >= 1, complex"}}},
  };
  return list;
}

namespace detail {

inline double real_param(const ParamMap& p, const std::string& key) {
  const auto z = p.at(key);
  if (z.imag() != 0.0) throw ParameterError("parameter '" + key + "' must be real");
  return z.real();
}

inline HarmonicMap with_lambda(const CoeffStream& h, std::complex<double> lambda) {
  if (!(std::abs(lambda) < 1.0)) {
    throw ParameterError("parameter 'lambda' must satisfy |lambda| < 1 (sense-preserving)");
  }
  if (lambda == 0.0) return HarmonicMap::analytic(h);
  return affine_combine(h, lambda);
}

inline HarmonicMap poly_map(const ParamMap& params) {
  std::vector<std::complex<double>> a, b;
  for (const auto& [key, value] : params) {
    if (key.size() < 2 || (key[0] != 'a' && key[0] != 'b')) {
      throw ParameterError("poly: unknown parameter '" + key + "' (expected a<k> or b<k>)");
    }
    std::size_t idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoul(key.substr(1), &used);
      if (used != key.size() - 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParameterError("poly: malformed coefficient name '" + key + "'");
    }
    auto& target = key[0] == 'a' ? a : b;
    if (key[0] == 'b' && idx == 0) throw ParameterError("poly: b0 must be zero");
    if (target.size() <= idx) target.resize(idx + 1);
    target[idx] = value;
  }
  if (a.empty()) a.push_back(0.0);
  if (b.empty()) b.push_back(0.0);
  return HarmonicMap(CoeffStream::from_complex(a, "poly.h"), CoeffStream::from_complex(b, "poly.g"));
}

}  // namespace detail

/// Builds a named example map. Unknown names and out-of-range parameters raise
/// ParameterError.
inline CatalogEntry catalog_map(const std::string& name, const ParamMap& params = {}) {
  const CatalogInfo* info = nullptr;
  for (const auto& c : catalog_list()) {
    if (c.name == name) info = &c;
  }
  if (info == nullptr) throw ParameterError("unknown catalog map '" + name + "'");

  CatalogEntry entry;
  entry.name = name;
  entry.notes = info->description;
  if (name == "poly") {
    entry.params = params;
    entry.map = detail::poly_map(params);
    return entry;
  }
  ParamMap p;
  for (const auto& spec : info->params) p[spec.name] = spec.default_value;
  for (const auto& [key, value] : params) {
    if (!p.contains(key)) {
      throw ParameterError("catalog map '" + name + "' has no parameter '" + key + "'");
    }
    p[key] = value;
  }
  entry.params = p;
  const std::complex<double> lambda = p.at("lambda");

  if (name == "f_rho") {
    const double rho = detail::real_param(p, "rho");
    if (!(rho > 0.0)) throw ParameterError("f_rho: rho must be positive");
    entry.map = detail::with_lambda(f_rho_stream(rho), lambda);
  } else if (name == "exp_affine") {
    entry.map = detail::with_lambda(exp_minus_one_stream(), lambda);
  } else if (name == "example3") {
    entry.map = detail::with_lambda(example3_stream(), lambda);
  } else if (name == "bessel_f") {
    static const bool nu0_ok = bessel_nu0_root_check();
    if (!nu0_ok) throw Error("bessel_f: the nu_0 root bracket failed to validate");
    const double nu = detail::real_param(p, "nu");
    if (nu < kBesselNu0) {
      throw ParameterError("bessel_f: nu must be >= -0.5623 (root of f_nu'(1) = 0)");
    }
    entry.map = detail::with_lambda(bessel_f_stream(nu), lambda);
  } else if (name == "struve_h") {
    const double nu = detail::real_param(p, "nu");
    if (std::fabs(nu) > 0.5) throw ParameterError("struve_h: |nu| must be <= 1/2");
    entry.map = detail::with_lambda(struve_h_stream(nu), lambda);
  } else if (name == "lommel_l") {
    const double mu = detail::real_param(p, "mu");
    if (!(mu > -1.0 && mu < 1.0) || mu == 0.0) {
      throw ParameterError("lommel_l: mu must lie in (-1, 1) and differ from 0");
    }
    entry.map = detail::with_lambda(lommel_l_stream(mu), lambda);
  }
  return entry;
}

}  // namespace harmap
