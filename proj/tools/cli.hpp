#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "harmap/harmap.hpp"

namespace harmap::cli {

using json = nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInconclusive = 2;

/// Malformed input, reported with a JSON pointer to the offending field.
class SpecError : public Error {
 public:
  SpecError(const std::string& pointer, const std::string& what)
      : Error(what), pointer_(pointer) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

// ---- value formatting ------------------------------------------------------

inline json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

inline json cnum(std::complex<double> z) { return json::array({num(z.real()), num(z.imag())}); }

/// exp(log_abs) as a number when representable, else {"log_abs", "phase"}.
inline json scaled(double log_abs, double phase = 0.0) {
  if (log_abs < kLogDoubleMax) return num(std::exp(log_abs));
  return json{{"log_abs", num(log_abs)}, {"phase", num(phase)}};
}

inline json scaled(const ScaledComplex& c) {
  if (c.log_abs < kLogDoubleMax) return cnum(c.to_complex());
  return json{{"log_abs", num(c.log_abs)}, {"phase", num(c.phase)}};
}

inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream s;
  s << std::setprecision(12) << x;
  return s.str();
}

// ---- parameter and map parsing ---------------------------------------------

/// Parses "x", "x+yi", "x-yi", "yi" or "i".
inline std::complex<double> parse_complex(const std::string& text) {
  auto real_of = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ParameterError("cannot parse number '" + text + "'");
    }
    if (used != s.size()) throw ParameterError("cannot parse number '" + text + "'");
    return v;
  };
  if (text.empty()) throw ParameterError("empty parameter value");
  if (text.back() != 'i') return real_of(text);
  const std::string body = text.substr(0, text.size() - 1);
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_of = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return real_of(s);
  };
  if (split == std::string::npos) return {0.0, imag_of(body)};
  return {real_of(body.substr(0, split)), imag_of(body.substr(split))};
}

inline ParamMap parse_params(const std::vector<std::string>& items) {
  ParamMap p;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParameterError("--param expects key=value, got '" + item + "'");
    }
    p[item.substr(0, eq)] = parse_complex(item.substr(eq + 1));
  }
  return p;
}

inline double spec_number(const json& v, const std::string& ptr) {
  if (!v.is_number()) throw SpecError(ptr, "expected a number");
  return v.get<double>();
}

inline std::complex<double> spec_complex(const json& v, const std::string& ptr) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_array() || v.size() != 2) throw SpecError(ptr, "expected [re, im]");
  return {spec_number(v[0], ptr + "/0"), spec_number(v[1], ptr + "/1")};
}

struct LoadedMap {
  HarmonicMap map;
  json echo;
};

/// Map specification document:
///   {"kind": "catalog", "name": ..., "params": {key: x | [re, im]}}
///   {"kind": "coeffs", "a": [[re, im], ...], "b": [[re, im], ...]}
inline LoadedMap map_from_json(const json& doc) {
  if (!doc.is_object()) throw SpecError("", "expected an object");
  if (!doc.contains("kind")) throw SpecError("/kind", "missing");
  if (!doc["kind"].is_string()) throw SpecError("/kind", "expected a string");
  const std::string kind = doc["kind"].get<std::string>();
  LoadedMap out;
  if (kind == "catalog") {
    if (!doc.contains("name") || !doc["name"].is_string()) {
      throw SpecError("/name", "expected a catalog name");
    }
    ParamMap params;
    if (doc.contains("params")) {
      if (!doc["params"].is_object()) throw SpecError("/params", "expected an object");
      for (const auto& [key, value] : doc["params"].items()) {
        params[key] = spec_complex(value, "/params/" + key);
      }
    }
    CatalogEntry entry = [&] {
      try {
        return catalog_map(doc["name"].get<std::string>(), params);
      } catch (const ParameterError& e) {
        throw SpecError("/params", e.what());
      }
    }();
    out.map = entry.map;
    json p = json::object();
    for (const auto& [k, v] : entry.params) p[k] = cnum(v);
    out.echo = {{"kind", "catalog"}, {"name", entry.name}, {"params", p}};
    return out;
  }
  if (kind == "coeffs") {
    auto read = [&](const char* key) {
      std::vector<std::complex<double>> c;
      const std::string ptr = std::string("/") + key;
      if (!doc.contains(key)) return c;
      if (!doc[key].is_array()) throw SpecError(ptr, "expected an array of [re, im] pairs");
      for (std::size_t i = 0; i < doc[key].size(); ++i) {
        c.push_back(spec_complex(doc[key][i], ptr + "/" + std::to_string(i)));
      }
      return c;
    };
    std::vector<std::complex<double>> a = read("a");
    std::vector<std::complex<double>> b = read("b");
    if (!b.empty() && b[0] != 0.0) throw SpecError("/b/0", "b[0] must be 0");
    if (a.empty() && b.empty()) throw SpecError("/a", "no coefficients given");
    if (a.empty()) a.push_back(0.0);
    if (b.empty()) b.push_back(0.0);
    out.map = HarmonicMap(CoeffStream::from_complex(a, "file.h"), CoeffStream::from_complex(b, "file.g"));
    json ja = json::array(), jb = json::array();
    for (auto z : a) ja.push_back(cnum(z));
    for (auto z : b) jb.push_back(cnum(z));
    out.echo = {{"kind", "coeffs"}, {"a", ja}, {"b", jb}};
    return out;
  }
  throw SpecError("/kind", "expected \"catalog\" or \"coeffs\"");
}

inline LoadedMap map_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("", "cannot open map file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("", std::string("invalid JSON: ") + e.what());
  }
  return map_from_json(doc);
}

// ---- options and reports ---------------------------------------------------

struct Options {
  std::string command;
  std::string map_file;
  std::string catalog;
  std::vector<std::string> params;
  std::string format = "json";
  std::optional<std::size_t> nmax;
  std::size_t nlo = 2;
  std::size_t ntheta = 1024;
  double tail = 0.5;
  double alpha = 3.0;
  double beta = 3.0;
  double tol = 1e-8;
  std::vector<double> r;
  std::size_t m = 256;
  std::size_t deriv = 0;
  std::optional<double> rho;
  std::optional<double> lambda;
  std::optional<double> gaplog;
  std::optional<unsigned> mu;
  std::string theorem;
  double r_max = 4.0;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct Report {
  json results = json::object();
  Table table;
  std::vector<std::string> diagnostics;
  std::vector<std::string> warnings;
  int exit_code = kExitOk;
};

inline json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) obj[t.columns[c]] = row[c];
    rows.push_back(obj);
  }
  return rows;
}

inline std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

inline void write_csv(std::ostream& out, const Report& rep) {
  if (!rep.table.columns.empty()) {
    for (std::size_t c = 0; c < rep.table.columns.size(); ++c) {
      out << (c ? "," : "") << rep.table.columns[c];
    }
    out << "\n";
    for (const auto& row : rep.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        std::string s = cell_text(row[c]);
        if (s.find(',') != std::string::npos) s = "\"" + s + "\"";
        out << (c ? "," : "") << s;
      }
      out << "\n";
    }
    return;
  }
  out << "key,value\n";
  const json flat = rep.results.flatten();
  for (const auto& item : flat.items()) {
    std::string s = cell_text(item.value());
    if (s.find(',') != std::string::npos) s = "\"" + s + "\"";
    out << item.key() << "," << s << "\n";
  }
}

inline void write_text(std::ostream& out, const std::string& command, const Report& rep) {
  out << command << "\n";
  const json flat = rep.results.flatten();
  for (const auto& item : flat.items()) {
    if (item.key().rfind("/rows", 0) == 0) continue;
    out << "  " << item.key().substr(1) << " = " << cell_text(item.value()) << "\n";
  }
  if (!rep.table.columns.empty()) {
    std::vector<std::size_t> width(rep.table.columns.size());
    for (std::size_t c = 0; c < width.size(); ++c) width[c] = rep.table.columns[c].size();
    for (const auto& row : rep.table.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], cell_text(row[c]).size());
    }
    auto line = [&](auto get) {
      out << " ";
      for (std::size_t c = 0; c < width.size(); ++c) out << " " << std::setw(static_cast<int>(width[c])) << get(c);
      out << "\n";
    };
    line([&](std::size_t c) { return rep.table.columns[c]; });
    for (const auto& row : rep.table.rows) line([&](std::size_t c) { return cell_text(row[c]); });
  }
  for (const auto& d : rep.diagnostics) out << "  note: " << d << "\n";
}

inline json growth_json(const GrowthReport& g) {
  return {{"raw_tail_value", num(g.raw_tail_value)},
          {"extrapolated", num(g.extrapolated)},
          {"window_lo", g.window_lo},
          {"window_hi", g.window_hi},
          {"converged", g.converged},
          {"half_estimates", {num(g.half_estimates[0]), num(g.half_estimates[1])}},
          {"skipped_zero", g.skipped_zero},
          {"skipped_large", g.skipped_large},
          {"sample_count", g.samples.size()},
          {"note", g.note}};
}

inline Table growth_table(const GrowthReport& g) {
  Table t{{"n", "value"}, {}};
  for (const auto& s : g.samples) t.rows.push_back({s.n, num(s.value)});
  return t;
}

inline json witness_json(const Witness& w) {
  if (const auto* j = std::get_if<JacobianWitness>(&w)) {
    return {{"kind", "jacobian"}, {"z", cnum(j->z)}, {"jacobian", num(j->jacobian)}};
  }
  if (const auto* c = std::get_if<CollisionWitness>(&w)) {
    return {{"kind", "collision"}, {"z1", cnum(c->z1)}, {"z2", cnum(c->z2)}, {"distance", num(c->distance)}};
  }
  return nullptr;
}

// ---- commands --------------------------------------------------------------

inline std::size_t nmax_or(const Options& o, std::size_t fallback) { return o.nmax.value_or(fallback); }

inline AnalysisConfig analysis_config(const Options& o) {
  AnalysisConfig cfg;
  cfg.alpha = o.alpha;
  cfg.beta = o.beta;
  cfg.collision_tol = o.tol;
  cfg.upper_n_theta = std::min<std::size_t>(o.ntheta, 4096);
  cfg.upper_r_max = o.r_max;
  return cfg;
}

inline Report cmd_order(const HarmonicMap& f, const Options& o) {
  Report rep;
  const GrowthReport g = order_from_coeffs(f, o.nlo, nmax_or(o, 2000));
  rep.results = growth_json(g);
  rep.table = growth_table(g);
  if (!g.converged) rep.warnings.push_back("order estimate has not converged");
  return rep;
}

inline Report cmd_type(const HarmonicMap& f, const Options& o) {
  Report rep;
  const std::size_t n_hi = nmax_or(o, 2000);
  double rho = 0.0;
  if (o.rho) {
    rho = *o.rho;
  } else {
    rho = order_from_coeffs(f, o.nlo, n_hi).extrapolated;
    rep.diagnostics.push_back("rho taken from the coefficient order estimate");
  }
  const GrowthReport g = type_from_coeffs(f, rho, o.nlo, n_hi);
  rep.results = growth_json(g);
  rep.results["rho"] = num(rho);
  rep.table = growth_table(g);
  if (!g.converged) rep.warnings.push_back("type estimate has not converged");
  return rep;
}

inline Report cmd_maxmod(const HarmonicMap& f, const Options& o) {
  Report rep;
  const std::vector<double> radii = o.r.empty() ? std::vector<double>{1.0, 2.0, 5.0, 10.0} : o.r;
  rep.table.columns = {"r", "log_m", "m", "theta", "terms"};
  for (double r : radii) {
    const std::size_t terms = o.nmax ? *o.nmax : suggest_terms(f, r).n;
    const MaxModulus mm = max_modulus_detail(f, r, o.ntheta, terms);
    rep.table.rows.push_back({num(r), num(mm.log_m), scaled(mm.log_m), num(mm.theta), terms});
  }
  rep.results["rows"] = table_json(rep.table);
  return rep;
}

inline Report cmd_radii(const HarmonicMap& f, const Options& o) {
  Report rep;
  const std::size_t n_hi = nmax_or(o, 400);
  const ConvergenceRadii r = convergence_radii(f, 1, n_hi);
  rep.results = {{"r_h", num(r.r_h)}, {"r_g", num(r.r_g)}, {"r_f", num(r.r_f)}, {"n_lo", 1}, {"n_hi", n_hi}};
  return rep;
}

inline json certificate_json(const UnivalenceCertificate& c) {
  return {{"n", c.n},
          {"r_lower", num(c.r_lower)},
          {"r_upper", num(c.r_upper)},
          {"lower_method", to_string(c.lower_method)},
          {"upper_method", to_string(c.upper_method)},
          {"witness", witness_json(c.witness)},
          {"degenerate", c.degenerate},
          {"conjugated", c.conjugated},
          {"lower_unbounded", c.lower_unbounded},
          {"upper_scanned", c.upper_scanned},
          {"upper_grid", {{"r_max", num(c.upper_r_max)}, {"radii", c.upper_radii}, {"n_theta", c.upper_n_theta}}},
          {"notes", c.notes}};
}

inline Report cmd_radius(const HarmonicMap& f, const Options& o) {
  Report rep;
  const UnivalenceCertificate c = radius_certificate(f, o.deriv, analysis_config(o));
  rep.results = certificate_json(c);
  if (c.degenerate || c.r_lower == 0.0) rep.exit_code = kExitInconclusive;
  return rep;
}

inline Report cmd_gaps(const HarmonicMap& f, const Options& o) {
  Report rep;
  const GapAnalysis g = univalent_gap_analysis(f, nmax_or(o, 12), analysis_config(o), o.tail);
  rep.results["seq"] = g.seq.values();
  rep.results["rf_bound"] = num(g.rf_bound);
  rep.results["rho_bound"] = num(g.rho_bound);
  rep.results["inconclusive"] = g.inconclusive;
  rep.results["notes"] = g.notes;
  if (!g.inconclusive) {
    json ratios = json::array();
    for (double x : g.stats.second_diff_ratios) ratios.push_back(num(x));
    rep.results["stats"] = {{"lambda_tail", num(g.stats.lambda_tail)},
                            {"lambda_extrapolated", num(g.stats.lambda_extrapolated)},
                            {"gaplog_tail", num(g.stats.gaplog_tail)},
                            {"tail_fraction", num(g.stats.tail_fraction)},
                            {"lambda_window", g.stats.lambda_window},
                            {"gaplog_window", g.stats.gaplog_window},
                            {"second_diff_ratios", ratios}};
  }
  rep.table.columns = {"n", "included", "shc_pass", "r_lower", "lower_method", "reason"};
  for (const auto& c : g.candidates) {
    rep.table.rows.push_back({c.n, c.included, c.shc_pass, num(c.r_lower), to_string(c.lower_method), c.reason});
  }
  rep.results["rows"] = table_json(rep.table);
  if (g.inconclusive) rep.exit_code = kExitInconclusive;
  return rep;
}

inline Report cmd_bounds(const Options& o) {
  Report rep;
  if (!o.lambda && !o.gaplog && !o.mu) {
    throw ParameterError("bounds needs at least one of --lambda, --gaplog, --mu");
  }
  if (o.lambda) {
    rep.results["lambda"] = num(*o.lambda);
    rep.results["rf_lower_bound"] = num(rf_lower_bound(*o.lambda));
  }
  if (o.gaplog) {
    rep.results["gaplog"] = num(*o.gaplog);
    rep.results["rho_upper_bound"] = num(rho_upper_bound(*o.gaplog));
  }
  if (o.mu) {
    rep.results["mu"] = *o.mu;
    rep.results["exp_type_bound"] = num(exp_type_bound(*o.mu));
  }
  return rep;
}

/// Canonical name for a --theorem value.
inline std::string theorem_name(const std::string& t) {
  if (t == "2.3" || t == "order-of-sum") return "order-of-sum";
  if (t == "3.1" || t == "exponential-type") return "exponential-type";
  if (t == "2.11" || t == "cauchy-bound") return "cauchy-bound";
  throw ParameterError("--theorem must be one of 2.3, 3.1, 2.11 (or order-of-sum, exponential-type, cauchy-bound)");
}

inline Report cmd_verify(const HarmonicMap& f, const Options& o) {
  Report rep;
  const std::string which = theorem_name(o.theorem);
  rep.results["check"] = which;
  bool all = true;
  if (which == "order-of-sum") {
    const std::size_t n_hi = nmax_or(o, 2000);
    auto order_of = [&](const HarmonicMap& m) { return order_from_coeffs(m, o.nlo, n_hi).extrapolated; };
    const double rh = order_of(HarmonicMap::analytic(f.h()));
    const double rg = order_of(HarmonicMap::analytic(f.g()));
    const double rf = order_of(f);
    const double expect = std::max(rh, rg);
    rep.table.columns = {"quantity", "observed", "expected", "rel_err", "pass"};
    auto row = [&](const char* q, double obs, double exp, double tol) {
      const double err = exp == 0.0 ? std::fabs(obs) : std::fabs(obs - exp) / std::fabs(exp);
      const bool ok = err <= tol;
      all = all && ok;
      rep.table.rows.push_back({q, num(obs), num(exp), num(err), ok});
    };
    row("order", rf, expect, 0.03);
    if (expect > 0.0) {
      auto type_of = [&](const HarmonicMap& m) {
        return type_from_coeffs(m, expect, o.nlo, n_hi).extrapolated;
      };
      const double th = rh > 0.0 ? type_of(HarmonicMap::analytic(f.h())) : 0.0;
      const double tg = rg > 0.0 ? type_of(HarmonicMap::analytic(f.g())) : 0.0;
      const double tf = type_of(f);
      const bool equal_orders = std::fabs(rh - rg) <= 0.03 * expect;
      double texp = 0.0;
      if (equal_orders) {
        texp = std::max(th, tg);
      } else {
        texp = rh > rg ? th : tg;
      }
      row("type", tf, texp, 0.05);
      rep.results["types"] = {{"h", num(th)}, {"g", num(tg)}, {"f", num(tf)}};
    }
    rep.results["orders"] = {{"h", num(rh)}, {"g", num(rg)}, {"f", num(rf)}};
  } else if (which == "exponential-type") {
    const std::size_t N = nmax_or(o, 60);
    const double gamma = gamma_empirical(f, N);
    rep.results["gamma"] = num(gamma);
    rep.table.columns = {"check", "index", "lhs_log", "rhs_log", "pass"};
    if (gamma > 0.0) {
      for (const auto& r : coeff_growth_bound_check(f, gamma, N)) {
        all = all && r.ok;
        rep.table.rows.push_back({"coeff_growth", r.n, num(-r.slack_a), num(-r.slack_b), r.ok});
      }
      const std::vector<double> radii = o.r.empty() ? std::vector<double>{0.5, 1, 2, 5, 10} : o.r;
      for (const auto& r : exponential_type_bound_check(f, gamma, radii, o.ntheta, N)) {
        all = all && r.ok;
        rep.table.rows.push_back({"max_modulus", num(r.r), num(r.log_m), num(r.log_bound), r.ok});
      }
    } else {
      rep.diagnostics.push_back("gamma = 0: the map is linear");
    }
    rep.diagnostics.push_back("coeff_growth rows: lhs/rhs columns hold log(|a_n|/bound) and log(|b_n|/bound)");
  } else {
    const std::size_t N = nmax_or(o, 50);
    const std::vector<double> radii = o.r.empty() ? std::vector<double>{0.5, 1, 2, 5} : o.r;
    rep.table.columns = {"r", "n", "lhs_log", "rhs_log", "pass"};
    for (double r : radii) {
      for (const auto& row : cauchy_pair_bound_check(f, r, N, o.ntheta)) {
        all = all && row.ok;
        rep.table.rows.push_back({num(r), row.n, num(row.lhs), num(row.rhs), row.ok});
      }
    }
  }
  rep.results["pass"] = all;
  rep.results["rows"] = table_json(rep.table);
  if (!all) rep.exit_code = kExitInconclusive;
  return rep;
}

inline Report cmd_catalog_list() {
  Report rep;
  json list = json::array();
  rep.table.columns = {"name", "description", "params"};
  for (const auto& c : catalog_list()) {
    json params = json::array();
    std::string names;
    for (const auto& p : c.params) {
      params.push_back({{"name", p.name}, {"default", cnum(p.default_value)}, {"constraint", p.constraint}});
      names += (names.empty() ? "" : " ") + p.name;
    }
    list.push_back({{"name", c.name}, {"description", c.description}, {"params", params}});
    rep.table.rows.push_back({c.name, c.description, names});
  }
  rep.results["maps"] = list;
  return rep;
}

inline Report cmd_recover(const HarmonicMap& f, const Options& o) {
  Report rep;
  const double r = o.r.empty() ? 1.0 : o.r.front();
  const std::size_t n_max = nmax_or(o, 20);
  const std::size_t terms = std::max(n_max, suggest_terms(f, r).n);
  const RecoveredCoefficients rc = recover_coefficients(map_sampler(f, r, terms), r, n_max, o.m);
  rep.table.columns = {"n", "a", "b", "a_error", "b_error"};
  double worst = 0.0;
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double ea = std::abs(rc.a[n] - f.a(n).to_complex());
    const double eb = std::abs(rc.b[n] - f.b(n).to_complex());
    worst = std::max({worst, ea, eb});
    rep.table.rows.push_back({n, cnum(rc.a[n]), cnum(rc.b[n]), num(ea), num(eb)});
  }
  rep.results["r"] = num(r);
  rep.results["m"] = o.m;
  rep.results["max_error"] = num(worst);
  rep.results["rows"] = table_json(rep.table);
  return rep;
}

inline json config_json(const Options& o) {
  json c = {{"format", o.format},  {"nlo", o.nlo},         {"ntheta", o.ntheta}, {"tail", num(o.tail)},
            {"alpha", num(o.alpha)}, {"beta", num(o.beta)}, {"tol", num(o.tol)}, {"m", o.m},
            {"deriv", o.deriv},       {"r_max", num(o.r_max)}};
  c["nmax"] = o.nmax ? json(*o.nmax) : json(nullptr);
  json r = json::array();
  for (double x : o.r) r.push_back(num(x));
  c["r"] = r;
  c["rho"] = o.rho ? num(*o.rho) : json(nullptr);
  c["lambda"] = o.lambda ? num(*o.lambda) : json(nullptr);
  c["gaplog"] = o.gaplog ? num(*o.gaplog) : json(nullptr);
  c["mu"] = o.mu ? json(*o.mu) : json(nullptr);
  c["theorem"] = o.theorem.empty() ? json(nullptr) : json(theorem_name(o.theorem));
  return c;
}

inline LoadedMap resolve_map(const Options& o) {
  if (!o.map_file.empty() && !o.catalog.empty()) {
    throw ParameterError("give either --map or --catalog, not both");
  }
  if (!o.map_file.empty()) {
    if (!o.params.empty()) throw ParameterError("--param applies to --catalog only");
    return map_from_file(o.map_file);
  }
  if (o.catalog.empty()) throw ParameterError("this command needs --map <file> or --catalog <name>");
  json doc = {{"kind", "catalog"}, {"name", o.catalog}, {"params", json::object()}};
  for (const auto& [k, v] : parse_params(o.params)) doc["params"][k] = cnum(v);
  return map_from_json(doc);
}

inline Report dispatch(const Options& o, json& map_echo) {
  if (o.command == "bounds") return cmd_bounds(o);
  if (o.command == "catalog-list") return cmd_catalog_list();
  const LoadedMap lm = resolve_map(o);
  map_echo = lm.echo;
  const HarmonicMap& f = lm.map;
  if (o.command == "order") return cmd_order(f, o);
  if (o.command == "type") return cmd_type(f, o);
  if (o.command == "maxmod") return cmd_maxmod(f, o);
  if (o.command == "radii") return cmd_radii(f, o);
  if (o.command == "radius") return cmd_radius(f, o);
  if (o.command == "gaps") return cmd_gaps(f, o);
  if (o.command == "verify") return cmd_verify(f, o);
  if (o.command == "recover") return cmd_recover(f, o);
  throw ParameterError("unknown command '" + o.command + "'");
}

/// Runs one command; args excludes the program name. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Growth and univalence analysis of harmonic entire maps"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--map", o.map_file, "map specification JSON file");
  app.add_option("--catalog", o.catalog, "named catalog map");
  app.add_option("--param", o.params, "catalog parameter key=value (value real or re+imi)");
  app.add_option("--format", o.format)->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--nmax", o.nmax, "highest coefficient index / derivative order");
  app.add_option("--nlo", o.nlo, "lowest coefficient index for estimators");
  app.add_option("--ntheta", o.ntheta, "angular grid size (power of two)");
  app.add_option("--tail", o.tail, "tail fraction for gap statistics");
  app.add_option("--alpha", o.alpha);
  app.add_option("--beta", o.beta);
  app.add_option("--tol", o.tol, "collision tolerance");
  app.add_option("--r", o.r, "radius or radii")->delimiter(',');
  app.add_option("--r-max", o.r_max, "largest radius for the univalence scan");
  app.add_option("--m", o.m, "boundary samples for coefficient recovery");
  app.add_option("--deriv", o.deriv, "derivative order");
  app.add_option("--rho", o.rho, "order used by the type estimator");
  app.add_option("--lambda", o.lambda);
  app.add_option("--gaplog", o.gaplog);
  app.add_option("--mu", o.mu);
  app.add_option("--theorem", o.theorem, "2.3 | 3.1 | 2.11 or order-of-sum | exponential-type | cauchy-bound");
  for (const char* name : {"order", "type", "maxmod", "radii", "radius", "gaps", "bounds", "verify",
                           "catalog-list", "recover"}) {
    app.add_subcommand(name)->callback([&o, name] { o.command = name; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    json map_echo = nullptr;
    Report rep = dispatch(o, map_echo);
    for (const auto& w : rep.warnings) err << "warning: " << w << "\n";
    if (o.format == "csv") {
      write_csv(out, rep);
    } else if (o.format == "text") {
      write_text(out, o.command, rep);
    } else {
      json doc = {{"schema", "1"},
                  {"command", o.command},
                  {"config", config_json(o)},
                  {"map", map_echo},
                  {"results", rep.results},
                  {"diagnostics", rep.diagnostics},
                  {"warnings", rep.warnings},
                  {"exit_code", rep.exit_code}};
      out << doc.dump(2) << "\n";
    }
    return rep.exit_code;
  } catch (const SpecError& e) {
    err << "error: map specification at '" << e.pointer() << "': " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace harmap::cli
