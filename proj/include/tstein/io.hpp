// JSON parameter schema and report/CSV emission shared by the CLI and
// the tests.  Numbers print with 17 significant digits so reruns diff
// clean; reports carry schema_version 1.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "tstein/applications.hpp"
#include "tstein/params.hpp"
#include "tstein/sampling.hpp"

namespace tstein {

inline std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// {"family":"tsd"|"vg0"|"vg1"|"vg2", numeric fields by name}; an absent
// TSD side is encoded as null fields (or omitted ones).
inline TsdParams params_from_json(const nlohmann::json& j) {
  const std::string family = j.at("family").get<std::string>();
  const auto field = [&j](const char* name) -> std::optional<double> {
    if (!j.contains(name) || j[name].is_null()) return std::nullopt;
    return j[name].get<double>();
  };
  if (family == "tsd") {
    TsdParams p;
    const auto ap = field("alpha_plus"), bp = field("beta_plus"), lp = field("lambda_plus");
    const auto am = field("alpha_minus"), bm = field("beta_minus"), lm = field("lambda_minus");
    if (ap || bp || lp) p.plus = TsdSide{ap.value_or(0.0), bp.value_or(0.0), lp.value_or(0.0)};
    if (am || bm || lm) p.minus = TsdSide{am.value_or(0.0), bm.value_or(0.0), lm.value_or(0.0)};
    return validate(p);
  }
  if (family == "vg0" || family == "vg1") {
    const double a = j.at("alpha").get<double>();
    const double lp = j.at("lambda_plus").get<double>();
    const double lm = j.at("lambda_minus").get<double>();
    VgParams v = family == "vg0" ? VgParams(Vg0{a, lp, lm}) : VgParams(Vg1{a, lp, lm});
    return vg_convert(v).tsd();
  }
  if (family == "vg2") {
    VgParams v = Vg2{j.at("sigma2").get<double>(), j.at("r").get<double>(),
                     j.at("theta").get<double>()};
    return vg_convert(v).tsd();
  }
  throw std::invalid_argument("params_from_json: unknown family '" + family + "'");
}

inline nlohmann::json params_to_json(const TsdParams& p) {
  nlohmann::json j;
  j["family"] = "tsd";
  if (p.plus) {
    j["alpha_plus"] = p.plus->alpha;
    j["beta_plus"] = p.plus->beta;
    j["lambda_plus"] = p.plus->lambda;
  } else {
    j["alpha_plus"] = nullptr;
    j["beta_plus"] = nullptr;
    j["lambda_plus"] = nullptr;
  }
  if (p.minus) {
    j["alpha_minus"] = p.minus->alpha;
    j["beta_minus"] = p.minus->beta;
    j["lambda_minus"] = p.minus->lambda;
  } else {
    j["alpha_minus"] = nullptr;
    j["beta_minus"] = nullptr;
    j["lambda_minus"] = nullptr;
  }
  return j;
}

inline TsdParams load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open params file: " + path);
  nlohmann::json j;
  in >> j;
  return params_from_json(j);
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open output file: " + path);
  out << text;
}

inline void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

inline nlohmann::json rate_report_to_json(const RateReport& rep) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["lambda"] = rep.lambda;
  j["y_kind"] = rep.y_kind;
  j["n"] = rep.n;
  j["seed"] = rep.seed;
  j["slope"] = rep.slope;
  j["slope_stderr"] = rep.slope_stderr;
  j["slope_ci"] = {rep.slope_ci_low, rep.slope_ci_high};
  j["points"] = nlohmann::json::array();
  for (const auto& pt : rep.points) {
    j["points"].push_back({{"p", pt.p},
                           {"discrepancy", pt.discrepancy},
                           {"bound", pt.bound},
                           {"stderr", pt.stderr_},
                           {"coupling_gap", pt.coupling_gap},
                           {"coupling_gap_stderr", pt.coupling_gap_stderr},
                           {"coupling_expected", pt.coupling_expected}});
  }
  return j;
}

inline nlohmann::json chaos_report_to_json(const ChaosReport& rep) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["eigenvalues"] = rep.eigenvalues;
  j["alpha"] = rep.alpha;
  j["lambda"] = rep.lambda;
  j["n"] = rep.n;
  j["seed"] = rep.seed;
  j["bound"] = rep.bound.value;
  j["radicand"] = rep.bound.radicand;
  j["mismatch_term"] = rep.bound.mismatch_term;
  j["discrepancy"] = rep.discrepancy;
  j["stderr"] = rep.stderr_;
  j["w1_vs_reference"] = rep.w1_vs_reference;
  j["cumulants"] = rep.cumulants;
  return j;
}

}  // namespace tstein
