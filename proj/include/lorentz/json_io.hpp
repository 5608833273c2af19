#pragma once

// JSON form of check reports.  Keys appear in a fixed order so that equal
// reports serialize to equal bytes.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/report.hpp"

namespace lorentz {

using ordered_json = nlohmann::ordered_json;

namespace detail {

// JSON has no infinities or NaN; they are written as strings.
inline ordered_json json_number(double v) {
  if (std::isfinite(v)) return v == 0.0 ? 0.0 : v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace detail

inline ordered_json witness_json(const Witness& w) {
  ordered_json j = ordered_json::object();
  j["kind"] = w.kind;
  for (const auto& [key, value] : w.fields) j[key] = detail::json_number(value);
  return j;
}

inline ordered_json report_json(const CheckReport& r) {
  ordered_json j;
  j["space"] = r.space;
  j["k"] = r.k;
  j["bound"] = r.bound;
  j["variant"] = r.variant;
  j["samples"] = r.samples;
  j["admissible"] = r.admissible;
  j["seed"] = r.seed;
  j["tolerance"] = r.tolerance;
  j["violations"] = ordered_json::array();
  for (const auto& v : r.violations) {
    ordered_json e;
    e["witness"] = witness_json(v.witness);
    e["lhs"] = detail::json_number(v.lhs);
    e["rhs"] = detail::json_number(v.rhs);
    e["gap"] = detail::json_number(v.gap);
    j["violations"].push_back(std::move(e));
  }
  j["verdict"] = to_string(r.verdict);
  return j;
}

inline std::string dump_json(const ordered_json& j) { return j.dump(2) + "\n"; }

/// Problems with a report document; empty when it matches the schema.
inline std::vector<std::string> report_schema_errors(const nlohmann::json& j) {
  std::vector<std::string> errors;
  if (!j.is_object()) return {"$: expected an object"};
  const std::vector<std::string> keys{"space",     "k",          "bound",      "variant", "samples",
                                      "admissible", "seed", "tolerance", "violations", "verdict"};
  for (const auto& [key, _] : j.items())
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) errors.push_back("$." + key + ": unexpected key");
  for (const auto& key : keys)
    if (!j.contains(key)) errors.push_back("$." + key + ": missing");
  if (!errors.empty()) return errors;
  if (!j["space"].is_string()) errors.push_back("$.space: expected a string");
  if (!j["k"].is_number()) errors.push_back("$.k: expected a number");
  if (j["bound"] != "below" && j["bound"] != "above") errors.push_back("$.bound: expected below or above");
  if (!j["variant"].is_string()) errors.push_back("$.variant: expected a string");
  for (const char* key : {"samples", "admissible", "seed"})
    if (!j[key].is_number_unsigned()) errors.push_back(std::string("$.") + key + ": expected a nonnegative integer");
  if (!j["tolerance"].is_number()) errors.push_back("$.tolerance: expected a number");
  if (!j["violations"].is_array()) {
    errors.push_back("$.violations: expected an array");
  } else {
    for (std::size_t i = 0; i < j["violations"].size(); ++i) {
      const auto& v = j["violations"][i];
      const std::string at = "$.violations[" + std::to_string(i) + "]";
      if (!v.is_object() || v.size() != 4 || !v.contains("witness") || !v["witness"].is_object()) {
        errors.push_back(at + ": expected {witness, lhs, rhs, gap}");
        continue;
      }
      for (const char* key : {"lhs", "rhs", "gap"}) {
        const bool ok = v.contains(key) && (v[key].is_number() || v[key] == "inf" || v[key] == "-inf" || v[key] == "nan");
        if (!ok) errors.push_back(at + "." + key + ": expected a number");
      }
    }
  }
  if (j["verdict"] != "pass" && j["verdict"] != "fail" && j["verdict"] != "inconclusive")
    errors.push_back("$.verdict: expected pass, fail or inconclusive");
  return errors;
}

}  // namespace lorentz
