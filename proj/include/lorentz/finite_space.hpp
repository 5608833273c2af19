#pragma once

// Tabulated spaces: a time separation matrix, a causal relation matrix and
// optional coordinates for the background metric.

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lorentz/error.hpp"
#include "lorentz/flat_chart.hpp"
#include "lorentz/report.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

struct FiniteSpaceTable {
  std::size_t n = 0;
  std::vector<std::vector<double>> tau;
  std::vector<std::vector<int>> le;
  std::optional<std::vector<std::vector<double>>> coords;
  std::string name;

  bool operator==(const FiniteSpaceTable&) const = default;
};

namespace detail {

inline void require_square(const FiniteSpaceTable& t) {
  auto square = [&](const auto& m) {
    if (m.size() != t.n) return false;
    for (const auto& row : m)
      if (row.size() != t.n) return false;
    return true;
  };
  if (!square(t.tau) || !square(t.le)) throw Error(Errc::MalformedInput, "tau and le must be n x n");
  if (t.coords && t.coords->size() != t.n) throw Error(Errc::MalformedInput, "coords must have n rows");
}

}  // namespace detail

/// Lists every axiom violation of a table; tolerance is relative to the
/// separations involved.
inline CheckReport validate_finite_space(const FiniteSpaceTable& t, double tolerance = 1e-9) {
  detail::require_square(t);
  CheckReport r;
  r.space = t.name;
  r.variant = "axioms";
  r.tolerance = tolerance;
  auto flag = [&](const char* kind, std::initializer_list<std::pair<const char*, double>> at, double lhs, double rhs) {
    Violation v;
    v.witness.kind = kind;
    for (const auto& [key, value] : at) v.witness.add(key, value);
    v.lhs = lhs;
    v.rhs = rhs;
    v.gap = std::abs(lhs - rhs);
    ++r.violation_count;
    r.violations.push_back(std::move(v));
  };
  const std::size_t n = t.n;
  for (std::size_t i = 0; i < n; ++i) {
    const double di = static_cast<double>(i);
    if (t.tau[i][i] > 0.0) flag("irreflexive", {{"i", di}}, t.tau[i][i], 0.0);
    if (t.le[i][i] != 1) flag("reflexive", {{"i", di}}, t.le[i][i], 1.0);
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = static_cast<double>(j);
      if (!(t.tau[i][j] >= 0.0)) flag("negative", {{"i", di}, {"j", dj}}, t.tau[i][j], 0.0);
      if (t.le[i][j] != 0 && t.le[i][j] != 1) flag("boolean", {{"i", di}, {"j", dj}}, t.le[i][j], 1.0);
      if (t.tau[i][j] > 0.0 && t.le[i][j] != 1) flag("chron-not-causal", {{"i", di}, {"j", dj}}, t.tau[i][j], 0.0);
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (t.le[i][j] != 1) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (t.le[j][k] != 1) continue;
        ++r.samples;
        const double di = static_cast<double>(i), dj = static_cast<double>(j), dk = static_cast<double>(k);
        if (t.le[i][k] != 1) flag("transitivity", {{"i", di}, {"j", dj}, {"k", dk}}, 0.0, 1.0);
        const double sum = t.tau[i][j] + t.tau[j][k];
        if (!std::isfinite(sum)) continue;
        if (t.tau[i][k] < sum - tolerance * std::max(1.0, sum))
          flag("reverse-triangle", {{"i", di}, {"j", dj}, {"k", dk}}, t.tau[i][k], sum);
      }
    }
  r.admissible = r.samples;
  r.verdict = r.violation_count ? Verdict::fail : Verdict::pass;
  return r;
}

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(Errc::ParseError, where + ": " + what);
}

inline const nlohmann::json& require_array(const nlohmann::json& j, std::size_t n, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  if (n != static_cast<std::size_t>(-1) && j.size() != n) parse_fail(where, "expected " + std::to_string(n) + " entries");
  return j;
}

}  // namespace detail

inline FiniteSpaceTable load_finite_space(const std::string& bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    detail::parse_fail("byte " + std::to_string(e.byte), "malformed JSON");
  }
  if (!doc.is_object()) detail::parse_fail("$", "expected an object");
  for (const auto& [key, _] : doc.items())
    if (key != "n" && key != "tau" && key != "le" && key != "coords" && key != "meta")
      detail::parse_fail("$." + key, "unknown key");

  FiniteSpaceTable t;
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) detail::parse_fail("$.n", "expected a nonnegative integer");
  t.n = doc["n"].get<std::size_t>();
  for (const char* key : {"tau", "le"})
    if (!doc.contains(key)) detail::parse_fail(std::string("$.") + key, "missing");

  const auto& tau = detail::require_array(doc["tau"], t.n, "$.tau");
  const auto& le = detail::require_array(doc["le"], t.n, "$.le");
  t.tau.assign(t.n, std::vector<double>(t.n));
  t.le.assign(t.n, std::vector<int>(t.n));
  for (std::size_t i = 0; i < t.n; ++i) {
    const std::string ti = "$.tau[" + std::to_string(i) + "]", li = "$.le[" + std::to_string(i) + "]";
    detail::require_array(tau[i], t.n, ti);
    detail::require_array(le[i], t.n, li);
    for (std::size_t j = 0; j < t.n; ++j) {
      const std::string at = "[" + std::to_string(j) + "]";
      if (!tau[i][j].is_number()) detail::parse_fail(ti + at, "expected a number");
      const double v = tau[i][j].get<double>();
      if (!(v >= 0.0)) detail::parse_fail(ti + at, "negative time separation");
      t.tau[i][j] = v;
      if (!le[i][j].is_number_integer() || (le[i][j] != 0 && le[i][j] != 1)) detail::parse_fail(li + at, "expected 0 or 1");
      t.le[i][j] = le[i][j].get<int>();
    }
  }
  if (doc.contains("coords")) {
    const auto& c = detail::require_array(doc["coords"], t.n, "$.coords");
    std::vector<std::vector<double>> coords(t.n);
    for (std::size_t i = 0; i < t.n; ++i) {
      const std::string ci = "$.coords[" + std::to_string(i) + "]";
      detail::require_array(c[i], static_cast<std::size_t>(-1), ci);
      for (std::size_t j = 0; j < c[i].size(); ++j) {
        if (!c[i][j].is_number()) detail::parse_fail(ci + "[" + std::to_string(j) + "]", "expected a number");
        coords[i].push_back(c[i][j].get<double>());
      }
      if (coords[i].size() != coords[0].size()) detail::parse_fail(ci, "coordinate rows differ in length");
    }
    t.coords = std::move(coords);
  }
  if (doc.contains("meta")) {
    const auto& meta = doc["meta"];
    if (!meta.is_object()) detail::parse_fail("$.meta", "expected an object");
    if (meta.contains("name")) {
      if (!meta["name"].is_string()) detail::parse_fail("$.meta.name", "expected a string");
      t.name = meta["name"].get<std::string>();
    }
  }
  return t;
}

inline std::string save_finite_space(const FiniteSpaceTable& t) {
  detail::require_square(t);
  nlohmann::ordered_json doc;
  doc["n"] = t.n;
  doc["tau"] = t.tau;
  doc["le"] = t.le;
  if (t.coords) doc["coords"] = *t.coords;
  doc["meta"] = {{"name", t.name}};
  return doc.dump(2) + "\n";
}

/// A tabulated space as a Space.  Points are {index}.
class FiniteSpace : public Space {
 public:
  explicit FiniteSpace(FiniteSpaceTable table) : t_(std::move(table)) { detail::require_square(t_); }

  const FiniteSpaceTable& table() const { return t_; }

  std::string name() const override { return t_.name.empty() ? "finite(" + std::to_string(t_.n) + ")" : t_.name; }
  Capabilities capabilities() const override {
    Capabilities c;
    c.finite = true;
    return c;
  }
  double tau(const Point& p, const Point& q) const override { return t_.tau[index(p)][index(q)]; }
  bool le(const Point& p, const Point& q) const override { return t_.le[index(p)][index(q)] == 1; }
  double dist(const Point& p, const Point& q) const override {
    const std::size_t i = index(p), j = index(q);
    if (!t_.coords) return i == j ? 0.0 : 1.0;
    return euclidean_distance((*t_.coords)[i], (*t_.coords)[j]);
  }

 private:
  std::size_t index(const Point& p) const {
    if (p.size() != 1 || !(p[0] >= 0.0) || p[0] != std::floor(p[0]) || p[0] >= static_cast<double>(t_.n))
      throw Error(Errc::BadParams, "finite space points are {index}");
    return static_cast<std::size_t>(p[0]);
  }

  FiniteSpaceTable t_;
};

/// Tabulates a space on the given points; coordinates are kept.
inline FiniteSpaceTable tabulate(const Space& space, const std::vector<Point>& points) {
  FiniteSpaceTable t;
  t.n = points.size();
  t.name = space.name();
  t.tau.assign(t.n, std::vector<double>(t.n));
  t.le.assign(t.n, std::vector<int>(t.n));
  for (std::size_t i = 0; i < t.n; ++i)
    for (std::size_t j = 0; j < t.n; ++j) {
      t.tau[i][j] = i == j ? 0.0 : space.tau(points[i], points[j]);
      t.le[i][j] = i == j || space.le(points[i], points[j]) ? 1 : 0;
    }
  t.coords = points;
  return t;
}

}  // namespace lorentz
