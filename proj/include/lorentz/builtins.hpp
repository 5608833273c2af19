#pragma once

// Built-in spaces by name, e.g. "minkowski_diamond(2,1)" or
// "cone_over(circle(2))".

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include "lorentz/cone.hpp"
#include "lorentz/error.hpp"
#include "lorentz/flat_spaces.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

/// A name with an optional parenthesised, comma separated argument list.
/// Arguments may nest, as in cone_over(circle(2)).
struct BuiltinCall {
  std::string name;
  std::vector<std::string> args;
};

inline BuiltinCall parse_builtin_call(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  BuiltinCall call;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    call.name = s;
  } else {
    if (s.back() != ')') throw Error(Errc::BadParams, "unbalanced parentheses in '" + text + "'");
    call.name = s.substr(0, open);
    const std::string inner = s.substr(open + 1, s.size() - open - 2);
    int depth = 0;
    std::string cur;
    for (char c : inner) {
      if (c == '(') ++depth;
      if (c == ')' && --depth < 0) throw Error(Errc::BadParams, "unbalanced parentheses in '" + text + "'");
      if (c == ',' && depth == 0) {
        call.args.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (depth != 0) throw Error(Errc::BadParams, "unbalanced parentheses in '" + text + "'");
    if (!cur.empty() || !call.args.empty()) call.args.push_back(cur);
  }
  if (call.name.empty()) throw Error(Errc::UnknownBuiltin, "empty space name");
  return call;
}

namespace detail {

inline double parse_number(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) throw Error(Errc::BadParams, "not a number: '" + s + "'");
  return v;
}

inline void require_args(const BuiltinCall& c, std::size_t lo, std::size_t hi) {
  if (c.args.size() < lo || c.args.size() > hi)
    throw Error(Errc::BadParams, c.name + " takes " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) +
                                     " arguments");
}

}  // namespace detail

inline MetricBase make_metric_base(const std::string& text) {
  const auto c = parse_builtin_call(text);
  if (c.name == "line") {
    detail::require_args(c, 0, 0);
    return MetricBase::line();
  }
  if (c.name == "circle") {
    detail::require_args(c, 1, 1);
    return MetricBase::circle(detail::parse_number(c.args[0]));
  }
  throw Error(Errc::UnknownBuiltin, "unknown base '" + c.name + "'");
}

inline SpaceHandle make_builtin(const std::string& text) {
  const auto c = parse_builtin_call(text);
  if (c.name == "minkowski_diamond") {
    detail::require_args(c, 0, 2);
    double dim = 2.0, radius = 1.0;
    if (c.args.size() > 0) dim = detail::parse_number(c.args[0]);
    if (c.args.size() > 1) radius = detail::parse_number(c.args[1]);
    if (dim != std::floor(dim) || dim < 2.0 || dim > 16.0) throw Error(Errc::BadParams, "dimension must be an integer in [2, 16]");
    return std::make_shared<MinkowskiDiamond>(static_cast<std::size_t>(dim), radius);
  }
  if (c.name == "causal_funnel") {
    detail::require_args(c, 0, 0);
    return std::make_shared<CausalFunnel>();
  }
  if (c.name == "half_minkowski") {
    detail::require_args(c, 0, 0);
    return std::make_shared<HalfMinkowski>();
  }
  if (c.name == "tilted_cone_exterior") {
    detail::require_args(c, 0, 0);
    return std::make_shared<TiltedConeExterior>();
  }
  if (c.name == "cone_over") {
    detail::require_args(c, 1, 1);
    return std::make_shared<ConeSpace>(make_metric_base(c.args[0]));
  }
  throw Error(Errc::UnknownBuiltin, "unknown built-in space '" + c.name + "'");
}

inline std::vector<std::string> builtin_names() {
  return {"minkowski_diamond", "causal_funnel", "half_minkowski", "tilted_cone_exterior", "cone_over"};
}

}  // namespace lorentz
