#pragma once

// The Minkowski cone over a metric space: cone metric, time separation,
// causal relation and the cone as a Space.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <locale>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "lorentz/comparison.hpp"
#include "lorentz/error.hpp"
#include "lorentz/flat_chart.hpp"
#include "lorentz/flat_spaces.hpp"
#include "lorentz/report.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

/// Base metric spaces: the real line, a circle of given circumference and a
/// finite distance table.  Base points are doubles; table points are indices.
class MetricBase {
 public:
  enum class Kind { line, circle, table };

  static MetricBase line() { return MetricBase(Kind::line); }

  static MetricBase circle(double circumference) {
    if (!(circumference > 0.0) || !std::isfinite(circumference))
      throw Error(Errc::BadParams, "circumference must be positive");
    MetricBase b(Kind::circle);
    b.circumference_ = circumference;
    return b;
  }

  static MetricBase table(std::vector<std::vector<double>> dist) {
    for (const auto& row : dist)
      if (row.size() != dist.size()) throw Error(Errc::MalformedInput, "distance table must be square");
    MetricBase b(Kind::table);
    b.table_ = std::move(dist);
    return b;
  }

  Kind kind() const { return kind_; }
  double circumference() const { return circumference_; }
  const std::vector<std::vector<double>>& distances() const { return table_; }
  std::size_t size() const { return table_.size(); }

  std::string name() const {
    switch (kind_) {
      case Kind::line: return "line";
      case Kind::circle: {
        std::ostringstream os;
        os.imbue(std::locale::classic());
        os << "circle(" << circumference_ << ")";
        return os.str();
      }
      default: return "table(" + std::to_string(table_.size()) + ")";
    }
  }

  double dist(double y1, double y2) const {
    switch (kind_) {
      case Kind::line: return std::abs(y1 - y2);
      case Kind::circle: {
        const double r = std::fmod(std::abs(y1 - y2), circumference_);
        return std::min(r, circumference_ - r);
      }
      default: return table_[index(y1)][index(y2)];
    }
  }

  double sample(Rng& rng) const {
    switch (kind_) {
      case Kind::line: return rng.uniform(-1.0, 1.0);
      case Kind::circle: return rng.uniform(0.0, circumference_);
      default: return static_cast<double>(rng.index(table_.size()));
    }
  }

  std::size_t index(double y) const {
    if (!(y >= 0.0) || y != std::floor(y) || y >= static_cast<double>(table_.size()))
      throw Error(Errc::BadParams, "table base points are indices");
    return static_cast<std::size_t>(y);
  }

 private:
  explicit MetricBase(Kind kind) : kind_(kind) {}

  Kind kind_;
  double circumference_ = 0.0;
  std::vector<std::vector<double>> table_;
};

/// Symmetry, identity and the triangle inequality on sampled base triples.
inline CheckReport validate_metric_base(const MetricBase& base, std::uint64_t seed, std::size_t samples,
                                        double tolerance = 1e-12) {
  CheckReport r;
  r.space = base.name();
  r.variant = "metric";
  r.seed = seed;
  r.tolerance = tolerance;
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = base.sample(rng), y = base.sample(rng), z = base.sample(rng);
    const double xy = base.dist(x, y), yx = base.dist(y, x), xz = base.dist(x, z), yz = base.dist(y, z);
    const double slack = tolerance * std::max(1.0, xz);
    auto flag = [&](const char* kind, double lhs, double rhs) {
      Violation v;
      v.witness.kind = kind;
      v.witness.add("x", x).add("y", y).add("z", z);
      v.lhs = lhs;
      v.rhs = rhs;
      v.gap = lhs - rhs;
      ++r.violation_count;
      keep_worst(r.violations, std::move(v), 100);
    };
    if (std::abs(xy - yx) > slack) flag("symmetry", xy, yx);
    if (base.dist(x, x) > tolerance) flag("identity", base.dist(x, x), 0.0);
    if (!(xy >= 0.0)) flag("negative", 0.0, xy);
    if (xz > xy + yz + slack) flag("triangle", xz, xy + yz);
    ++r.samples;
  }
  r.admissible = r.samples;
  r.verdict = decide(r, 0);
  return r;
}

/// Metric base JSON: {"n": int, "dist": [[float]]}.
inline MetricBase load_metric_base(const std::string& bytes) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, "byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  if (!doc.is_object()) throw Error(Errc::ParseError, "$: expected an object");
  for (const auto& [key, _] : doc.items())
    if (key != "n" && key != "dist") throw Error(Errc::ParseError, "$." + key + ": unknown key");
  if (!doc.contains("n") || !doc["n"].is_number_unsigned()) throw Error(Errc::ParseError, "$.n: expected a nonnegative integer");
  const std::size_t n = doc["n"].get<std::size_t>();
  if (!doc.contains("dist") || !doc["dist"].is_array() || doc["dist"].size() != n)
    throw Error(Errc::ParseError, "$.dist: expected " + std::to_string(n) + " rows");
  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = doc["dist"][i];
    const std::string where = "$.dist[" + std::to_string(i) + "]";
    if (!row.is_array() || row.size() != n) throw Error(Errc::ParseError, where + ": expected " + std::to_string(n) + " entries");
    for (std::size_t j = 0; j < n; ++j) {
      if (!row[j].is_number() || !(row[j].get<double>() >= 0.0))
        throw Error(Errc::ParseError, where + "[" + std::to_string(j) + "]: expected a nonnegative number");
      dist[i][j] = row[j].get<double>();
    }
  }
  return MetricBase::table(std::move(dist));
}

inline std::string save_metric_base(const MetricBase& base) {
  if (base.kind() != MetricBase::Kind::table) throw Error(Errc::BadParams, "only table bases serialize");
  nlohmann::ordered_json doc;
  doc["n"] = base.size();
  doc["dist"] = base.distances();
  return doc.dump(2) + "\n";
}

/// (t, y): height t >= 0 over base point y.  t = 0 is the vertex whatever y is.
struct ConePoint {
  double t = 0.0;
  double y = 0.0;

  bool is_vertex() const { return t == 0.0; }
};

namespace detail {

inline void require_cone_point(const ConePoint& p) {
  if (!(p.t >= 0.0) || !std::isfinite(p.t)) throw Error(Errc::BadParams, "cone heights must be finite and nonnegative");
}

// s^2 + t^2 - 2st cosh d, written to keep the ray case exact.
inline double cone_form(double s, double t, double d) {
  const double sh = std::sinh(0.5 * d);
  return (t - s) * (t - s) - 4.0 * s * t * sh * sh;
}

inline double base_distance(const ConePoint& p, const ConePoint& q, const MetricBase& base) {
  if (p.is_vertex() || q.is_vertex()) return 0.0;
  return base.dist(p.y, q.y);
}

}  // namespace detail

inline double cone_d(const ConePoint& p, const ConePoint& q, const MetricBase& base) {
  detail::require_cone_point(p);
  detail::require_cone_point(q);
  const double s = p.t, t = q.t, d = detail::base_distance(p, q, base);
  if (d >= std::numbers::pi) return s + t;
  const double sn = std::sin(0.5 * d);
  return std::sqrt((s - t) * (s - t) + 4.0 * s * t * sn * sn);
}

inline bool cone_le(const ConePoint& p, const ConePoint& q, const MetricBase& base) {
  detail::require_cone_point(p);
  detail::require_cone_point(q);
  if (p.t > q.t) return false;
  if (p.is_vertex()) return true;
  const double form = detail::cone_form(p.t, q.t, detail::base_distance(p, q, base));
  return form >= -kClampTolerance * std::max(1.0, q.t * q.t);
}

inline double cone_tau(const ConePoint& p, const ConePoint& q, const MetricBase& base) {
  if (!cone_le(p, q, base)) return 0.0;
  return std::sqrt(std::max(0.0, detail::cone_form(p.t, q.t, detail::base_distance(p, q, base))));
}

/// Right-hand sides of d(y,y') <= log t - log s and d_c(p,q) <= (t-s) + t d(y,y').
struct UtilityBounds {
  std::optional<double> log_ratio;  ///< needs s > 0
  std::optional<double> cone_metric;  ///< needs d(y,y') <= pi
};

inline UtilityBounds cone_utility_bounds(const ConePoint& p, const ConePoint& q, const MetricBase& base) {
  if (!cone_le(p, q, base)) throw Error(Errc::PreconditionViolation, "utility bounds need p <= q");
  UtilityBounds b;
  const double d = detail::base_distance(p, q, base);
  if (p.t > 0.0) b.log_ratio = std::log(q.t) - std::log(p.t);
  if (d <= std::numbers::pi) b.cone_metric = (q.t - p.t) + q.t * d;
  if (!b.log_ratio && !b.cone_metric) throw Error(Errc::PreconditionViolation, "neither bound applies");
  return b;
}

namespace detail {

inline Point embed(const ConePoint& p) { return embed_cone_over_line(p.t, p.y); }

inline ConePoint unembed(const Point& e) {
  const double t = std::sqrt(std::max(0.0, (e[0] - e[1]) * (e[0] + e[1])));
  if (t == 0.0) return {0.0, 0.0};
  return {t, std::atanh(std::clamp(e[1] / e[0], -1.0, 1.0))};
}

inline TimelikeCurve map_curve(const TimelikeCurve& c, std::function<Point(const Point&)> f) {
  TimelikeCurve::Prolong p = [c, f](double before, double after) -> std::optional<TimelikeCurve> {
    auto ext = c.prolonged(before, after);
    if (!ext) return std::nullopt;
    return map_curve(*ext, f);
  };
  return TimelikeCurve(c.orientation(), c.length(), [c, f](double t) { return f(c.eval(t)); }, c.realizer(),
                       std::move(p));
}

}  // namespace detail

/// The cone as a Space.  Points are {t, y}.  Geodesics: straight lines of
/// the flat embedding over a line, over an unwrapped lift for a circle, and
/// rays from the vertex over a table.
class ConeSpace : public Space {
 public:
  explicit ConeSpace(MetricBase base, double t_lo = 0.5, double t_hi = 1.5)
      : base_(std::move(base)), t_lo_(t_lo), t_hi_(t_hi) {
    if (!(0.0 < t_lo && t_lo < t_hi) || !std::isfinite(t_hi)) throw Error(Errc::BadParams, "need 0 < t_lo < t_hi");
  }

  const MetricBase& base() const { return base_; }

  std::string name() const override { return "cone_over(" + base_.name() + ")"; }

  Capabilities capabilities() const override {
    Capabilities c;
    c.has_geodesics = true;
    c.strictly_timelike_geodesic = base_.kind() == MetricBase::Kind::line;
    c.uniquely_geodesic = base_.kind() != MetricBase::Kind::table;
    c.has_sampler = true;
    return c;
  }

  double tau(const Point& p, const Point& q) const override { return cone_tau(point(p), point(q), base_); }
  bool le(const Point& p, const Point& q) const override { return cone_le(point(p), point(q), base_); }
  double dist(const Point& p, const Point& q) const override { return cone_d(point(p), point(q), base_); }
  bool contains(const Point& p) const override {
    try {
      point(p);
      return true;
    } catch (const Error&) {
      return false;
    }
  }

  std::optional<double> declared_lower_bound() const override {
    if (base_.kind() == MetricBase::Kind::line) return 0.0;
    return std::nullopt;
  }
  std::optional<double> declared_upper_bound() const override { return declared_lower_bound(); }

  TimelikeCurve geodesic_between(const Point& p, const Point& q) const override {
    const ConePoint a = point(p), b = point(q);
    if (base_.kind() == MetricBase::Kind::table) {
      if (!a.is_vertex() && base_.dist(a.y, b.y) != 0.0)
        throw Error(Errc::NoGeodesicCapability, "table cones only provide rays");
      return ray(a.t, b.t, b.y);
    }
    // Lift q next to p so that the base distance is the unwrapped difference.
    double y = b.y;
    if (base_.kind() == MetricBase::Kind::circle && !a.is_vertex()) {
      const double d = base_.dist(a.y, b.y);
      const double up = std::fmod(b.y - a.y + 2.0 * base_.circumference(), base_.circumference());
      y = up <= 0.5 * base_.circumference() ? a.y + d : a.y - d;
    }
    const ConePoint lifted{b.t, a.is_vertex() ? b.y : y};
    const ConePoint from{a.t, a.is_vertex() ? lifted.y : a.y};
    auto inside = [](const Point& u, const Point& v) {
      return u[0] >= std::abs(u[1]) && v[0] >= std::abs(v[1]);
    };
    const auto flat = straight_curve(detail::embed(from), detail::embed(lifted), inside);
    const auto kind = base_.kind();
    const double circ = base_.circumference();
    return detail::map_curve(flat, [kind, circ](const Point& e) {
      ConePoint c = detail::unembed(e);
      if (kind == MetricBase::Kind::circle) c.y = std::fmod(std::fmod(c.y, circ) + circ, circ);
      return Point{c.t, c.y};
    });
  }

  double neighborhood_scale() const override { return t_hi_ - t_lo_; }

  Point sample_point(Rng& rng) const override { return {rng.uniform(t_lo_, t_hi_), base_.sample(rng)}; }

  std::optional<Triangle> sample_triangle(Rng& rng) const override {
    if (base_.kind() == MetricBase::Kind::table) return std::nullopt;
    const double min_sep = 0.05 * neighborhood_scale();
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::array<Point, 3> p{sample_point(rng), sample_point(rng), sample_point(rng)};
      std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
      if (tau(p[0], p[1]) < min_sep || tau(p[1], p[2]) < min_sep) continue;
      return Triangle{p[0], p[1], p[2]};
    }
    return std::nullopt;
  }

 private:
  ConePoint point(const Point& p) const {
    if (p.size() != 2) throw Error(Errc::DimensionMismatch, "cone points are {t, y}");
    ConePoint c{p[0], p[1]};
    detail::require_cone_point(c);
    if (base_.kind() == MetricBase::Kind::table && !c.is_vertex()) base_.index(c.y);
    return c;
  }

  static TimelikeCurve ray(double s, double t, double y) {
    TimelikeCurve::Prolong prolong = [s, t, y](double before, double after) -> std::optional<TimelikeCurve> {
      if (before > s) return std::nullopt;
      return ray(s - before, t + after, y);
    };
    return TimelikeCurve(TimeOrientation::future, t - s, [s, y](double u) { return Point{s + u, y}; }, true,
                         std::move(prolong));
  }

  MetricBase base_;
  double t_lo_, t_hi_;
};

/// Limit comparison angle at the vertex between the rays over y1 and y2,
/// from K = 0 comparison angles of shrinking vertex triangles inside the
/// causal domain.
inline double vertex_direction_angle(double y1, double y2, const MetricBase& base) {
  const ConeSpace cone(base);
  const double d = base.dist(y1, y2);
  const Point o{0.0, y1};
  double value = 0.0;
  for (int j = 1; j <= 12; ++j) {
    const double t = std::ldexp(1.0, -j);
    const double s = 0.5 * t * std::exp(-d);  // strictly inside s/t <= e^-d
    value = comparison_angle(cone, o, {s, y1}, {t, y2}, 0.0).omega;
  }
  return value;
}

/// Sampled properties of the cone over a base: embedding agreement (line
/// base only), causal implication, the utility bounds and the d_c length
/// bound for causal polylines from the vertex.
inline CheckReport cone_audit(const MetricBase& base, std::uint64_t seed, std::size_t samples) {
  CheckReport r;
  r.space = "cone_over(" + base.name() + ")";
  r.variant = "cone";
  r.seed = seed;
  r.tolerance = 1e-12;
  auto flag = [&](Witness w, double lhs, double rhs) {
    ++r.violation_count;
    keep_worst(r.violations, Violation{std::move(w), lhs, rhs, lhs - rhs}, 100);
  };
  auto named = [](Witness w, const char* kind) {
    w.kind = kind;
    return w;
  };
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    ++r.samples;
    const ConePoint p{rng.uniform(0.0, 2.0), base.sample(rng)}, q{rng.uniform(0.0, 2.0), base.sample(rng)};
    Witness w;
    w.add("s", p.t).add("y", p.y).add("t", q.t).add("y2", q.y);
    const double tpq = cone_tau(p, q, base);
    if (tpq > 0.0 && !cone_le(p, q, base)) flag(named(w, "chron-not-causal"), tpq, 0.0);
    if (base.kind() == MetricBase::Kind::line) {
      const double flat = tau_flat(embed_cone_over_line(p.t, p.y), embed_cone_over_line(q.t, q.y));
      if (std::abs(flat - tpq) > 1e-12 * std::max(1.0, q.t)) flag(named(w, "embedding"), std::abs(flat - tpq), 0.0);
    }
    if (cone_le(p, q, base) && p.t > 0.0) {
      const auto b = cone_utility_bounds(p, q, base);
      const double d = base.dist(p.y, q.y);
      if (b.log_ratio && d > *b.log_ratio + 1e-12) flag(named(w, "log-ratio"), d, *b.log_ratio);
      if (b.cone_metric && cone_d(p, q, base) > *b.cone_metric + 1e-12)
        flag(named(w, "cone-metric"), cone_d(p, q, base), *b.cone_metric);
    }
  }
  // Random causal polylines from the vertex: each step moves the base point
  // by at most log(t_next / t), which keeps consecutive vertices causal.
  for (std::size_t i = 0; i < samples; ++i) {
    ++r.samples;
    ConePoint cur{rng.uniform(0.05, 0.5), base.sample(rng)};
    double length = cur.t;
    const std::size_t steps = 1 + rng.index(8);
    for (std::size_t k = 0; k < steps; ++k) {
      const ConePoint next{cur.t * rng.uniform(1.01, 1.5), 0.0};
      const double reach = 0.999 * std::log(next.t / cur.t);
      ConePoint cand = next;
      if (base.kind() == MetricBase::Kind::table) {
        cand.y = cur.y;
        for (int tries = 0; tries < 8; ++tries) {
          const double y = base.sample(rng);
          if (base.dist(cur.y, y) <= reach) {
            cand.y = y;
            break;
          }
        }
      } else {
        cand.y = cur.y + rng.uniform(-reach, reach);
        if (base.kind() == MetricBase::Kind::circle) cand.y = std::fmod(cand.y + base.circumference(), base.circumference());
      }
      if (!cone_le(cur, cand, base)) {
        Witness w;
        w.kind = "polyline-step";
        w.add("t", cur.t).add("t2", cand.t);
        flag(std::move(w), 1.0, 0.0);
      }
      length += cone_d(cur, cand, base);
      cur = cand;
    }
    if (length > 4.0 * cur.t) {
      Witness w;
      w.kind = "polyline-length";
      w.add("t", cur.t).add("steps", static_cast<double>(steps));
      flag(std::move(w), length, 4.0 * cur.t);
    }
  }
  // No point lies chronologically before the vertex.
  for (std::size_t i = 0; i < samples; ++i) {
    ++r.samples;
    const ConePoint p{rng.uniform(0.0, 2.0), base.sample(rng)};
    if (cone_tau(p, {0.0, 0.0}, base) > 0.0) {
      Witness w;
      w.kind = "vertex-isolation";
      w.add("t", p.t).add("y", p.y);
      flag(std::move(w), cone_tau(p, {0.0, 0.0}, base), 0.0);
    }
  }
  r.admissible = r.samples;
  r.verdict = decide(r, 0);
  return r;
}

}  // namespace lorentz
