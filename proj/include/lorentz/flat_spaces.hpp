#pragma once

// Built-in spaces carved out of Minkowski space: a causal diamond, the causal
// funnel, closed half-Minkowski and the exterior of a tilted double cone.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/error.hpp"
#include "lorentz/flat_chart.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

/// Whether the straight segment between two points stays in a region.
using SegmentTest = std::function<bool(const Point&, const Point&)>;

namespace detail {

inline Point affine(const Point& p, const Point& q, double f) {
  Point r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + f * (q[i] - p[i]);
  return r;
}

}  // namespace detail

/// Polyline through the given vertices, each piece a timelike straight
/// segment, parametrised by tau-arclength.  Prolongation extends the first
/// and last piece as long as `inside` accepts the extended pieces.
inline TimelikeCurve polyline_curve(std::vector<Point> vertices, SegmentTest inside) {
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    const double len = tau_flat(vertices[i - 1], vertices[i]);
    if (!(len > 0.0)) throw Error(Errc::NotChronological, "polyline pieces must be timelike");
    cumulative.push_back(cumulative.back() + len);
  }
  const double total = cumulative.back();
  auto eval = [vertices, cumulative](double t) -> Point {
    if (t >= cumulative.back()) return vertices.back();
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - cumulative.begin()) - 1;
    const double len = cumulative[i + 1] - cumulative[i];
    return detail::affine(vertices[i], vertices[i + 1], (t - cumulative[i]) / len);
  };
  auto prolong = [vertices, cumulative, inside](double before, double after) -> std::optional<TimelikeCurve> {
    std::vector<Point> v = vertices;
    const std::size_t n = v.size();
    const double first = cumulative[1], last = cumulative[n - 1] - cumulative[n - 2];
    const Point head = detail::affine(vertices[0], vertices[1], -before / first);
    const Point tail = detail::affine(vertices[n - 2], vertices[n - 1], 1.0 + after / last);
    if (before > 0.0 && !inside(head, vertices[1])) return std::nullopt;
    if (after > 0.0 && !inside(vertices[n - 2], tail)) return std::nullopt;
    if (before > 0.0) v.front() = head;
    if (after > 0.0) v.back() = tail;
    return polyline_curve(std::move(v), inside);
  };
  return TimelikeCurve(TimeOrientation::future, total, std::move(eval), true, std::move(prolong));
}

inline TimelikeCurve straight_curve(const Point& p, const Point& q, SegmentTest inside) {
  return polyline_curve({p, q}, std::move(inside));
}

/// Common part of the flat built-ins: Minkowski tau, causal relation,
/// Euclidean background metric and straight geodesics.
class FlatRegion : public Space {
 public:
  explicit FlatRegion(std::size_t dim) : dim_(dim) {}

  std::size_t dimension() const { return dim_; }

  double tau(const Point& p, const Point& q) const override { return tau_flat(p, q); }
  bool le(const Point& p, const Point& q) const override { return le_flat(p, q); }
  double dist(const Point& p, const Point& q) const override { return euclidean_distance(p, q); }

  Capabilities capabilities() const override {
    Capabilities c;
    c.has_geodesics = true;
    c.strictly_timelike_geodesic = true;
    c.uniquely_geodesic = true;
    c.has_sampler = true;
    return c;
  }

  /// Segment test capturing the region by value.
  virtual SegmentTest segment_test() const = 0;

  TimelikeCurve geodesic_between(const Point& p, const Point& q) const override {
    auto inside = segment_test();
    if (!inside(p, q)) throw Error(Errc::NoGeodesicCapability, "straight segment leaves " + name());
    return straight_curve(p, q, std::move(inside));
  }

  std::optional<Triangle> sample_triangle(Rng& rng) const override {
    const double min_sep = 0.05 * neighborhood_scale();
    auto inside = segment_test();
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::array<Point, 3> p{sample_point(rng), sample_point(rng), sample_point(rng)};
      std::sort(p.begin(), p.end(), [](const Point& a, const Point& b) { return a[0] < b[0]; });
      if (tau(p[0], p[1]) < min_sep || tau(p[1], p[2]) < min_sep) continue;
      if (!inside(p[0], p[1]) || !inside(p[1], p[2]) || !inside(p[0], p[2])) continue;
      return Triangle{p[0], p[1], p[2]};
    }
    return std::nullopt;
  }

  std::optional<Fan> fan_through(const Point& x, double base_rapidity, double back,
                                 const std::vector<double>& rapidities, double reach) const override {
    if (dim_ != 2 || x.size() != 2) return std::nullopt;
    auto inside = segment_test();
    Fan fan;
    fan.base = {x[0] - back * std::cosh(base_rapidity), x[1] - back * std::sinh(base_rapidity)};
    if (!contains(fan.base) || !inside(fan.base, x)) return std::nullopt;
    for (double r : rapidities) {
      Point e{x[0] + reach * std::cosh(r), x[1] + reach * std::sinh(r)};
      if (!contains(e) || !inside(x, e)) return std::nullopt;
      fan.ends.push_back(std::move(e));
    }
    return fan;
  }

 protected:
  void require_dimension(const Point& p) const {
    if (p.size() != dim_) throw Error(Errc::DimensionMismatch, name() + " expects points of dimension " + std::to_string(dim_));
  }

  std::size_t dim_;
};

/// Minkowski space sampled in the causal diamond |x| + |t| < radius.
class MinkowskiDiamond : public FlatRegion {
 public:
  MinkowskiDiamond(std::size_t dim, double radius) : FlatRegion(dim), radius_(radius) {
    if (dim < 2) throw Error(Errc::BadParams, "dimension must be at least 2");
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(Errc::BadParams, "radius must be positive");
  }

  std::string name() const override {
    return "minkowski_diamond(" + std::to_string(dim_) + "," + format_number(radius_) + ")";
  }
  SegmentTest segment_test() const override {
    return [](const Point&, const Point&) { return true; };
  }
  std::optional<double> declared_lower_bound() const override { return 0.0; }
  std::optional<double> declared_upper_bound() const override { return 0.0; }
  double neighborhood_scale() const override { return radius_; }

  Point sample_point(Rng& rng) const override {
    Point p(dim_);
    for (;;) {
      for (auto& c : p) c = rng.uniform(-radius_, radius_);
      double r = 0.0;
      for (std::size_t i = 1; i < dim_; ++i) r = std::hypot(r, p[i]);
      if (r + std::abs(p[0]) < radius_) return p;
    }
  }

  static std::string format_number(double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  }

 private:
  double radius_;
};

/// Closed half plane x >= 0 of two-dimensional Minkowski space.
class HalfMinkowski : public FlatRegion {
 public:
  HalfMinkowski() : FlatRegion(2) {}

  std::string name() const override { return "half_minkowski"; }
  bool contains(const Point& p) const override { return p.size() == 2 && p[1] >= 0.0; }
  SegmentTest segment_test() const override {
    return [](const Point& a, const Point& b) { return a[1] >= 0.0 && b[1] >= 0.0; };
  }
  std::optional<double> declared_lower_bound() const override { return 0.0; }
  std::optional<double> declared_upper_bound() const override { return 0.0; }

  // Diamond of radius 1 around (0, 0.5), cut at the boundary.
  Point sample_point(Rng& rng) const override {
    for (;;) {
      Point p{rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 1.5)};
      if (std::abs(p[0]) + std::abs(p[1] - 0.5) < 1.0 && p[1] >= 0.0) return p;
    }
  }
};

/// The stem beta(t) = (t, 0), t <= 0, glued to the causal future of the
/// origin.  Causal curves from the stem into the cone pass the vertex, so the
/// time separation is the intrinsic one.
class CausalFunnel : public FlatRegion {
 public:
  CausalFunnel() : FlatRegion(2) {}

  std::string name() const override { return "causal_funnel"; }

  static bool in_cone(const Point& p) { return p[0] >= std::abs(p[1]); }
  static bool on_stem(const Point& p) { return p[1] == 0.0 && p[0] < 0.0; }

  bool contains(const Point& p) const override { return p.size() == 2 && (in_cone(p) || on_stem(p)); }

  double tau(const Point& p, const Point& q) const override {
    require_dimension(p);
    require_dimension(q);
    if (on_stem(p) && !on_stem(q)) return -p[0] + tau_flat({0.0, 0.0}, q);
    if (!on_stem(p) && on_stem(q)) return 0.0;
    return tau_flat(p, q);
  }

  bool le(const Point& p, const Point& q) const override {
    require_dimension(p);
    require_dimension(q);
    if (on_stem(p) && !on_stem(q)) return true;
    if (!on_stem(p) && on_stem(q)) return false;
    return le_flat(p, q);
  }

  Capabilities capabilities() const override {
    auto c = FlatRegion::capabilities();
    c.uniquely_geodesic = false;
    return c;
  }

  SegmentTest segment_test() const override {
    return [](const Point& a, const Point& b) {
      if (in_cone(a) && in_cone(b)) return true;
      return a[1] == 0.0 && b[1] == 0.0;
    };
  }

  TimelikeCurve geodesic_between(const Point& p, const Point& q) const override {
    if (on_stem(p) && !on_stem(q) && q[1] != 0.0) {
      if (!(tau_flat({0.0, 0.0}, q) > 0.0))
        throw Error(Errc::NoGeodesicCapability, "no timelike realizer to the null boundary of the cone");
      return polyline_curve({p, {0.0, 0.0}, q}, segment_test());
    }
    return straight_curve(p, q, segment_test());
  }

  Point sample_point(Rng& rng) const override {
    if (rng.uniform() < 0.3) return {-rng.uniform(0.01, 1.0), 0.0};
    const double t = rng.uniform(0.05, 1.5);
    return {t, 0.9 * t * rng.uniform(-1.0, 1.0)};
  }

  // Triangles spanning the vertex: p1 on the stem, p2 << p3 in the cone.
  std::optional<Triangle> sample_triangle(Rng& rng) const override {
    for (int attempt = 0; attempt < 1000; ++attempt) {
      const Point p1{-rng.uniform(0.3, 1.0), 0.0};
      const double t2 = rng.uniform(0.1, 0.8);
      const Point p2{t2, 0.9 * t2 * rng.uniform(-1.0, 1.0)};
      const double t3 = rng.uniform(t2 + 0.1, 1.6);
      const Point p3{t3, 0.9 * t3 * rng.uniform(-1.0, 1.0)};
      if (tau_flat({0.0, 0.0}, p2) < 0.05 || tau_flat(p2, p3) < 0.05) continue;
      return Triangle{p1, p2, p3};
    }
    return std::nullopt;
  }
};

/// {(t,x,y) : x^2 >= y t} with the time separation restricted from
/// three-dimensional Minkowski space.  Geodesics exist where the straight
/// segment stays in the set.
class TiltedConeExterior : public FlatRegion {
 public:
  TiltedConeExterior() : FlatRegion(3) {}

  std::string name() const override { return "tilted_cone_exterior"; }

  static bool member(const Point& p) { return p[1] * p[1] >= p[2] * p[0]; }
  bool contains(const Point& p) const override { return p.size() == 3 && member(p); }

  Capabilities capabilities() const override {
    auto c = FlatRegion::capabilities();
    c.uniquely_geodesic = false;
    return c;
  }

  SegmentTest segment_test() const override {
    return [](const Point& a, const Point& b) {
      // x(l)^2 - y(l) t(l) is quadratic in l; check its minimum on [0, 1].
      const double dt = b[0] - a[0], dx = b[1] - a[1], dy = b[2] - a[2];
      const double A = dx * dx - dy * dt;
      const double B = 2.0 * a[1] * dx - (a[2] * dt + a[0] * dy);
      const double C = a[1] * a[1] - a[2] * a[0];
      const double slack = -1e-12;
      const auto f = [&](double l) { return (A * l + B) * l + C; };
      if (f(0.0) < slack || f(1.0) < slack) return false;
      if (A > 0.0) {
        const double l = -B / (2.0 * A);
        if (l > 0.0 && l < 1.0 && f(l) < slack) return false;
      }
      return true;
    };
  }

  Point sample_point(Rng& rng) const override {
    for (;;) {
      Point p{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      if (std::abs(p[0]) + std::hypot(p[1], p[2]) < 1.0 && member(p)) return p;
    }
  }
};

}  // namespace lorentz
