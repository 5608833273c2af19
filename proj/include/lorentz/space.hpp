#pragma once

// The Lorentzian pre-length space interface.  Points are opaque coordinate
// vectors interpreted only by the space that produced them.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lorentz/error.hpp"
#include "lorentz/rng.hpp"

namespace lorentz {

using Point = std::vector<double>;

enum class TimeOrientation { future, past };

inline TimeOrientation opposite(TimeOrientation o) {
  return o == TimeOrientation::future ? TimeOrientation::past : TimeOrientation::future;
}

/// A timelike curve on [0, length].  Realizers are parametrised by
/// tau-arclength.  A curve may know how to prolong itself.
class TimelikeCurve {
 public:
  using Eval = std::function<Point(double)>;
  using Prolong = std::function<std::optional<TimelikeCurve>(double before, double after)>;

  TimelikeCurve() = default;
  TimelikeCurve(TimeOrientation orientation, double length, Eval eval, bool realizer, Prolong prolong = {})
      : orientation_(orientation), length_(length), eval_(std::move(eval)), realizer_(realizer),
        prolong_(std::move(prolong)) {}

  TimeOrientation orientation() const { return orientation_; }
  double length() const { return length_; }
  bool realizer() const { return realizer_; }

  Point eval(double t) const {
    const double slack = 1e-12 * std::max(1.0, length_);
    if (!(t >= -slack && t <= length_ + slack)) throw Error(Errc::OutOfDomain, "curve parameter outside [0, L]");
    return eval_(std::clamp(t, 0.0, length_));
  }
  Point operator()(double t) const { return eval(t); }
  Point start() const { return eval(0.0); }
  Point end() const { return eval(length_); }

  /// n+1 strictly increasing parameters from 0 to L.
  std::vector<double> sample_grid(std::size_t n) const {
    std::vector<double> g(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g[i] = length_ * static_cast<double>(i) / static_cast<double>(n);
    g[n] = length_;
    return g;
  }

  /// Extended curve on [0, before + L + after]; old parameter t maps to before + t.
  std::optional<TimelikeCurve> prolonged(double before, double after) const {
    if (before <= 0.0 && after <= 0.0) return *this;
    if (!prolong_) return std::nullopt;
    return prolong_(std::max(0.0, before), std::max(0.0, after));
  }

  /// The same point set run backwards.
  TimelikeCurve reversed() const {
    const TimelikeCurve self = *this;
    Prolong p;
    if (prolong_) {
      p = [self](double before, double after) -> std::optional<TimelikeCurve> {
        auto ext = self.prolonged(after, before);
        if (!ext) return std::nullopt;
        return ext->reversed();
      };
    }
    return TimelikeCurve(opposite(orientation_), length_,
                         [self](double t) { return self.eval(self.length() - t); }, realizer_, std::move(p));
  }

  /// Restriction to [t0, t1], reparametrised from 0.
  TimelikeCurve subcurve(double t0, double t1) const {
    if (!(0.0 <= t0 && t0 <= t1 && t1 <= length_ * (1.0 + 1e-12)))
      throw Error(Errc::OutOfDomain, "subcurve bounds outside [0, L]");
    t1 = std::min(t1, length_);
    const TimelikeCurve self = *this;
    Prolong p;
    if (prolong_) {
      p = [self, t0, t1](double before, double after) -> std::optional<TimelikeCurve> {
        const double need_before = std::max(0.0, before - t0);
        const double need_after = std::max(0.0, t1 + after - self.length());
        auto base = self.prolonged(need_before, need_after);
        if (!base) return std::nullopt;
        return base->subcurve(need_before + t0 - before, need_before + t1 + after);
      };
    }
    return TimelikeCurve(orientation_, t1 - t0, [self, t0](double t) { return self.eval(t0 + t); }, realizer_,
                         std::move(p));
  }

 private:
  TimeOrientation orientation_ = TimeOrientation::future;
  double length_ = 0.0;
  Eval eval_;
  bool realizer_ = false;
  Prolong prolong_;
};

struct Capabilities {
  bool has_geodesics = false;
  bool strictly_timelike_geodesic = false;
  bool uniquely_geodesic = false;
  bool finite = false;
  bool has_sampler = false;
};

/// Rays of a fan through a point: realizers start at base, pass x and end
/// at the listed endpoints.
struct Fan {
  Point base;
  std::vector<Point> ends;
};

struct Triangle {
  Point p1, p2, p3;
};

class Space {
 public:
  virtual ~Space() = default;

  virtual std::string name() const = 0;
  virtual Capabilities capabilities() const = 0;

  virtual double tau(const Point& p, const Point& q) const = 0;
  virtual bool le(const Point& p, const Point& q) const = 0;
  virtual bool chron(const Point& p, const Point& q) const { return tau(p, q) > 0.0; }
  virtual double dist(const Point& p, const Point& q) const = 0;
  virtual bool contains(const Point&) const { return true; }

  /// Future directed realizer from p to q; callers go through lorentz::geodesic.
  virtual TimelikeCurve geodesic_between(const Point&, const Point&) const {
    throw Error(Errc::NoGeodesicCapability, name() + " provides no geodesics");
  }

  /// Curvature bounds the space is known to satisfy on its neighborhood.
  virtual std::optional<double> declared_lower_bound() const { return std::nullopt; }
  virtual std::optional<double> declared_upper_bound() const { return std::nullopt; }

  // Seeded sampling inside the declared comparison neighborhood.
  virtual double neighborhood_scale() const { return 1.0; }
  virtual Point sample_point(Rng&) const {
    throw Error(Errc::NoSamplerCapability, name() + " has no sampler");
  }
  /// A timelike triangle p1 << p2 << p3 or nothing after bounded rejection.
  virtual std::optional<Triangle> sample_triangle(Rng&) const {
    throw Error(Errc::NoSamplerCapability, name() + " has no sampler");
  }
  /// Planar fan through x: base point behind x along base_rapidity and
  /// endpoints at distance reach along the listed rapidities.
  virtual std::optional<Fan> fan_through(const Point&, double /*base_rapidity*/, double /*back*/,
                                         const std::vector<double>& /*rapidities*/, double /*reach*/) const {
    return std::nullopt;
  }
};

using SpaceHandle = std::shared_ptr<const Space>;

/// A timelike direction at a point: a realizer starting there, plus its class
/// once a zero-angle quotient has been formed.
struct Direction {
  TimelikeCurve curve;
  std::optional<std::size_t> class_id;
};

inline TimelikeCurve geodesic(const Space& space, const Point& p, const Point& q) {
  if (!space.capabilities().has_geodesics) throw Error(Errc::NoGeodesicCapability, space.name() + " provides no geodesics");
  if (!space.chron(p, q)) throw Error(Errc::NotChronological, "geodesic endpoints must satisfy p << q");
  return space.geodesic_between(p, q);
}

inline std::pair<double, Direction> log_at(const Space& space, const Point& x, const Point& y) {
  if (!space.capabilities().uniquely_geodesic)
    throw Error(Errc::NotUniquelyGeodesic, space.name() + " is not uniquely geodesic");
  if (space.chron(x, y)) return {space.tau(x, y), Direction{geodesic(space, x, y), std::nullopt}};
  if (space.chron(y, x)) return {space.tau(y, x), Direction{geodesic(space, y, x).reversed(), std::nullopt}};
  throw Error(Errc::NotChronological, "log_at needs x << y or y << x");
}

inline Point exp_at(const Space& space, const Point& x, double r, const Direction& dir) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw Error(Errc::OutOfDomain, "radius must be finite and nonnegative");
  const TimelikeCurve& c = dir.curve;
  if (space.dist(c.start(), x) > 1e-9) throw Error(Errc::PreconditionViolation, "direction is not based at x");
  if (r <= c.length()) return c.eval(r);
  auto ext = c.prolonged(0.0, r - c.length());
  if (!ext) throw Error(Errc::OutOfDomain, "radius beyond the representative and it cannot be prolonged");
  return ext->eval(r);
}

}  // namespace lorentz
