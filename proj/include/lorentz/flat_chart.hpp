#pragma once

// Coordinate geometry in n-dimensional Minkowski space, signature (-,+,...,+),
// time coordinate first.

#include <cmath>
#include <cstddef>
#include <vector>

#include "lorentz/error.hpp"
#include "lorentz/loc_kernel.hpp"

namespace lorentz {

using MinkPoint = std::vector<double>;

enum class FlatRelation { chronological, null, spacelike_or_reverse };

struct FlatTriangleRealization {
  MinkPoint p1, p2, p3;
};

namespace detail {

inline void require_same_dimension(const MinkPoint& p, const MinkPoint& q) {
  if (p.size() != q.size() || p.empty()) throw Error(Errc::DimensionMismatch, "points differ in dimension");
}

// Time difference and Euclidean length of the spatial difference.
inline void flat_split(const MinkPoint& p, const MinkPoint& q, double& dt, double& dx) {
  require_same_dimension(p, q);
  dt = q[0] - p[0];
  if (p.size() == 2) {
    dx = std::abs(q[1] - p[1]);
    return;
  }
  double acc = 0.0;
  for (std::size_t i = 1; i < p.size(); ++i) acc = std::hypot(acc, q[i] - p[i]);
  dx = acc;
}

inline double flat_slack(double dt) { return kClampTolerance * std::max(1.0, std::abs(dt)); }

}  // namespace detail

/// Minkowski time separation; 0 unless q lies in the chronological future of p.
inline double tau_flat(const MinkPoint& p, const MinkPoint& q) {
  double dt = 0, dx = 0;
  detail::flat_split(p, q, dt, dx);
  if (!(dt > dx)) return 0.0;
  return std::sqrt((dt - dx) * (dt + dx));
}

/// Causal relation with the null boundary counted as related up to 1e-12.
inline bool le_flat(const MinkPoint& p, const MinkPoint& q) {
  double dt = 0, dx = 0;
  detail::flat_split(p, q, dt, dx);
  return dt >= dx - detail::flat_slack(dt);
}

inline FlatRelation causal_rel_flat(const MinkPoint& p, const MinkPoint& q) {
  double dt = 0, dx = 0;
  detail::flat_split(p, q, dt, dx);
  if (dt > dx) return FlatRelation::chronological;
  if (dt >= dx - detail::flat_slack(dt)) return FlatRelation::null;
  return FlatRelation::spacelike_or_reverse;
}

/// Minkowski inner product.
inline double minkowski_dot(const MinkPoint& u, const MinkPoint& v) {
  detail::require_same_dimension(u, v);
  double g = -u[0] * v[0];
  for (std::size_t i = 1; i < u.size(); ++i) g += u[i] * v[i];
  return g;
}

inline double euclidean_distance(const MinkPoint& p, const MinkPoint& q) {
  detail::require_same_dimension(p, q);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc = std::hypot(acc, q[i] - p[i]);
  return acc;
}

/// p1 = (0,0), p3 = (c,0) and p2 to the right of the time axis.
inline FlatTriangleRealization realize_triangle_flat(const TriangleShape& tri) {
  const double a = tri.a, b = tri.b, c = tri.c;
  if (!(a >= 0) || !(b >= 0) || !(c > 0) || !std::isfinite(c))
    throw Error(Errc::ShapeViolation, "sides must be finite, nonnegative, longest side positive");
  if (a + b > c * (1.0 + kClampTolerance)) throw Error(Errc::ShapeViolation, "reverse triangle inequality fails");
  const double t = (c * c + a * a - b * b) / (2.0 * c);
  // (t-a)(t+a) factored so that the degenerate case a+b=c gives exactly 0.
  const double q = std::max(0.0, (c - a - b) * (c - a + b) * (c + a - b) * (c + a + b));
  return {{0.0, 0.0}, {t, std::sqrt(q) / (2.0 * c)}, {c, 0.0}};
}

/// Affine point p + fraction (q - p); exact at both ends.
inline MinkPoint segment_point(const MinkPoint& p, const MinkPoint& q, double fraction) {
  detail::require_same_dimension(p, q);
  if (!(tau_flat(p, q) > 0.0)) throw Error(Errc::NotChronological, "segment endpoints must be chronologically related");
  if (fraction == 1.0) return q;
  MinkPoint r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = p[i] + fraction * (q[i] - p[i]);
  return r;
}

/// Hyperbolic angle between timelike vectors; sigma is the sign of g(u,v).
inline SignedAngle tangent_angle_flat(const MinkPoint& u, const MinkPoint& v) {
  const double uu = -minkowski_dot(u, u);
  const double vv = -minkowski_dot(v, v);
  if (!(uu > 0.0) || !(vv > 0.0)) throw Error(Errc::NotTimelike, "vectors must be timelike");
  const double g = minkowski_dot(u, v);
  const double ratio = std::abs(g) / std::sqrt(uu * vv);
  return {std::acosh(std::max(1.0, ratio)), g < 0.0 ? -1 : 1};
}

inline MinkPoint embed_cone_over_line(double t, double y) {
  if (!(t >= 0.0)) throw Error(Errc::PreconditionViolation, "cone level must be nonnegative");
  if (t == 0.0) return {0.0, 0.0};
  return {t * std::cosh(y), t * std::sinh(y)};
}

/// Unit future vector of the given rapidity in the plane.
inline MinkPoint rapidity_vector(double r) { return {std::cosh(r), std::sinh(r)}; }

}  // namespace lorentz
