#pragma once

// Comparison triangles in the model plane of curvature K, points on their
// sides and comparison time separations between such points.

#include <algorithm>
#include <cmath>
#include <optional>

#include "lorentz/error.hpp"
#include "lorentz/loc_kernel.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

struct ComparisonTriangle {
  CurvatureParam k;
  double a12 = 0.0;
  double a23 = 0.0;
  double a13 = 0.0;
  SignedAngle at1{0.0, -1};
  SignedAngle at2{0.0, 1};
  SignedAngle at3{0.0, -1};
};

enum class Side { s12, s23, s13 };

/// Point on a named side, offset measured from the side's past vertex.
struct SidePoint {
  Side side = Side::s12;
  double offset = 0.0;
};

struct ComparisonSeparation {
  double value = 0.0;
  Order orientation = Order::none;
};

inline double side_length(const ComparisonTriangle& tri, Side side) {
  switch (side) {
    case Side::s12: return tri.a12;
    case Side::s23: return tri.a23;
    default: return tri.a13;
  }
}

inline ComparisonTriangle make_comparison_triangle(const CurvatureParam& K, double a12, double a23, double a13) {
  for (double x : {a12, a23, a13})
    if (!(x >= 0.0) || !std::isfinite(x)) throw Error(Errc::ShapeViolation, "sides must be finite and nonnegative");
  if (a12 + a23 > a13 + kClampTolerance * std::max(1.0, a13))
    throw Error(Errc::ShapeViolation, "reverse triangle inequality fails");
  if (!(a13 < K.diameter)) throw Error(Errc::SizeBoundViolation, "longest side reaches the diameter");

  ComparisonTriangle tri{K, a12, a23, a13};
  // A vertex with a null adjacent side keeps angle 0.
  if (a12 > 0 && a13 > 0) tri.at1 = angle_from_sides(K, {a12, a13, a23}, -1);
  if (a12 > 0 && a23 > 0) tri.at2 = angle_from_sides(K, {a12, a23, a13}, 1);
  if (a23 > 0 && a13 > 0) tri.at3 = angle_from_sides(K, {a23, a13, a12}, -1);
  return tri;
}

inline SidePoint corresponding_side_point(const ComparisonTriangle& tri, Side side, double offset) {
  const double len = side_length(tri, side);
  if (!(offset >= 0.0 && offset <= len)) throw Error(Errc::OffsetOutOfRange, "offset outside the side");
  return {side, offset};
}

namespace detail {

// Vertex index 1..3 if the side point is a vertex, else 0.
inline int vertex_of(const ComparisonTriangle& tri, const SidePoint& q) {
  const double len = side_length(tri, q.side);
  if (q.offset == 0.0) return q.side == Side::s23 ? 2 : 1;
  if (q.offset == len) return q.side == Side::s12 ? 2 : 3;
  return 0;
}

inline bool side_has_vertex(Side side, int v) {
  switch (side) {
    case Side::s12: return v == 1 || v == 2;
    case Side::s23: return v == 2 || v == 3;
    default: return v == 1 || v == 3;
  }
}

// Offset of vertex v along a side containing it.
inline double vertex_offset(const ComparisonTriangle& tri, Side side, int v) {
  const bool past = (side == Side::s23) ? v == 2 : v == 1;
  return past ? 0.0 : side_length(tri, side);
}

inline ComparisonSeparation along_side(double o1, double o2) {
  if (o2 > o1) return {o2 - o1, Order::first_precedes_second};
  if (o1 > o2) return {o1 - o2, Order::second_precedes_first};
  return {0.0, Order::none};
}

// Vertex v (first) against an interior point q (second) of another side.
inline ComparisonSeparation vertex_to_side(const ComparisonTriangle& tri, int v, const SidePoint& q) {
  if (side_has_vertex(q.side, v)) return along_side(vertex_offset(tri, q.side, v), q.offset);
  OneSided r;
  if (v == 1) r = one_sided_x(tri.k, 1, tri.a12, q.offset, tri.a23 - q.offset, tri.a13);
  else if (v == 3) r = one_sided_x(tri.k, 2, q.offset, tri.a12 - q.offset, tri.a23, tri.a13);
  else r = one_sided_x(tri.k, 3, tri.a12, tri.a23, q.offset, tri.a13 - q.offset);
  if (!r.causal) return {0.0, Order::none};
  return {r.x, r.x > 0.0 ? r.order : Order::none};
}

// Hinge at a shared vertex with legs l1 (to the first point) and l2.
inline ComparisonSeparation across_vertex(const CurvatureParam& K, const SignedAngle& angle, double l1, double l2,
                                          Order if_causal) {
  const HingeSide h = side_from_hinge(K, {l1, l2, angle});
  if (!h.causal || h.value == 0.0) return {0.0, Order::none};
  return {h.value, if_causal};
}

}  // namespace detail

/// tau-bar between the comparison points of q1 and q2, with their time order.
inline ComparisonSeparation comparison_tau(const ComparisonTriangle& tri, const SidePoint& q1, const SidePoint& q2) {
  corresponding_side_point(tri, q1.side, q1.offset);
  corresponding_side_point(tri, q2.side, q2.offset);
  const int v1 = detail::vertex_of(tri, q1);
  const int v2 = detail::vertex_of(tri, q2);

  if (v1 && v2) {
    if (v1 == v2) return {0.0, Order::none};
    const int lo = std::min(v1, v2), hi = std::max(v1, v2);
    const double len = lo == 1 ? (hi == 2 ? tri.a12 : tri.a13) : tri.a23;
    return {len, v1 < v2 ? Order::first_precedes_second : Order::second_precedes_first};
  }
  if (v1) return detail::vertex_to_side(tri, v1, q2);
  if (v2) {
    auto r = detail::vertex_to_side(tri, v2, q1);
    return {r.value, reversed(r.orientation)};
  }
  if (q1.side == q2.side) return detail::along_side(q1.offset, q2.offset);

  // Two interior points on different sides meet at the shared vertex.
  const bool swap = (q1.side == Side::s13 && q2.side != Side::s13) || (q1.side == Side::s23 && q2.side == Side::s12);
  const SidePoint& a = swap ? q2 : q1;  // sides ordered 12 < 23 < 13
  const SidePoint& b = swap ? q1 : q2;
  ComparisonSeparation r;
  if (a.side == Side::s12 && b.side == Side::s13) {
    // Shared past vertex p1: the nearer point comes first.
    const Order o = a.offset < b.offset ? Order::first_precedes_second : Order::second_precedes_first;
    r = detail::across_vertex(tri.k, tri.at1, a.offset, b.offset, o);
  } else if (a.side == Side::s12 && b.side == Side::s23) {
    r = detail::across_vertex(tri.k, tri.at2, tri.a12 - a.offset, b.offset, Order::first_precedes_second);
  } else {
    // Sides 23 and 13 share the future vertex p3: the farther point comes first.
    const double la = tri.a23 - a.offset, lb = tri.a13 - b.offset;
    const Order o = la > lb ? Order::first_precedes_second : Order::second_precedes_first;
    r = detail::across_vertex(tri.k, tri.at3, la, lb, o);
  }
  if (swap) r.orientation = reversed(r.orientation);
  return r;
}

/// Sides (x-y, x-z, y-z) of the triple and the sign of the angle at x:
/// -1 when x is a past or future endpoint, +1 when it lies between.
struct ComparisonSides {
  TriangleShape shape;
  int sigma = -1;
};

inline ComparisonSides comparison_sides(const Space& space, const Point& x, const Point& y, const Point& z) {
  const bool xy = space.le(x, y), yx = space.le(y, x);
  const bool xz = space.le(x, z), zx = space.le(z, x);
  const bool yz = space.le(y, z), zy = space.le(z, y);
  if (!(xy || yx) || !(xz || zx) || !(yz || zy))
    throw Error(Errc::NotCausallyRelated, "comparison angle needs pairwise causally related points");
  const double a = std::max(space.tau(x, y), space.tau(y, x));
  const double b = std::max(space.tau(x, z), space.tau(z, x));
  const double c = std::max(space.tau(y, z), space.tau(z, y));
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw Error(Errc::InfiniteTau, "time separation is infinite");
  const bool endpoint = (xy && xz) || (yx && zx);
  return {{a, b, c}, endpoint ? -1 : 1};
}

/// Signed K-comparison angle at x of the triple (x, y, z).
inline SignedAngle comparison_angle(const Space& space, const Point& x, const Point& y, const Point& z,
                                    const CurvatureParam& K) {
  const auto sides = comparison_sides(space, x, y, z);
  return angle_from_sides(K, sides.shape, sides.sigma);
}

struct StraighteningResult {
  bool consistent = false;
  int lhs_order = 0;  ///< sign of angle_pmq - angle_qmr
  int rhs_order = 0;  ///< sign of tau(m',q') - tau(m,q)
  double tau_pq = 0.0;
  double tau_qr = 0.0;
  double tau_mq_straightened = 0.0;
};

/// Configuration p << m << q <= r given by four separations and the two
/// angles at m; tau(p,q) follows from the hinge at m.  Delta' has sides (tau(p,q), tau(q,r), tau(p,m)+tau(m,r))
/// with m' on its longest side at offset tau(p,m).  The angle toward p is the
/// larger exactly when tau(m,q) < tau(m',q').
inline StraighteningResult straightening_check(const CurvatureParam& K, double t_pm, double t_mq, double t_qr,
                                               double t_mr, double angle_pmq, double angle_qmr,
                                               double tie_tolerance = 1e-9) {
  for (double x : {t_pm, t_mq, t_mr})
    if (!(x > 0.0) || !std::isfinite(x)) throw Error(Errc::PreconditionViolation, "separations at m must be positive");
  if (!(t_qr >= 0.0)) throw Error(Errc::PreconditionViolation, "tau(q,r) must be nonnegative");

  if (t_mq + t_qr > t_mr * (1.0 + kClampTolerance)) throw Error(Errc::PreconditionViolation, "q <= r fails");

  StraighteningResult out;
  out.tau_pq = side_from_hinge(K, {t_pm, t_mq, {angle_pmq, 1}}).value;
  out.tau_qr = t_qr;

  const double longest = t_pm + t_mr;
  if (out.tau_pq + out.tau_qr > longest * (1.0 + kClampTolerance))
    throw Error(Errc::PreconditionViolation, "tau(p,q)+tau(q,r) exceeds tau(p,m)+tau(m,r)");
  if (!(out.tau_pq + out.tau_qr < K.diameter)) throw Error(Errc::PreconditionViolation, "size bound fails");

  const auto tri = make_comparison_triangle(K, out.tau_pq, std::min(out.tau_qr, longest - out.tau_pq), longest);
  const auto sep = comparison_tau(tri, {Side::s12, tri.a12}, {Side::s13, t_pm});
  out.tau_mq_straightened = sep.value;

  const auto sign = [tie_tolerance](double d, double scale) {
    if (std::abs(d) <= tie_tolerance * std::max(1.0, scale)) return 0;
    return d > 0 ? 1 : -1;
  };
  out.lhs_order = sign(angle_pmq - angle_qmr, std::max(angle_pmq, angle_qmr));
  out.rhs_order = sign(out.tau_mq_straightened - t_mq, t_mq);
  out.consistent = out.lhs_order == out.rhs_order;
  return out;
}

}  // namespace lorentz
