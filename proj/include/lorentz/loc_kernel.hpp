#pragma once

// Trigonometry of the two-dimensional Lorentzian model planes of constant
// curvature K: law of cosines in both directions, the extended law of cosines
// and the one-sided comparison formulas.
//
// All K-cases share one code path.  The model functions below are rescaled by
// s = sqrt|K| so that K = 0 is their limit:
//
//   vers(x) = (1 - cos(s x)) / s^2      (K < 0)
//           = (cosh(s x) - 1) / s^2     (K > 0)
//           = x^2 / 2                   (K = 0)
//   sine(x) = sin(s x) / s, sinh(s x) / s, x
//
// With these, cos(sx) = 1 - s^2 vers(x) and cosh(sx) = 1 + s^2 vers(x), and
// every identity below is polynomial in K.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lorentz/error.hpp"

namespace lorentz {

inline constexpr double kClampTolerance = 1e-12;

struct CurvatureParam {
  double k = 0.0;
  double s = 0.0;
  double diameter = std::numeric_limits<double>::infinity();

  CurvatureParam() = default;
  CurvatureParam(double curvature)  // NOLINT(google-explicit-constructor)
      : k(curvature), s(std::sqrt(std::abs(curvature))) {
    if (!std::isfinite(curvature)) throw Error(Errc::PreconditionViolation, "curvature must be finite");
    if (curvature < 0) diameter = std::numbers::pi / s;
  }
};

/// Side lengths of a causal triangle.  As a triangle: a = p1p2, b = p2p3,
/// c = p1p3.  As input to angle_from_sides: a, b are the legs at the vertex and
/// c is the side opposite to it.
struct TriangleShape {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct SignedAngle {
  double omega = 0.0;
  int sigma = -1;

  double signed_value() const { return sigma * omega; }
};

struct HingeShape {
  double a = 0.0;
  double b = 0.0;
  SignedAngle angle;
};

struct HingeSide {
  double value = 0.0;   ///< opposite side; 0 when the far endpoints are unrelated
  bool causal = true;
  double margin = 0.0;  ///< extended-law slack, positive iff not causally related
};

/// Time order of a pair of points (first, second).
enum class Order { first_precedes_second, second_precedes_first, none };

inline Order reversed(Order o) {
  switch (o) {
    case Order::first_precedes_second: return Order::second_precedes_first;
    case Order::second_precedes_first: return Order::first_precedes_second;
    default: return Order::none;
  }
}

struct OneSided {
  double x = 0.0;
  bool causal = true;
  Order order = Order::none;  ///< relative to (vertex, point on the opposite side)
};

namespace detail {

inline double vers(const CurvatureParam& K, double x) {
  if (K.k == 0.0) return 0.5 * x * x;
  const double h = 0.5 * K.s * x;
  const double v = K.k < 0 ? std::sin(h) : std::sinh(h);
  return 2.0 * v * v / (K.s * K.s);
}

inline double sine(const CurvatureParam& K, double x) {
  if (K.k == 0.0) return x;
  return (K.k < 0 ? std::sin(K.s * x) : std::sinh(K.s * x)) / K.s;
}

// vers(x) - vers(y) in product form.
inline double vers_diff(const CurvatureParam& K, double x, double y) {
  if (K.k == 0.0) return 0.5 * (x - y) * (x + y);
  const double p = 0.5 * K.s * (x + y);
  const double m = 0.5 * K.s * (x - y);
  const double r = K.k < 0 ? std::sin(p) * std::sin(m) : std::sinh(p) * std::sinh(m);
  return 2.0 * r / (K.s * K.s);
}

// The x >= 0 with vers(x) = w.  Saturates at the diameter for K < 0.
inline double vers_inverse(const CurvatureParam& K, double w) {
  if (w <= 0.0) return 0.0;
  if (K.k == 0.0) return std::sqrt(2.0 * w);
  const double W = w * K.s * K.s;
  if (K.k > 0) return 2.0 * std::asinh(std::sqrt(0.5 * W)) / K.s;
  if (W <= 1.0) return 2.0 * std::asin(std::sqrt(0.5 * W)) / K.s;
  if (W < 2.0) return std::acos(1.0 - W) / K.s;
  return K.diameter;
}

inline double cosh_minus_one(double omega) {
  const double h = std::sinh(0.5 * omega);
  return 2.0 * h * h;
}

inline double arcosh_one_plus(double u) { return std::log1p(u + std::sqrt(u * (u + 2.0))); }

inline void require_length(double x, const char* what) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw Error(Errc::PreconditionViolation, std::string(what) + " must be a finite nonnegative length");
}

inline void require_within_diameter(const CurvatureParam& K, double x, const char* what) {
  if (!(x < K.diameter)) throw Error(Errc::SizeBoundViolation, std::string(what) + " reaches the diameter");
}

inline void require_sign(int sigma) {
  if (sigma != 1 && sigma != -1) throw Error(Errc::PreconditionViolation, "sigma must be -1 or +1");
}

// cosh(omega) - 1 at the vertex with legs a, b and opposite side c.
inline double cosh_excess(const CurvatureParam& K, double a, double b, double c, int sigma) {
  const double denom = sine(K, a) * sine(K, b);
  if (sigma > 0) return vers_diff(K, c, a + b) / denom;
  return vers_diff(K, std::abs(b - a), c) / denom;
}

}  // namespace detail

inline double diameter_of(const CurvatureParam& K) { return K.diameter; }

/// Hyperbolic angle at the vertex with legs tri.a, tri.b and opposite side tri.c.
inline SignedAngle angle_from_sides(const CurvatureParam& K, const TriangleShape& tri, int sigma) {
  detail::require_sign(sigma);
  detail::require_length(tri.a, "leg a");
  detail::require_length(tri.b, "leg b");
  detail::require_length(tri.c, "opposite side");
  detail::require_within_diameter(K, std::max({tri.a, tri.b, tri.c}), "longest side");
  if (tri.a == 0.0 || tri.b == 0.0) throw Error(Errc::DegenerateLeg, "a leg adjacent to the vertex is 0");

  double u = detail::cosh_excess(K, tri.a, tri.b, tri.c, sigma);
  if (u < 0.0) {
    if (u < -kClampTolerance) throw Error(Errc::NotRealizable, "cosh argument below 1");
    u = 0.0;
  }
  return {detail::arcosh_one_plus(u), sigma};
}

/// Side opposite the vertex of a hinge.  Unrelated far endpoints (sigma = -1
/// only) are data, not an error.
inline HingeSide side_from_hinge(const CurvatureParam& K, const HingeShape& h) {
  detail::require_sign(h.angle.sigma);
  detail::require_length(h.a, "leg a");
  detail::require_length(h.b, "leg b");
  if (h.a == 0.0 || h.b == 0.0) throw Error(Errc::DegenerateLeg, "hinge legs must be positive");
  if (!(h.angle.omega >= 0.0) || !std::isfinite(h.angle.omega))
    throw Error(Errc::PreconditionViolation, "angle must be finite and nonnegative");
  detail::require_within_diameter(K, std::max(h.a, h.b), "leg");

  const double u = detail::cosh_minus_one(h.angle.omega);
  const double prod = detail::sine(K, h.a) * detail::sine(K, h.b);
  if (h.angle.sigma > 0) {
    detail::require_within_diameter(K, h.a + h.b, "sum of legs");
    const double w = detail::vers(K, h.a + h.b) + u * prod;
    const double c = detail::vers_inverse(K, w);
    if (c >= K.diameter - kClampTolerance) throw Error(Errc::SizeBoundViolation, "solved side reaches the diameter");
    return {c, true, -2.0 * w};
  }
  const double w = detail::vers(K, std::abs(h.a - h.b)) - u * prod;
  if (w < 0.0) return {0.0, false, -2.0 * w};
  return {detail::vers_inverse(K, w), true, -2.0 * w};
}

/// Slack of the extended law of cosines for two future legs a, b at angle omega:
/// positive iff the far endpoints are not causally related, 0 iff null related.
/// For K != 0 the slack is divided by |K|/2 so that it tends to the flat
/// value 2ab cosh(omega) - a^2 - b^2.
inline double extended_loc_margin(const CurvatureParam& K, double a, double b, double omega) {
  detail::require_length(a, "leg a");
  detail::require_length(b, "leg b");
  if (a == 0.0 || b == 0.0) throw Error(Errc::DegenerateLeg, "legs must be positive");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw Error(Errc::PreconditionViolation, "angle must be finite and nonnegative");
  detail::require_within_diameter(K, a + b, "sum of legs");
  const double u = detail::cosh_minus_one(omega);
  return 2.0 * (u * detail::sine(K, a) * detail::sine(K, b) - detail::vers(K, std::abs(a - b)));
}

/// Distance between a vertex and a point q on the opposite side of a triangle.
///   case 1: triangle (a, b+c, d), q on p2p3 with tau(p2,q) = b; x = tau(p1,q)
///   case 2: triangle (a+b, c, d), q on p1p2 with tau(p1,q) = a; x = tau(q,p3)
///   case 3: triangle (a, b, c+d), q on p1p3 with tau(p1,q) = c; x = tau between p2 and q
inline OneSided one_sided_x(const CurvatureParam& K, int which, double a, double b, double c, double d) {
  detail::require_length(a, "a");
  detail::require_length(b, "b");
  detail::require_length(c, "c");
  detail::require_length(d, "d");
  double leg = 0, part = 0, whole = 0, far = 0, longest = 0;
  switch (which) {
    case 1: leg = a, part = b, whole = b + c, far = d, longest = d; break;
    case 2: leg = c, part = b, whole = a + b, far = d, longest = d; break;
    case 3: leg = a, part = c, whole = c + d, far = b, longest = c + d; break;
    default: throw Error(Errc::PreconditionViolation, "case must be 1, 2 or 3");
  }
  const double slack = kClampTolerance * std::max(1.0, longest);
  if (which != 3 && a + b + c > d + slack) throw Error(Errc::PreconditionViolation, "need a+b+c <= d");
  if (which == 3 && a + b > c + d + slack) throw Error(Errc::PreconditionViolation, "need a+b <= c+d");
  detail::require_within_diameter(K, longest, "longest side");

  double w = 0.0;
  if (whole == 0.0) {
    w = detail::vers(K, leg);
  } else {
    const double vl = detail::vers(K, leg);
    const double vp = detail::vers(K, part);
    const double vw = detail::vers(K, whole);
    w = vl + vp + K.k * vl * vp +
        (detail::vers_diff(K, far, whole) - vl - K.k * vl * vw) * detail::sine(K, part) / detail::sine(K, whole);
  }

  OneSided out;
  if (which == 1) out.order = Order::first_precedes_second;
  if (which == 2) out.order = Order::second_precedes_first;
  if (which == 3) out.order = c > a ? Order::first_precedes_second : c < a ? Order::second_precedes_first : Order::none;

  if (w < 0.0) {
    if (w < -slack * std::max(1.0, longest)) return {0.0, false, Order::none};
    w = 0.0;
  }
  out.x = detail::vers_inverse(K, w);
  if (out.x == 0.0 && which == 3) out.order = Order::none;
  return out;
}

/// |x(K)^2 - x(0)^2| for the same one-sided configuration.
inline double flat_limit_gap(const CurvatureParam& K, int which, double a, double b, double c, double d) {
  const double xk = one_sided_x(K, which, a, b, c, d).x;
  const double x0 = one_sided_x(CurvatureParam(0.0), which, a, b, c, d).x;
  return std::abs(xk * xk - x0 * x0);
}

}  // namespace lorentz
