#pragma once

// Upper angles between timelike curves from comparison angles on geometric
// parameter shells, spaces of directions and angle inequality audits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "lorentz/comparison.hpp"
#include "lorentz/cone.hpp"
#include "lorentz/error.hpp"
#include "lorentz/loc_kernel.hpp"
#include "lorentz/report.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

/// Parameter pairs (s0 rho^i, s0 rho^j) grouped in shells n = max(i, j) for
/// n = 0..j_max, keeping |i - j| <= band.  Parameters below min_param are
/// dropped: at that scale the time separations are dominated by rounding.
struct AngleScheme {
  std::optional<double> s0;  ///< default: an eighth of the shorter curve
  double rho = 0.5;
  int j_max = 24;
  int m = 3;
  double tol = 1e-4;
  double ceiling = 50.0;
  int band = 10;
  double min_param = 1e-6;
};

struct ShellSample {
  double s = 0.0;
  double t = 0.0;
  double angle = 0.0;
};

struct AngleEstimate {
  double value = 0.0;  ///< +infinity marks an infinite angle
  int sigma = -1;
  std::vector<ShellSample> shells;
  std::vector<double> shell_values;  ///< supremum per populated shell, coarse to fine
  bool converged = false;
  double spread = 0.0;

  bool infinite() const { return std::isinf(value); }
};

namespace detail {

inline void require_scheme(const AngleScheme& sc) {
  if (!(sc.rho > 0.0 && sc.rho < 1.0) || sc.j_max < 0 || sc.m < 1 || !(sc.tol > 0.0) || sc.band < 0 ||
      (sc.s0 && !(*sc.s0 > 0.0)))
    throw Error(Errc::BadParams, "angle scheme parameters out of range");
}

inline void require_common_start(const Space& space, const TimelikeCurve& a, const TimelikeCurve& b) {
  if (space.dist(a.start(), b.start()) > 1e-9) throw Error(Errc::PreconditionViolation, "curves must start at the same point");
  if (!(a.length() > 0.0) || !(b.length() > 0.0)) throw Error(Errc::PreconditionViolation, "curves must have positive length");
}

}  // namespace detail

/// Upper angle between alpha and beta at their common start, from K
/// comparison angles; the value is the supremum over the last m populated
/// shells and converged means those shells agree within tol.
inline AngleEstimate estimate_upper_angle(const Space& space, const TimelikeCurve& alpha, const TimelikeCurve& beta,
                                          const AngleScheme& scheme = {}, const CurvatureParam& K = 0.0) {
  detail::require_scheme(scheme);
  detail::require_common_start(space, alpha, beta);
  AngleEstimate est;
  est.sigma = alpha.orientation() == beta.orientation() ? -1 : 1;
  const Point x = alpha.start();
  const double s0 = scheme.s0.value_or(std::min(alpha.length(), beta.length()) / 8.0);

  for (int n = 0; n <= scheme.j_max; ++n) {
    double shell = -1.0;
    for (int other = std::max(0, n - scheme.band); other <= n; ++other) {
      const int pairs[2][2] = {{n, other}, {other, n}};
      for (int k = 0; k < (other == n ? 1 : 2); ++k) {
        const double s = s0 * std::pow(scheme.rho, pairs[k][0]);
        const double t = s0 * std::pow(scheme.rho, pairs[k][1]);
        if (s < scheme.min_param || t < scheme.min_param || s > alpha.length() || t > beta.length()) continue;
        const Point y = alpha.eval(s), z = beta.eval(t);
        if (!space.le(y, z) && !space.le(z, y)) continue;
        try {
          const double w = comparison_angle(space, x, y, z, K).omega;
          est.shells.push_back({s, t, w});
          shell = std::max(shell, w);
        } catch (const Error&) {
          // Size bounds or degenerate sides: outside the comparison domain.
        }
      }
    }
    if (shell >= 0.0) est.shell_values.push_back(shell);
  }
  if (est.shell_values.empty()) throw Error(Errc::EmptyDomain, "no parameter pair in the comparison domain");

  const std::size_t count = est.shell_values.size();
  const std::size_t used = std::min<std::size_t>(count, static_cast<std::size_t>(scheme.m));
  const auto last = est.shell_values.end() - static_cast<std::ptrdiff_t>(used);
  const auto [lo, hi] = std::minmax_element(last, est.shell_values.end());
  est.value = *hi;
  est.spread = *hi - *lo;
  est.converged = used == static_cast<std::size_t>(scheme.m) && est.spread < scheme.tol;
  if (est.value > scheme.ceiling && est.shell_values.back() >= est.shell_values.front()) {
    est.value = std::numeric_limits<double>::infinity();
    est.converged = false;
  }
  return est;
}

struct KScanRow {
  double k = 0.0;
  AngleEstimate estimate;
  std::optional<double> deviation;  ///< |value - value at k = 0| when both converged
};

/// Estimates for each k and their deviation from the k = 0 estimate.
inline std::vector<KScanRow> k_independence_report(const Space& space, const TimelikeCurve& alpha,
                                                   const TimelikeCurve& beta, const std::vector<double>& k_list,
                                                   const AngleScheme& scheme = {}) {
  const AngleEstimate flat = estimate_upper_angle(space, alpha, beta, scheme, 0.0);
  std::vector<KScanRow> rows;
  for (double k : k_list) {
    KScanRow row{k, k == 0.0 ? flat : estimate_upper_angle(space, alpha, beta, scheme, k), std::nullopt};
    if (row.estimate.converged && flat.converged) row.deviation = std::abs(row.estimate.value - flat.value);
    rows.push_back(std::move(row));
  }
  return rows;
}

struct DirectionSpace {
  std::vector<TimelikeCurve> representatives;
  std::vector<std::vector<double>> angle_matrix;
  std::vector<std::size_t> classes;  ///< class id per representative, numbered by first appearance
  std::size_t class_count = 0;
  CheckReport metric;  ///< symmetry, zero diagonal and triangle inequality
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Pairwise angles between geodesics at x, the zero-angle quotient and a
/// report on the metric axioms of the angle matrix.
inline DirectionSpace direction_space(const Space& space, const Point& x, const std::vector<TimelikeCurve>& geodesics,
                                      double tol_zero = 1e-3, const AngleScheme& scheme = {}) {
  DirectionSpace ds;
  ds.representatives = geodesics;
  const std::size_t n = geodesics.size();
  for (const auto& g : geodesics) {
    if (space.dist(g.start(), x) > 1e-9) throw Error(Errc::PreconditionViolation, "geodesics must start at x");
    if (g.orientation() != geodesics.front().orientation())
      throw Error(Errc::MixedOrientation, "directions need a common time orientation");
  }
  ds.angle_matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) ds.angle_matrix[i][j] = estimate_upper_angle(space, geodesics[i], geodesics[j], scheme).value;

  auto& r = ds.metric;
  r.space = space.name();
  r.variant = "directions";
  r.tolerance = 1e-6;
  auto flag = [&](const char* kind, std::initializer_list<double> idx, double lhs, double rhs) {
    Witness w;
    w.kind = kind;
    const char* names[] = {"i", "j", "k"};
    std::size_t pos = 0;
    for (double v : idx) w.add(names[pos++], v);
    ++r.violation_count;
    keep_worst(r.violations, Violation{std::move(w), lhs, rhs, lhs - rhs}, 100);
  };
  const auto& A = ds.angle_matrix;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      ++r.samples;
      const double di = static_cast<double>(i), dj = static_cast<double>(j);
      if (std::abs(A[i][j] - A[j][i]) > 2.0 * scheme.tol) flag("symmetry", {di, dj}, A[i][j], A[j][i]);
      for (std::size_t k = 0; k < n; ++k) {
        ++r.samples;
        if (A[i][k] > A[i][j] + A[j][k] + r.tolerance) flag("triangle", {di, dj, static_cast<double>(k)}, A[i][k], A[i][j] + A[j][k]);
      }
    }
  r.admissible = r.samples;
  r.verdict = decide(r, 0);

  detail::DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (A[i][j] < tol_zero && A[j][i] < tol_zero) sets.unite(i, j);
  std::vector<std::size_t> id(n, n);
  ds.classes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (id[root] == n) id[root] = ds.class_count++;
    ds.classes[i] = id[root];
  }
  return ds;
}

/// The quotient as a finite metric base for the cone module, one point per
/// class (its first representative).
inline MetricBase direction_space_base(const DirectionSpace& ds) {
  std::vector<std::size_t> first(ds.class_count, ds.classes.size());
  for (std::size_t i = 0; i < ds.classes.size(); ++i)
    if (first[ds.classes[i]] == ds.classes.size()) first[ds.classes[i]] = i;
  std::vector<std::vector<double>> dist(ds.class_count, std::vector<double>(ds.class_count, 0.0));
  for (std::size_t a = 0; a < ds.class_count; ++a)
    for (std::size_t b = 0; b < ds.class_count; ++b)
      if (a != b) dist[a][b] = ds.angle_matrix[first[a]][first[b]];
  return MetricBase::table(std::move(dist));
}

/// Outcome of the angle triangle inequality audit.  Violations where the
/// inequality is not guaranteed (middle curve opposite to both ends, no lower
/// curvature bound declared) are findings, not failures.
struct AngleTriangleAudit {
  CheckReport report;
  std::vector<Violation> findings;
  std::vector<std::vector<double>> angles;
};

inline AngleTriangleAudit angle_triangle_audit(const Space& space, const Point& x, const std::vector<TimelikeCurve>& curves,
                                               const AngleScheme& scheme = {}, double slack = 1e-6) {
  AngleTriangleAudit out;
  const std::size_t n = curves.size();
  for (const auto& c : curves)
    if (space.dist(c.start(), x) > 1e-9) throw Error(Errc::PreconditionViolation, "curves must start at x");
  out.angles.assign(n, std::vector<double>(n, 0.0));
  std::vector<std::vector<bool>> converged(n, std::vector<bool>(n, true));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto e = estimate_upper_angle(space, curves[i], curves[j], scheme);
      out.angles[i][j] = out.angles[j][i] = e.value;
      converged[i][j] = converged[j][i] = e.converged;
    }

  auto& r = out.report;
  r.space = space.name();
  r.variant = "angle-triangle";
  r.tolerance = slack;
  const bool lower_bound = space.declared_lower_bound().has_value();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        if (a == b || b == c || a == c) continue;
        ++r.samples;
        if (!converged[a][b] || !converged[b][c] || !converged[a][c]) continue;
        ++r.admissible;
        const auto oa = curves[a].orientation(), ob = curves[b].orientation(), oc = curves[c].orientation();
        const bool covered = ob == oa || ob == oc || lower_bound;
        const double lhs = out.angles[a][c], rhs = out.angles[a][b] + out.angles[b][c];
        if (lhs <= rhs + slack) continue;
        Witness w;
        w.kind = covered ? "angle-triangle" : "uncovered-configuration";
        w.add("alpha", static_cast<double>(a)).add("beta", static_cast<double>(b)).add("gamma", static_cast<double>(c));
        Violation v{std::move(w), lhs, rhs, lhs - rhs};
        if (covered) {
          ++r.violation_count;
          keep_worst(r.violations, std::move(v), 100);
        } else {
          out.findings.push_back(std::move(v));
        }
      }
  r.verdict = decide(r, 0);
  return out;
}

/// Angles from beta to both halves of a geodesic through x agree.  The
/// geodesic is split at parameter u; an endpoint is first prolonged.
inline CheckReport angle_along_geodesic_check(const Space& space, const TimelikeCurve& geodesic_curve, double u,
                                              const TimelikeCurve& beta, const AngleScheme& scheme = {},
                                              double tolerance = 1e-4) {
  if (!space.declared_lower_bound())
    throw Error(Errc::PreconditionViolation, space.name() + " declares no lower curvature bound");
  if (!(u >= 0.0 && u <= geodesic_curve.length())) throw Error(Errc::OutOfDomain, "split parameter outside the curve");
  const double pad = 0.5 * geodesic_curve.length();
  TimelikeCurve g = geodesic_curve;
  if (u == 0.0 || u == g.length()) {
    auto ext = g.prolonged(u == 0.0 ? pad : 0.0, u == g.length() ? pad : 0.0);
    if (!ext) throw Error(Errc::NoProlongation, "geodesic cannot be prolonged beyond x");
    if (u == 0.0) u = pad;
    g = *ext;
  }
  const TimelikeCurve forward = g.subcurve(u, g.length());
  const TimelikeCurve backward = g.subcurve(0.0, u).reversed();
  const auto plus = estimate_upper_angle(space, beta, forward, scheme);
  const auto minus = estimate_upper_angle(space, beta, backward, scheme);

  CheckReport r;
  r.space = space.name();
  r.variant = "angle-along-geodesic";
  r.tolerance = tolerance;
  r.samples = 1;
  r.admissible = plus.converged && minus.converged ? 1 : 0;
  const double gap = std::abs(plus.value - minus.value);
  if (r.admissible && !(gap < tolerance)) {
    Witness w;
    w.kind = "along-geodesic";
    w.add("u", u);
    r.violations.push_back({std::move(w), plus.value, minus.value, gap});
    r.violation_count = 1;
  }
  r.max_gap = gap;
  r.verdict = decide(r, 1);
  return r;
}

}  // namespace lorentz
