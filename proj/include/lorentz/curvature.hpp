#pragma once

// Timelike curvature bound checkers: triangle comparison, K-monotonicity,
// hinge comparison, their agreement and the branching detector.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "lorentz/angles.hpp"
#include "lorentz/comparison.hpp"
#include "lorentz/error.hpp"
#include "lorentz/loc_kernel.hpp"
#include "lorentz/report.hpp"
#include "lorentz/rng.hpp"
#include "lorentz/space.hpp"

namespace lorentz {

enum class Bound { below, above };

inline const char* to_string(Bound b) { return b == Bound::below ? "below" : "above"; }

enum class MonotonicityVariant { future, past, general };

inline const char* to_string(MonotonicityVariant v) {
  switch (v) {
    case MonotonicityVariant::future: return "monotonicity-future";
    case MonotonicityVariant::past: return "monotonicity-past";
    default: return "monotonicity-general";
  }
}

struct SamplerConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t points_per_side = 4;  ///< random side points besides the vertices
  std::size_t grid = 6;             ///< monotonicity grid size per curve
  std::size_t min_admissible = 100;
  std::size_t max_violations = 100;  ///< stored in the report, all are counted
  unsigned jobs = 1;
  double tolerance = 1e-9;        ///< on time separations and per-step angles
  double angle_tolerance = 1e-4;  ///< on checks that use estimated angles
  AngleScheme scheme;
};

/// Runs f(0..n-1) on up to `jobs` threads.  Callers write results by index.
inline void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, n))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (unsigned j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n && !failed;) {
        try {
          f(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace detail {

/// What one sample contributes; merged in index order.
struct SampleOutcome {
  bool admissible = false;
  std::vector<Violation> violations;
  std::optional<Violation> worst;  ///< largest gap seen, violation or not
  std::size_t skipped = 0;

  void observe(Violation v, bool violates) {
    if (!worst || v.gap > worst->gap) worst = v;
    if (violates) violations.push_back(std::move(v));
  }
};

inline void require_checkable(const Space& space) {
  const auto caps = space.capabilities();
  if (!caps.has_sampler) throw Error(Errc::NoSamplerCapability, space.name() + " has no sampler");
  if (!caps.has_geodesics) throw Error(Errc::NoGeodesicCapability, space.name() + " provides no geodesics");
}

inline CheckReport merge(CheckReport r, std::vector<SampleOutcome>& outcomes, const SamplerConfig& cfg) {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    ++r.samples;
    if (o.admissible) ++r.admissible;
    r.violation_count += o.violations.size();
    for (auto& v : o.violations) keep_worst(r.violations, std::move(v), cfg.max_violations);
    SampleRow row;
    row.index = i;
    row.admissible = o.admissible;
    if (o.worst) {
      r.max_gap = std::max(r.max_gap, o.worst->gap);
      row.worst = *o.worst;
    }
    r.rows.push_back(std::move(row));
  }
  std::stable_sort(r.violations.begin(), r.violations.end(),
                   [](const Violation& a, const Violation& b) { return a.gap > b.gap; });
  r.verdict = decide(r, cfg.min_admissible);
  return r;
}

inline CheckReport report_header(const Space& space, double k, Bound bound, const std::string& variant,
                                 const SamplerConfig& cfg, double tolerance) {
  CheckReport r;
  r.space = space.name();
  r.k = k;
  r.bound = to_string(bound);
  r.variant = variant;
  r.seed = cfg.seed;
  r.tolerance = tolerance;
  return r;
}

/// A sampled triangle with its realizers, or nothing if it is inadmissible.
struct SampledTriangle {
  Triangle tri;
  ComparisonTriangle cmp;
  TimelikeCurve g12, g23, g13;
};

inline std::optional<SampledTriangle> sample_comparison_triangle(const Space& space, const CurvatureParam& K, Rng& rng) {
  auto tri = space.sample_triangle(rng);
  if (!tri) return std::nullopt;
  const double a12 = space.tau(tri->p1, tri->p2), a23 = space.tau(tri->p2, tri->p3), a13 = space.tau(tri->p1, tri->p3);
  if (!std::isfinite(a12) || !std::isfinite(a23) || !std::isfinite(a13)) return std::nullopt;
  try {
    SampledTriangle s{*tri, make_comparison_triangle(K, a12, a23, a13), geodesic(space, tri->p1, tri->p2),
                      geodesic(space, tri->p2, tri->p3), geodesic(space, tri->p1, tri->p3)};
    return s;
  } catch (const Error&) {
    return std::nullopt;  // size bounds, or no realizer inside the region
  }
}

inline double side_code(Side s) { return s == Side::s12 ? 12.0 : s == Side::s23 ? 23.0 : 13.0; }

}  // namespace detail

/// Samples triangles and point pairs on their sides and compares tau with
/// the comparison separation: below asserts tau <= tau-bar, above
/// tau >= tau-bar.  Below also records q1 << q2 without q1-bar << q2-bar.
inline CheckReport check_triangle_comparison(const Space& space, double k, Bound bound, const SamplerConfig& cfg) {
  detail::require_checkable(space);
  const CurvatureParam K(k);
  std::vector<detail::SampleOutcome> outcomes(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](std::size_t i) {
    Rng rng(stream_seed(cfg.seed, i));
    auto& out = outcomes[i];
    const auto s = detail::sample_comparison_triangle(space, K, rng);
    if (!s) return;
    struct Q {
      Side side;
      double offset;
      Point p;
    };
    std::vector<Q> qs;
    const std::pair<Side, const TimelikeCurve*> sides[] = {{Side::s12, &s->g12}, {Side::s23, &s->g23}, {Side::s13, &s->g13}};
    for (const auto& [side, g] : sides) {
      const double len = side_length(s->cmp, side);
      std::vector<double> offsets{0.0, len};
      for (std::size_t j = 0; j < cfg.points_per_side; ++j) offsets.push_back(rng.uniform(0.0, len));
      for (double o : offsets) qs.push_back({side, o, g->eval(o)});
    }
    out.admissible = true;
    for (const auto& a : qs)
      for (const auto& b : qs) {
        if (&a == &b) continue;
        const double t = space.tau(a.p, b.p);
        if (!std::isfinite(t)) {
          ++out.skipped;
          continue;
        }
        const auto sep = comparison_tau(s->cmp, {a.side, a.offset}, {b.side, b.offset});
        const double bar = sep.orientation == Order::first_precedes_second ? sep.value : 0.0;
        Violation v;
        v.witness.kind = "triangle";
        v.witness.add("side1", detail::side_code(a.side)).add("offset1", a.offset);
        v.witness.add("side2", detail::side_code(b.side)).add("offset2", b.offset);
        v.witness.add("a12", s->cmp.a12).add("a23", s->cmp.a23).add("a13", s->cmp.a13);
        v.lhs = t;
        v.rhs = bar;
        v.gap = bound == Bound::below ? t - bar : bar - t;
        const bool violates = v.gap > cfg.tolerance;
        if (!violates && bound == Bound::below && t > cfg.tolerance && bar == 0.0) {
          v.witness.kind = "causal-implication";
          out.observe(std::move(v), true);
          continue;
        }
        out.observe(std::move(v), violates);
      }
  });
  return detail::merge(detail::report_header(space, k, bound, "triangle", cfg, cfg.tolerance), outcomes, cfg);
}

namespace detail {

/// Realizer pair at a vertex of a sampled triangle: at p1 both future, at
/// p3 both past, at p2 past toward p1 and future toward p3.
struct Hinge {
  Point x;
  TimelikeCurve alpha, beta;
  int vertex;
};

inline std::vector<Hinge> hinges_of(const SampledTriangle& s, std::initializer_list<int> vertices) {
  std::vector<Hinge> h;
  for (int v : vertices) {
    if (v == 1) h.push_back({s.tri.p1, s.g12, s.g13, 1});
    if (v == 2) h.push_back({s.tri.p2, s.g12.reversed(), s.g23, 2});
    if (v == 3) h.push_back({s.tri.p3, s.g23.reversed(), s.g13.reversed(), 3});
  }
  return h;
}

/// Comparison angle with the range of omega over all side perturbations of
/// a few ulps.  Near degenerate triangles omega is only known to about the
/// square root of the side rounding; the range makes that explicit.
struct BracketedAngle {
  SignedAngle angle;
  double lo = 0.0;
  double hi = 0.0;

  // Signed range.
  double signed_lo() const { return angle.sigma > 0 ? lo : -hi; }
  double signed_hi() const { return angle.sigma > 0 ? hi : -lo; }
};

inline BracketedAngle bracketed_angle(const Space& space, const Point& x, const Point& y, const Point& z,
                                      const CurvatureParam& K) {
  const auto sides = comparison_sides(space, x, y, z);
  const auto& t = sides.shape;
  BracketedAngle out{angle_from_sides(K, t, sides.sigma), 0.0, 0.0};
  out.lo = out.hi = out.angle.omega;
  const double d = 16.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, t.a, t.b, t.c});
  for (int mask = 0; mask < 8; ++mask) {
    const TriangleShape p{t.a + (mask & 1 ? d : -d), t.b + (mask & 2 ? d : -d), std::max(0.0, t.c + (mask & 4 ? d : -d))};
    try {
      const double w = angle_from_sides(K, p, sides.sigma).omega;
      out.lo = std::min(out.lo, w);
      out.hi = std::max(out.hi, w);
    } catch (const Error&) {
      // perturbation left the realizable range
    }
  }
  return out;
}

}  // namespace detail

/// Evaluates theta(s,t) on a grid along realizer pairs.  The general variant
/// asserts monotonicity in each variable between consecutive defined grid
/// points at all three vertices.  The future (past) variant compares the
/// unsigned angle at p1 (p3) for inner points against the full triangle.
inline CheckReport check_monotonicity(const Space& space, double k, Bound bound, MonotonicityVariant variant,
                                      const SamplerConfig& cfg) {
  detail::require_checkable(space);
  if (cfg.grid < 2) throw Error(Errc::EmptyGrid, "monotonicity grid needs at least 2 points per curve");
  const CurvatureParam K(k);
  const std::size_t n = cfg.grid;
  std::vector<detail::SampleOutcome> outcomes(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](std::size_t i) {
    Rng rng(stream_seed(cfg.seed, i));
    auto& out = outcomes[i];
    const auto s = detail::sample_comparison_triangle(space, K, rng);
    if (!s) return;
    const auto hinges = variant == MonotonicityVariant::general ? detail::hinges_of(*s, {1, 2, 3})
                        : variant == MonotonicityVariant::future ? detail::hinges_of(*s, {1})
                                                                 : detail::hinges_of(*s, {3});
    for (const auto& h : hinges) {
      // theta[i][j] at (s_i, t_j) = (L_a i/n, L_b j/n), i, j = 1..n.
      std::vector<std::vector<std::optional<detail::BracketedAngle>>> theta(
          n + 1, std::vector<std::optional<detail::BracketedAngle>>(n + 1));
      for (std::size_t a = 1; a <= n; ++a)
        for (std::size_t b = 1; b <= n; ++b) {
          const double sa = a == n ? h.alpha.length() : h.alpha.length() * static_cast<double>(a) / static_cast<double>(n);
          const double tb = b == n ? h.beta.length() : h.beta.length() * static_cast<double>(b) / static_cast<double>(n);
          try {
            theta[a][b] = detail::bracketed_angle(space, h.x, h.alpha.eval(sa), h.beta.eval(tb), K);
          } catch (const Error&) {
            ++out.skipped;  // not causally related, or outside the size bounds
          }
        }
      // The gap is what remains after the rounding ranges are used up.
      auto record = [&](const char* kind, double lhs, double rhs, double gap, std::size_t a, std::size_t b) {
        Violation v;
        v.witness.kind = kind;
        v.witness.add("vertex", h.vertex).add("i", static_cast<double>(a)).add("j", static_cast<double>(b));
        v.witness.add("a12", s->cmp.a12).add("a23", s->cmp.a23).add("a13", s->cmp.a13);
        v.lhs = lhs;
        v.rhs = rhs;
        v.gap = gap;
        out.admissible = true;
        out.observe(std::move(v), gap > cfg.tolerance);
      };
      if (variant == MonotonicityVariant::general) {
        // below: theta nondecreasing in s and in t
        auto step = [&](const char* kind, const detail::BracketedAngle& here, const detail::BracketedAngle& next,
                        std::size_t a, std::size_t b) {
          const double gap = bound == Bound::below ? here.signed_lo() - next.signed_hi()
                                                   : next.signed_lo() - here.signed_hi();
          record(kind, here.angle.signed_value(), next.angle.signed_value(), gap, a, b);
        };
        for (std::size_t a = 1; a <= n; ++a)
          for (std::size_t b = 1; b <= n; ++b) {
            if (!theta[a][b]) continue;
            if (a < n && theta[a + 1][b]) step("step-s", *theta[a][b], *theta[a + 1][b], a, b);
            if (b < n && theta[a][b + 1]) step("step-t", *theta[a][b], *theta[a][b + 1], a, b);
          }
      } else {
        if (!theta[n][n]) continue;
        const auto& full = *theta[n][n];
        for (std::size_t a = 1; a <= n; ++a)
          for (std::size_t b = 1; b <= n; ++b) {
            if (!theta[a][b] || (a == n && b == n)) continue;
            const auto& inner = *theta[a][b];
            // below: the inner angle is at least the full one
            const double gap = bound == Bound::below ? full.lo - inner.hi : inner.lo - full.hi;
            record("inner-angle", inner.angle.omega, full.angle.omega, gap, a, b);
          }
      }
    }
  });
  return detail::merge(detail::report_header(space, k, bound, to_string(variant), cfg, cfg.tolerance), outcomes, cfg);
}

/// Hinges at p1 (sigma = -1) and p2 (sigma = +1) of sampled triangles with
/// estimated angles.  Below asserts tau >= tau-bar from the comparison hinge,
/// above tau <= tau-bar.  Hinges whose angle does not converge are skipped.
inline CheckReport hinge_check(const Space& space, double k, Bound bound, const SamplerConfig& cfg) {
  detail::require_checkable(space);
  const CurvatureParam K(k);
  std::vector<detail::SampleOutcome> outcomes(cfg.samples);
  parallel_for(cfg.samples, cfg.jobs, [&](std::size_t i) {
    Rng rng(stream_seed(cfg.seed, i));
    auto& out = outcomes[i];
    const auto s = detail::sample_comparison_triangle(space, K, rng);
    if (!s) return;
    for (const auto& h : detail::hinges_of(*s, {1, 2})) {
      AngleEstimate est;
      try {
        est = estimate_upper_angle(space, h.alpha, h.beta, cfg.scheme);
      } catch (const Error&) {
        ++out.skipped;
        continue;
      }
      if (!est.converged) {
        ++out.skipped;
        continue;
      }
      const double A = h.alpha.length(), B = h.beta.length();
      HingeSide side;
      try {
        side = side_from_hinge(K, {A, B, {est.value, est.sigma}});
      } catch (const Error&) {
        ++out.skipped;
        continue;
      }
      const Point ya = h.alpha.end(), zb = h.beta.end();
      const double lhs = std::max(space.tau(ya, zb), space.tau(zb, ya));
      const double bar = side.causal ? side.value : 0.0;
      Violation v;
      v.witness.kind = "hinge";
      v.witness.add("vertex", h.vertex).add("A", A).add("B", B).add("omega", est.value).add("sigma", est.sigma);
      v.lhs = lhs;
      v.rhs = bar;
      v.gap = bound == Bound::below ? bar - lhs : lhs - bar;
      out.admissible = true;
      const bool violates = v.gap > cfg.angle_tolerance;
      out.observe(std::move(v), violates);
    }
  });
  return detail::merge(detail::report_header(space, k, bound, "hinge", cfg, cfg.angle_tolerance), outcomes, cfg);
}

struct EquivalenceCell {
  double k = 0.0;
  Bound bound = Bound::below;
  CheckReport triangle;
  CheckReport monotonicity;
  bool agree = false;
};

/// Triangle comparison and general monotonicity on identical seeds for
/// every (k, bound).
inline std::vector<EquivalenceCell> equivalence_audit(const Space& space, const std::vector<double>& k_list,
                                                      const std::vector<Bound>& bounds, const SamplerConfig& cfg) {
  std::vector<EquivalenceCell> cells;
  for (double k : k_list)
    for (Bound b : bounds) {
      EquivalenceCell c;
      c.k = k;
      c.bound = b;
      c.triangle = check_triangle_comparison(space, k, b, cfg);
      c.monotonicity = check_monotonicity(space, k, b, MonotonicityVariant::general, cfg);
      c.agree = c.triangle.verdict == c.monotonicity.verdict;
      cells.push_back(std::move(c));
    }
  return cells;
}

/// A pass below at K must persist for every larger tested K, a pass above
/// for every smaller one.  Returns the breaching (passing K, failing K) pairs.
struct TransitivityBreach {
  Bound bound;
  double passing_k;
  double failing_k;
};

inline std::vector<TransitivityBreach> transitivity_audit(const std::vector<EquivalenceCell>& cells) {
  std::vector<TransitivityBreach> out;
  for (const auto& a : cells)
    for (const auto& b : cells) {
      if (a.bound != b.bound || a.triangle.verdict != Verdict::pass || b.triangle.verdict != Verdict::fail) continue;
      const bool implied = a.bound == Bound::below ? b.k > a.k : b.k < a.k;
      if (implied) out.push_back({a.bound, a.k, b.k});
    }
  return out;
}

struct FanConfig {
  double base_rapidity = 0.0;
  double back = 0.5;
  std::vector<double> rapidities{0.0, 0.25};
  double reach = 0.5;
  std::size_t samples = 64;  ///< comparison points along the common parameter range
};

struct BranchPair {
  std::size_t first = 0;
  std::size_t second = 0;
  double branch_parameter = 0.0;  ///< tau-arclength from the fan base
  Point branch_point;
  double separation_angle = 0.0;
  bool angle_converged = false;
};

struct BranchingResult {
  std::string space;
  Point x;
  bool fan_available = false;
  std::vector<BranchPair> pairs;

  bool found() const { return !pairs.empty(); }
};

/// Realizers from a common base through x to the fan endpoints; a pair that
/// agrees on an initial stretch beyond the base and separates later branches.
inline BranchingResult branching_detect(const Space& space, const Point& x, const FanConfig& fan_cfg,
                                        const AngleScheme& scheme = {}) {
  if (!space.capabilities().has_geodesics) throw Error(Errc::NoGeodesicCapability, space.name() + " provides no geodesics");
  BranchingResult res;
  res.space = space.name();
  res.x = x;
  auto fan = space.fan_through(x, fan_cfg.base_rapidity, fan_cfg.back, fan_cfg.rapidities, fan_cfg.reach);
  if (!fan && fan_cfg.base_rapidity != 0.0)
    fan = space.fan_through(x, 0.0, fan_cfg.back, fan_cfg.rapidities, fan_cfg.reach);
  if (!fan) return res;
  res.fan_available = true;
  std::vector<TimelikeCurve> rays;
  for (const auto& e : fan->ends) rays.push_back(geodesic(space, fan->base, e));

  constexpr double coincide = 1e-9, separate = 1e-6;
  for (std::size_t i = 0; i < rays.size(); ++i)
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      const auto& a = rays[i];
      const auto& b = rays[j];
      const double L = std::min(a.length(), b.length());
      auto gap = [&](double u) { return space.dist(a.eval(u), b.eval(u)); };
      std::optional<double> last_same, first_apart;
      for (std::size_t k = 1; k <= fan_cfg.samples; ++k) {
        const double u = L * static_cast<double>(k) / static_cast<double>(fan_cfg.samples);
        const double d = gap(u);
        if (d < coincide && !first_apart) last_same = u;
        if (d > separate && last_same && !first_apart) first_apart = u;
      }
      if (!last_same || !first_apart) continue;
      double lo = *last_same, hi = *first_apart;
      for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, L); ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 1e-12 ? lo : hi) = mid;
      }
      BranchPair p;
      p.first = i;
      p.second = j;
      p.branch_parameter = lo;
      p.branch_point = a.eval(lo);
      try {
        const auto est = estimate_upper_angle(space, a.subcurve(lo, a.length()), b.subcurve(lo, b.length()), scheme);
        p.separation_angle = est.value;
        p.angle_converged = est.converged;
      } catch (const Error&) {
        p.separation_angle = 0.0;
      }
      res.pairs.push_back(std::move(p));
    }
  return res;
}

/// Branching over sampled points with random fan rapidities.
struct BranchingAudit {
  std::size_t fans = 0;     ///< fans built
  std::size_t flagged = 0;  ///< fans with at least one branching pair
  std::vector<BranchingResult> witnesses;
};

inline BranchingAudit branching_audit(const Space& space, std::uint64_t seed, std::size_t count,
                                      const AngleScheme& scheme = {}) {
  BranchingAudit audit;
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(stream_seed(seed, i));
    const Point x = space.sample_point(rng);
    FanConfig cfg;
    cfg.base_rapidity = rng.uniform(-0.5, 0.5);
    cfg.back = rng.uniform(0.05, 0.2);
    cfg.reach = rng.uniform(0.05, 0.2);
    cfg.rapidities = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    const auto r = branching_detect(space, x, cfg, scheme);
    if (!r.fan_available) continue;
    ++audit.fans;
    if (r.found()) {
      ++audit.flagged;
      if (audit.witnesses.size() < 10) audit.witnesses.push_back(r);
    }
  }
  return audit;
}

/// Realizers cannot branch under a lower bound: a space passing a below
/// check must show no branching.  True when the pair is consistent.
inline bool non_branching_consistent(const CheckReport& below, const BranchingResult& branching) {
  return !(below.verdict == Verdict::pass && branching.found());
}

}  // namespace lorentz
