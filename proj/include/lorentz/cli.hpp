#pragma once

// Command line front end.  Exit codes: 0 pass, 1 fail, 2 usage or I/O
// error, 3 inconclusive.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lorentz/angles.hpp"
#include "lorentz/builtins.hpp"
#include "lorentz/cone.hpp"
#include "lorentz/curvature.hpp"
#include "lorentz/error.hpp"
#include "lorentz/finite_space.hpp"
#include "lorentz/json_io.hpp"
#include "lorentz/loc_kernel.hpp"
#include "lorentz/report.hpp"

namespace lorentz::cli {

enum Exit : int { exit_pass = 0, exit_fail = 1, exit_usage = 2, exit_inconclusive = 3 };

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::pass: return exit_pass;
    case Verdict::fail: return exit_fail;
    default: return exit_inconclusive;
  }
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything a subcommand may read.  Numeric fields must be finite.
struct RunConfig {
  std::string config;
  std::string space = "minkowski_diamond(2,1)";
  std::string table;
  double k = 0.0;
  std::vector<double> k_list;
  std::string bound = "below";
  std::vector<std::string> bounds;
  std::string variant = "general";
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  std::size_t points_per_side = 4;
  std::size_t grid = 6;
  std::size_t min_admissible = 100;
  std::size_t max_violations = 100;
  unsigned jobs = 1;
  double tolerance = 1e-9;
  double angle_tolerance = 1e-4;
  std::string report;
  std::string csv;
  std::string out;

  double s0 = 0.0;  // 0 selects the default
  double rho = 0.5;
  int j_max = 24;
  int m = 3;
  double tol = 1e-4;
  double ceiling = 50.0;
  bool shells = false;

  int sigma = -1;
  int which = 1;
  double a = 0.0, b = 0.0, c = 0.0, d = 0.0, omega = 0.0;
  bool has_c = false, has_omega = false;

  std::string base = "line";
  std::string p, q;

  std::string at;
  std::string to_a, to_b;
  std::vector<std::string> to;
  double tol_zero = 1e-3;
  std::string export_base;

  double base_rapidity = 0.0;
  double back = 0.5;
  std::vector<double> rapidities{0.0, 0.25};
  double reach = 0.5;
  std::size_t fans = 0;
  std::size_t points = 30;

  AngleScheme scheme() const {
    AngleScheme s;
    if (s0 > 0.0) s.s0 = s0;
    s.rho = rho;
    s.j_max = j_max;
    s.m = m;
    s.tol = tol;
    s.ceiling = ceiling;
    return s;
  }

  SamplerConfig sampler() const {
    SamplerConfig s;
    s.seed = seed;
    s.samples = samples;
    s.points_per_side = points_per_side;
    s.grid = grid;
    s.min_admissible = min_admissible;
    s.max_violations = max_violations;
    s.jobs = jobs;
    s.tolerance = tolerance;
    s.angle_tolerance = angle_tolerance;
    s.scheme = scheme();
    return s;
  }
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) throw IoError("cannot write " + path);
}

inline Point parse_point(const std::string& text) {
  Point p;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) p.push_back(lorentz::detail::parse_number(part));
  if (p.empty()) throw Error(Errc::BadParams, "empty point");
  return p;
}

inline Bound parse_bound(const std::string& s) {
  if (s == "below") return Bound::below;
  if (s == "above") return Bound::above;
  throw Error(Errc::BadParams, "bound must be below or above");
}

inline MonotonicityVariant parse_variant(const std::string& s) {
  if (s == "future") return MonotonicityVariant::future;
  if (s == "past") return MonotonicityVariant::past;
  if (s == "general") return MonotonicityVariant::general;
  throw Error(Errc::BadParams, "variant must be future, past or general");
}

inline const char* order_name(Order o) {
  switch (o) {
    case Order::first_precedes_second: return "first_precedes_second";
    case Order::second_precedes_first: return "second_precedes_first";
    default: return "none";
  }
}

/// The realizer from x toward y, future or past directed.
inline TimelikeCurve curve_toward(const Space& space, const Point& x, const Point& y) {
  if (space.chron(x, y)) return geodesic(space, x, y);
  if (space.chron(y, x)) return geodesic(space, y, x).reversed();
  throw Error(Errc::NotChronological, "curve endpoints must be chronologically related");
}

inline ordered_json estimate_json(const AngleEstimate& e, bool shells) {
  ordered_json j;
  j["value"] = lorentz::detail::json_number(e.value);
  j["sigma"] = e.sigma;
  j["converged"] = e.converged;
  j["spread"] = e.spread;
  j["shell_values"] = e.shell_values;
  if (shells) {
    j["shells"] = ordered_json::array();
    for (const auto& s : e.shells) j["shells"].push_back({s.s, s.t, s.angle});
  }
  return j;
}

// Applies --config: each key names a long option of the subcommand and
// replaces whatever the command line gave it.
inline void apply_config(CLI::App& sub, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw CLI::ValidationError("--config", path + ": malformed JSON at byte " + std::to_string(e.byte));
  }
  if (!doc.is_object()) throw CLI::ValidationError("--config", path + ": expected an object");
  for (const auto& [key, value] : doc.items()) {
    CLI::Option* opt = key == "config" ? nullptr : sub.get_option_no_throw("--" + key);
    if (!opt) throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    auto text = [](const nlohmann::json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    opt->clear();
    if (value.is_array()) {
      for (const auto& v : value) opt->add_result(text(v));
    } else {
      opt->add_result(text(value));
    }
    opt->run_callback();
  }
}

inline void require_finite(const RunConfig& c) {
  for (double v : {c.k, c.tolerance, c.angle_tolerance, c.s0, c.rho, c.tol, c.ceiling, c.a, c.b, c.c, c.d, c.omega,
                   c.tol_zero, c.base_rapidity, c.back, c.reach})
    if (!std::isfinite(v)) throw CLI::ValidationError("numeric options must be finite");
  for (double v : c.k_list)
    if (!std::isfinite(v)) throw CLI::ValidationError("numeric options must be finite");
  for (double v : c.rapidities)
    if (!std::isfinite(v)) throw CLI::ValidationError("numeric options must be finite");
}

}  // namespace detail

/// Parses argv, runs the selected subcommand and returns the exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig cfg;
  CLI::App app{"Curvature bounds and angles for Lorentzian pre-length spaces"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto common = [&](CLI::App* s) {
    s->add_option("--config", cfg.config, "JSON object of option values overriding the command line");
    s->add_option("--report", cfg.report, "write the JSON result here instead of standard output");
  };
  auto space_opts = [&](CLI::App* s) {
    s->add_option("--space", cfg.space, "built-in space, e.g. minkowski_diamond(2,1), cone_over(line)");
  };
  auto sampler_opts = [&](CLI::App* s) {
    s->add_option("--k", cfg.k, "model curvature");
    s->add_option("--bound", cfg.bound, "below or above");
    s->add_option("--seed", cfg.seed, "sampler seed");
    s->add_option("--samples", cfg.samples, "sampled configurations");
    s->add_option("--points-per-side", cfg.points_per_side, "random side points per side");
    s->add_option("--grid", cfg.grid, "monotonicity grid points per curve");
    s->add_option("--min-admissible", cfg.min_admissible, "admissible samples needed for a verdict");
    s->add_option("--max-violations", cfg.max_violations, "violations kept in the report");
    s->add_option("--jobs", cfg.jobs, "worker threads");
    s->add_option("--tolerance", cfg.tolerance, "slack on time separations and angle steps");
    s->add_option("--angle-tolerance", cfg.angle_tolerance, "slack on checks with estimated angles");
    s->add_option("--csv", cfg.csv, "per-sample CSV output");
  };
  auto scheme_opts = [&](CLI::App* s) {
    s->add_option("--s0", cfg.s0, "largest curve parameter (0: an eighth of the shorter curve)");
    s->add_option("--rho", cfg.rho, "shell ratio in (0,1)");
    s->add_option("--j-max", cfg.j_max, "last shell");
    s->add_option("--m", cfg.m, "shells in the final supremum");
    s->add_option("--tol", cfg.tol, "convergence tolerance");
    s->add_option("--ceiling", cfg.ceiling, "values above this are reported as infinite");
  };

  // loc
  auto* loc = app.add_subcommand("loc", "model-plane law of cosines")->require_subcommand(1);
  auto* loc_solve = loc->add_subcommand("solve", "angle from three sides, or the opposite side from a hinge");
  auto* loc_one = loc->add_subcommand("one-sided", "comparison separation from a vertex to a side point");
  auto* loc_ext = loc->add_subcommand("extended", "extended law of cosines margin");
  for (auto* s : {loc_solve, loc_one, loc_ext}) {
    common(s);
    s->add_option("--k", cfg.k, "model curvature");
    s->add_option("--a", cfg.a, "first leg");
    s->add_option("--b", cfg.b, "second leg");
  }
  loc_solve->add_option("--sigma", cfg.sigma, "-1 at an endpoint, +1 at the middle vertex");
  loc_solve->add_option("--c", cfg.c, "side opposite the vertex");
  loc_solve->add_option("--omega", cfg.omega, "hyperbolic angle at the vertex");
  loc_one->add_option("--case", cfg.which, "configuration 1, 2 or 3");
  loc_one->add_option("--c", cfg.c, "third length");
  loc_one->add_option("--d", cfg.d, "longest side");
  loc_ext->add_option("--omega", cfg.omega, "angle between the future legs");

  // angle
  auto* angle = app.add_subcommand("angle", "upper angles between timelike curves")->require_subcommand(1);
  auto* angle_est = angle->add_subcommand("estimate", "estimate the upper angle at a point");
  auto* angle_scan = angle->add_subcommand("kscan", "estimates for several model curvatures");
  auto* angle_dir = angle->add_subcommand("directions", "space of directions at a point");
  for (auto* s : {angle_est, angle_scan, angle_dir}) {
    common(s);
    space_opts(s);
    scheme_opts(s);
    s->add_option("--at", cfg.at, "base point, comma separated");
    s->add_option("--shells", cfg.shells, "include every shell sample");
  }
  for (auto* s : {angle_est, angle_scan}) {
    s->add_option("--to-a", cfg.to_a, "far end of the first realizer");
    s->add_option("--to-b", cfg.to_b, "far end of the second realizer");
  }
  angle_est->add_option("--k", cfg.k, "model curvature of the comparison angles");
  angle_scan->add_option("--k-list", cfg.k_list, "model curvatures")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',');
  angle_dir->add_option("--to", cfg.to, "far ends of the realizers")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  angle_dir->add_option("--tol-zero", cfg.tol_zero, "angles below this identify directions");
  angle_dir->add_option("--export-base", cfg.export_base, "write the quotient as a metric base JSON");

  // cone
  auto* cone = app.add_subcommand("cone", "Minkowski cones over metric spaces")->require_subcommand(1);
  auto* cone_tau_cmd = cone->add_subcommand("tau", "time separation of two cone points");
  auto* cone_d_cmd = cone->add_subcommand("d", "cone metric between two cone points");
  auto* cone_audit_cmd = cone->add_subcommand("audit", "sampled cone properties");
  for (auto* s : {cone_tau_cmd, cone_d_cmd, cone_audit_cmd}) {
    common(s);
    s->add_option("--base", cfg.base, "line, circle(C) or a metric base JSON path");
  }
  for (auto* s : {cone_tau_cmd, cone_d_cmd}) {
    s->add_option("--p", cfg.p, "first point t,y");
    s->add_option("--q", cfg.q, "second point t,y");
  }
  cone_audit_cmd->add_option("--seed", cfg.seed, "sampler seed");
  cone_audit_cmd->add_option("--samples", cfg.samples, "samples per property");

  // check
  auto* check = app.add_subcommand("check", "curvature bound audits")->require_subcommand(1);
  auto* check_curv = check->add_subcommand("curvature", "triangle comparison");
  auto* check_mono = check->add_subcommand("monotonicity", "K-monotonicity comparison");
  auto* check_hinge = check->add_subcommand("hinge", "hinge comparison with estimated angles");
  auto* check_eq = check->add_subcommand("equivalence", "triangle and monotonicity verdicts side by side");
  auto* check_branch = check->add_subcommand("branching", "branching realizers through a point");
  auto* check_ax = check->add_subcommand("axioms", "pre-length space axioms on a tabulation");
  for (auto* s : {check_curv, check_mono, check_hinge, check_eq}) {
    common(s);
    space_opts(s);
    sampler_opts(s);
  }
  for (auto* s : {check_hinge, check_eq}) scheme_opts(s);
  check_mono->add_option("--variant", cfg.variant, "future, past or general");
  check_eq->add_option("--k-list", cfg.k_list, "model curvatures")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',');
  check_eq->add_option("--bounds", cfg.bounds, "below and/or above")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',');
  common(check_branch);
  space_opts(check_branch);
  scheme_opts(check_branch);
  check_branch->add_option("--at", cfg.at, "branch candidate point");
  check_branch->add_option("--base-rapidity", cfg.base_rapidity, "direction from the fan base to the point");
  check_branch->add_option("--back", cfg.back, "distance from the fan base to the point");
  check_branch->add_option("--rapidities", cfg.rapidities, "fan directions")->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)->delimiter(',');
  check_branch->add_option("--reach", cfg.reach, "distance from the point to the fan ends");
  check_branch->add_option("--fans", cfg.fans, "random fans at sampled points instead of --at");
  check_branch->add_option("--seed", cfg.seed, "sampler seed");
  common(check_ax);
  space_opts(check_ax);
  check_ax->add_option("--table", cfg.table, "finite space JSON instead of a built-in");
  check_ax->add_option("--points", cfg.points, "sampled points to tabulate");
  check_ax->add_option("--seed", cfg.seed, "sampler seed");

  // space
  auto* space_cmd = app.add_subcommand("space", "finite space tables")->require_subcommand(1);
  auto* space_val = space_cmd->add_subcommand("validate", "axioms of a finite space JSON");
  auto* space_conv = space_cmd->add_subcommand("convert", "tabulate a built-in, or normalize a table");
  common(space_val);
  space_val->add_option("--table", cfg.table, "finite space JSON")->required();
  space_opts(space_conv);
  space_conv->add_option("--config", cfg.config, "JSON object of option values overriding the command line");
  space_conv->add_option("--table", cfg.table, "finite space JSON to normalize");
  space_conv->add_option("--points", cfg.points, "sampled points to tabulate");
  space_conv->add_option("--seed", cfg.seed, "sampler seed");
  space_conv->add_option("--out", cfg.out, "output path")->required();

  CLI::App* leaf = nullptr;
  try {
    app.parse(argc, argv);
    for (CLI::App* s = &app; !s->get_subcommands().empty();) s = leaf = s->get_subcommands().front();
    if (!cfg.config.empty()) detail::apply_config(*leaf, cfg.config);
    detail::require_finite(cfg);
    if (leaf == loc_solve) {
      cfg.has_c = loc_solve->count("--c") > 0;
      cfg.has_omega = loc_solve->count("--omega") > 0;
      if (!cfg.config.empty()) {
        const auto doc = nlohmann::json::parse(detail::read_file(cfg.config));
        cfg.has_c = cfg.has_c || doc.contains("c");
        cfg.has_omega = cfg.has_omega || doc.contains("omega");
      }
      if (cfg.has_c == cfg.has_omega) throw CLI::ValidationError("loc solve needs exactly one of --c and --omega");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_pass : exit_usage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }

  auto emit = [&](const ordered_json& j) {
    if (cfg.report.empty()) {
      out << dump_json(j);
    } else {
      detail::write_file(cfg.report, dump_json(j));
    }
  };
  auto emit_report = [&](const CheckReport& r) {
    emit(report_json(r));
    if (!cfg.csv.empty()) detail::write_file(cfg.csv, report_csv(r));
    if (!cfg.report.empty())
      out << to_string(r.verdict) << ": " << r.violation_count << " violations, " << r.admissible << "/" << r.samples
          << " admissible\n";
    return exit_code(r.verdict);
  };
  auto make_space = [&]() -> SpaceHandle {
    if (!cfg.table.empty()) return std::make_shared<FiniteSpace>(load_finite_space(detail::read_file(cfg.table)));
    return make_builtin(cfg.space);
  };
  auto make_base = [&]() {
    const auto call = parse_builtin_call(cfg.base);
    if (call.name == "line" || call.name == "circle") return make_metric_base(cfg.base);
    return load_metric_base(detail::read_file(cfg.base));
  };

  try {
    if (leaf == loc_solve) {
      ordered_json j;
      if (cfg.has_c) {
        const auto w = angle_from_sides(cfg.k, {cfg.a, cfg.b, cfg.c}, cfg.sigma);
        j["omega"] = w.omega;
        j["sigma"] = w.sigma;
        j["signed"] = w.signed_value();
      } else {
        const auto h = side_from_hinge(cfg.k, {cfg.a, cfg.b, {cfg.omega, cfg.sigma}});
        j["c"] = h.value;
        j["causal"] = h.causal;
        j["margin"] = h.margin;
      }
      emit(j);
      return exit_pass;
    }
    if (leaf == loc_one) {
      const auto r = one_sided_x(cfg.k, cfg.which, cfg.a, cfg.b, cfg.c, cfg.d);
      ordered_json j;
      j["x"] = r.x;
      j["causal"] = r.causal;
      j["order"] = detail::order_name(r.order);
      emit(j);
      return exit_pass;
    }
    if (leaf == loc_ext) {
      ordered_json j;
      j["margin"] = extended_loc_margin(cfg.k, cfg.a, cfg.b, cfg.omega);
      emit(j);
      return exit_pass;
    }
    if (leaf == angle_est || leaf == angle_scan) {
      const auto space = make_space();
      const Point x = detail::parse_point(cfg.at);
      const auto alpha = detail::curve_toward(*space, x, detail::parse_point(cfg.to_a));
      const auto beta = detail::curve_toward(*space, x, detail::parse_point(cfg.to_b));
      if (leaf == angle_est) {
        emit(detail::estimate_json(estimate_upper_angle(*space, alpha, beta, cfg.scheme(), cfg.k), cfg.shells));
        return exit_pass;
      }
      if (cfg.k_list.empty()) cfg.k_list = {-1.0, 0.0, 1.0};
      ordered_json j = ordered_json::array();
      for (const auto& row : k_independence_report(*space, alpha, beta, cfg.k_list, cfg.scheme())) {
        ordered_json e;
        e["k"] = row.k;
        e["estimate"] = detail::estimate_json(row.estimate, cfg.shells);
        e["deviation"] = row.deviation ? ordered_json(*row.deviation) : ordered_json(nullptr);
        j.push_back(std::move(e));
      }
      emit(j);
      return exit_pass;
    }
    if (leaf == angle_dir) {
      const auto space = make_space();
      const Point x = detail::parse_point(cfg.at);
      std::vector<TimelikeCurve> curves;
      for (const auto& t : cfg.to) curves.push_back(detail::curve_toward(*space, x, detail::parse_point(t)));
      const auto ds = direction_space(*space, x, curves, cfg.tol_zero, cfg.scheme());
      ordered_json j;
      j["angles"] = ordered_json::array();
      for (const auto& row : ds.angle_matrix) {
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(lorentz::detail::json_number(v));
        j["angles"].push_back(std::move(r));
      }
      j["classes"] = ds.classes;
      j["class_count"] = ds.class_count;
      j["metric"] = report_json(ds.metric);
      if (!cfg.export_base.empty()) detail::write_file(cfg.export_base, save_metric_base(direction_space_base(ds)));
      emit(j);
      return exit_code(ds.metric.verdict);
    }
    if (leaf == cone_tau_cmd || leaf == cone_d_cmd) {
      const auto base = make_base();
      const Point p = detail::parse_point(cfg.p), q = detail::parse_point(cfg.q);
      if (p.size() != 2 || q.size() != 2) throw Error(Errc::DimensionMismatch, "cone points are t,y");
      const ConePoint cp{p[0], p[1]}, cq{q[0], q[1]};
      ordered_json j;
      if (leaf == cone_tau_cmd) {
        j["tau"] = cone_tau(cp, cq, base);
        j["le"] = cone_le(cp, cq, base);
      } else {
        j["d"] = cone_d(cp, cq, base);
      }
      emit(j);
      return exit_pass;
    }
    if (leaf == cone_audit_cmd) return emit_report(cone_audit(make_base(), cfg.seed, cfg.samples));
    if (leaf == check_curv)
      return emit_report(check_triangle_comparison(*make_space(), cfg.k, detail::parse_bound(cfg.bound), cfg.sampler()));
    if (leaf == check_mono)
      return emit_report(check_monotonicity(*make_space(), cfg.k, detail::parse_bound(cfg.bound),
                                            detail::parse_variant(cfg.variant), cfg.sampler()));
    if (leaf == check_hinge)
      return emit_report(hinge_check(*make_space(), cfg.k, detail::parse_bound(cfg.bound), cfg.sampler()));
    if (leaf == check_eq) {
      const auto space = make_space();
      if (cfg.k_list.empty()) cfg.k_list = {-0.5, 0.0, 0.5};
      std::vector<Bound> bounds;
      for (const auto& b : cfg.bounds) bounds.push_back(detail::parse_bound(b));
      if (bounds.empty()) bounds = {Bound::below, Bound::above};
      const auto cells = equivalence_audit(*space, cfg.k_list, bounds, cfg.sampler());
      const auto breaches = transitivity_audit(cells);
      ordered_json j;
      j["space"] = space->name();
      j["seed"] = cfg.seed;
      j["cells"] = ordered_json::array();
      bool agree = true;
      for (const auto& c : cells) {
        ordered_json e;
        e["k"] = c.k;
        e["bound"] = to_string(c.bound);
        e["triangle"] = to_string(c.triangle.verdict);
        e["monotonicity"] = to_string(c.monotonicity.verdict);
        e["agree"] = c.agree;
        if (!c.agree) {
          const auto& r = c.triangle.violations.empty() ? c.monotonicity : c.triangle;
          e["witness"] = r.violations.empty() ? ordered_json(nullptr) : witness_json(r.violations.front().witness);
        }
        agree = agree && c.agree;
        j["cells"].push_back(std::move(e));
      }
      j["transitivity_breaches"] = ordered_json::array();
      for (const auto& b : breaches)
        j["transitivity_breaches"].push_back({{"bound", to_string(b.bound)}, {"passing_k", b.passing_k}, {"failing_k", b.failing_k}});
      j["agree"] = agree && breaches.empty();
      emit(j);
      return agree && breaches.empty() ? exit_pass : exit_fail;
    }
    if (leaf == check_branch) {
      const auto space = make_space();
      ordered_json j;
      j["space"] = space->name();
      if (cfg.fans > 0) {
        const auto audit = branching_audit(*space, cfg.seed, cfg.fans, cfg.scheme());
        j["seed"] = cfg.seed;
        j["fans"] = audit.fans;
        j["flagged"] = audit.flagged;
        emit(j);
        if (audit.fans == 0) return exit_inconclusive;
        return audit.flagged ? exit_fail : exit_pass;
      }
      FanConfig fan;
      fan.base_rapidity = cfg.base_rapidity;
      fan.back = cfg.back;
      fan.rapidities = cfg.rapidities;
      fan.reach = cfg.reach;
      const auto r = branching_detect(*space, detail::parse_point(cfg.at), fan, cfg.scheme());
      j["x"] = r.x;
      j["fan_available"] = r.fan_available;
      j["branches"] = ordered_json::array();
      for (const auto& p : r.pairs)
        j["branches"].push_back({{"first", p.first},
                                 {"second", p.second},
                                 {"branch_parameter", p.branch_parameter},
                                 {"branch_point", p.branch_point},
                                 {"separation_angle", lorentz::detail::json_number(p.separation_angle)},
                                 {"angle_converged", p.angle_converged}});
      emit(j);
      if (!r.fan_available) return exit_inconclusive;
      return r.found() ? exit_fail : exit_pass;
    }
    if (leaf == check_ax || leaf == space_val) {
      FiniteSpaceTable table;
      if (!cfg.table.empty()) {
        table = load_finite_space(detail::read_file(cfg.table));
      } else {
        const auto space = make_builtin(cfg.space);
        Rng rng(cfg.seed);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < cfg.points; ++i) pts.push_back(space->sample_point(rng));
        table = tabulate(*space, pts);
      }
      auto r = validate_finite_space(table);
      r.seed = cfg.seed;
      return emit_report(r);
    }
    if (leaf == space_conv) {
      FiniteSpaceTable table;
      if (!cfg.table.empty()) {
        table = load_finite_space(detail::read_file(cfg.table));
      } else {
        const auto space = make_builtin(cfg.space);
        Rng rng(cfg.seed);
        std::vector<Point> pts;
        for (std::size_t i = 0; i < cfg.points; ++i) pts.push_back(space->sample_point(rng));
        table = tabulate(*space, pts);
      }
      detail::write_file(cfg.out, save_finite_space(table));
      return exit_pass;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  err << "error: no action for this subcommand\n";
  return exit_usage;
}

}  // namespace lorentz::cli
