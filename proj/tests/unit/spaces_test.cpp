#include <cmath>

#include <gtest/gtest.h>

#include "lorentz/builtins.hpp"
#include "lorentz/finite_space.hpp"

using namespace lorentz;

namespace {

FiniteSpaceTable chain(double tau_pr) {
  FiniteSpaceTable t;
  t.n = 3;
  t.tau = {{0, 1, tau_pr}, {0, 0, 1}, {0, 0, 0}};
  t.le = {{1, 1, 1}, {0, 1, 1}, {0, 0, 1}};
  return t;
}

bool has_kind(const CheckReport& r, const std::string& kind) {
  for (const auto& v : r.violations)
    if (v.witness.kind == kind) return true;
  return false;
}

}  // namespace

TEST(Builtins, MinkowskiDiamond) {
  const auto s = make_builtin("minkowski_diamond(2, 1)");
  EXPECT_EQ(s->name(), "minkowski_diamond(2,1)");
  EXPECT_DOUBLE_EQ(s->tau({0, 0}, {0.5, 0}), 0.5);
  EXPECT_EQ(make_builtin("minkowski_diamond")->name(), "minkowski_diamond(2,1)");
}

TEST(Builtins, Errors) {
  try {
    make_builtin("anti_de_sitter");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownBuiltin);
  }
  try {
    make_builtin("minkowski_diamond(1.5)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::BadParams);
  }
  EXPECT_THROW(make_builtin("causal_funnel(2)"), Error);
  EXPECT_THROW(make_builtin("cone_over(line"), Error);
}

TEST(Builtins, NestedCall) {
  const auto c = parse_builtin_call("cone_over(circle(2))");
  EXPECT_EQ(c.name, "cone_over");
  ASSERT_EQ(c.args.size(), 1u);
  EXPECT_EQ(c.args[0], "circle(2)");
  EXPECT_EQ(make_builtin("cone_over(circle(2))")->name(), "cone_over(circle(2))");
}

TEST(FiniteSpace, ChainPasses) { EXPECT_EQ(validate_finite_space(chain(2.0)).verdict, Verdict::pass); }

TEST(FiniteSpace, ReverseTriangleBreach) {
  const auto r = validate_finite_space(chain(1.5));
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_TRUE(has_kind(r, "reverse-triangle"));
}

TEST(FiniteSpace, ChronologicalButNotCausal) {
  auto t = chain(2.0);
  t.le[0][2] = 0;
  const auto r = validate_finite_space(t);
  EXPECT_EQ(r.verdict, Verdict::fail);
  EXPECT_TRUE(has_kind(r, "chron-not-causal"));
}

TEST(FiniteSpaceJson, MinimalDocument) {
  const auto t = load_finite_space(R"({"n": 2, "tau": [[0, 1], [0, 0]], "le": [[1, 1], [0, 1]]})");
  EXPECT_EQ(t.n, 2u);
  EXPECT_EQ(t.tau[0][1], 1.0);
  EXPECT_FALSE(t.coords.has_value());
}

TEST(FiniteSpaceJson, Rejections) {
  EXPECT_THROW(load_finite_space(R"({"n": 2, "tau": [[0, -1], [0, 0]], "le": [[1, 1], [0, 1]]})"), Error);
  EXPECT_THROW(load_finite_space(R"({"n": 2, "tau": [[0, 1]], "le": [[1, 1], [0, 1]]})"), Error);
  EXPECT_THROW(load_finite_space(R"({"n": 1, "tau": [[0]], "le": [[1]], "extra": 0})"), Error);
  EXPECT_THROW(load_finite_space("{"), Error);
  try {
    load_finite_space(R"({"n": 2, "tau": [[0, -1], [0, 0]], "le": [[1, 1], [0, 1]]})");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ParseError);
    EXPECT_NE(std::string(e.what()).find("$.tau[0][1]"), std::string::npos);
  }
}

TEST(FiniteSpaceJson, RoundTripRandomTables) {
  const auto space = make_builtin("minkowski_diamond(3,1)");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    std::vector<Point> pts;
    for (int i = 0; i < 6; ++i) pts.push_back(space->sample_point(rng));
    const auto t = tabulate(*space, pts);
    const std::string bytes = save_finite_space(t);
    EXPECT_EQ(load_finite_space(bytes), t);
    EXPECT_EQ(save_finite_space(load_finite_space(bytes)), bytes);
    EXPECT_EQ(validate_finite_space(t).verdict, Verdict::pass);
  }
}

TEST(Geodesics, Minkowski) {
  const auto m = make_builtin("minkowski_diamond(2,3)");
  const auto g = geodesic(*m, {0, 0}, {2, 0});
  EXPECT_DOUBLE_EQ(g.length(), 2.0);
  EXPECT_EQ(g.eval(1.0), (Point{1, 0}));
}

TEST(Geodesics, FunnelPassesTheVertex) {
  const auto f = make_builtin("causal_funnel");
  const auto g = geodesic(*f, {-1, 0}, {1, 0.5});
  EXPECT_NEAR(g.length(), 1.0 + std::sqrt(0.75), 1e-12);
  const Point v = g.eval(1.0);
  EXPECT_NEAR(v[0], 0.0, 1e-12);
  EXPECT_NEAR(v[1], 0.0, 1e-12);
}

TEST(Geodesics, HalfMinkowskiStraight) {
  const auto h = make_builtin("half_minkowski");
  const auto g = geodesic(*h, {-1, 0.5}, {0, 0});
  const Point mid = g.eval(0.5 * g.length());
  EXPECT_NEAR(mid[0], -0.5, 1e-12);
  EXPECT_NEAR(mid[1], 0.25, 1e-12);
}

TEST(LogExp, Minkowski) {
  const auto m = make_builtin("minkowski_diamond(2,5)");
  const auto [r, dir] = log_at(*m, {0, 0}, {2, 0});
  EXPECT_DOUBLE_EQ(r, 2.0);
  const auto [r2, dir2] = log_at(*m, {0, 0}, {2 * std::cosh(0.5), 2 * std::sinh(0.5)});
  EXPECT_NEAR(r2, 2.0, 1e-12);
  EXPECT_EQ(exp_at(*m, {0, 0}, 0.0, dir), (Point{0, 0}));
  EXPECT_NEAR(m->tau({0, 0}, exp_at(*m, {0, 0}, 1.0, dir2)), 1.0, 1e-12);
  EXPECT_NEAR(m->tau({0, 0}, exp_at(*m, {0, 0}, 2.0, dir2)), 2.0, 1e-12);
}

TEST(LogExp, ConeVertexRay) {
  const auto c = make_builtin("cone_over(line)");
  const auto [r, dir] = log_at(*c, {0, 0}, {1, 0.3});
  EXPECT_NEAR(r, 1.0, 1e-12);
  const Point p = exp_at(*c, {0, 0}, 0.5, dir);
  EXPECT_NEAR(p[0], 0.5, 1e-12);
  EXPECT_NEAR(p[1], 0.3, 1e-12);
}
