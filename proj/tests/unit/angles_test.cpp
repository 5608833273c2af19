#include <cmath>

#include <gtest/gtest.h>

#include "lorentz/angles.hpp"
#include "lorentz/builtins.hpp"

using namespace lorentz;

namespace {

const MinkowskiDiamond mink(2, 10.0);

TimelikeCurve ray(double rapidity, double length = 1.0) {
  return geodesic(mink, {0, 0}, {length * std::cosh(rapidity), length * std::sinh(rapidity)});
}

TimelikeCurve past_ray(double rapidity, double length = 1.0) {
  return geodesic(mink, {-length * std::cosh(rapidity), -length * std::sinh(rapidity)}, {0, 0}).reversed();
}

}  // namespace

TEST(UpperAngle, RapidityGap) {
  const auto e = estimate_upper_angle(mink, ray(0.0), ray(0.5));
  EXPECT_TRUE(e.converged);
  EXPECT_NEAR(e.value, 0.5, 1e-4);
  EXPECT_EQ(e.sigma, -1);
}

TEST(UpperAngle, SameRay) { EXPECT_NEAR(estimate_upper_angle(mink, ray(0.2), ray(0.2)).value, 0.0, 1e-6); }

TEST(UpperAngle, PastExtension) {
  const auto e = estimate_upper_angle(mink, ray(0.0), past_ray(0.0));
  EXPECT_NEAR(e.value, 0.0, 1e-6);
  EXPECT_EQ(e.sigma, 1);
}

TEST(UpperAngle, ScaleInvariant) {
  AngleScheme a, b;
  a.s0 = 0.1;
  b.s0 = 0.03;
  const double va = estimate_upper_angle(mink, ray(0.1), ray(0.8), a).value;
  const double vb = estimate_upper_angle(mink, ray(0.1), ray(0.8), b).value;
  EXPECT_NEAR(va, vb, 2 * a.tol);
}

TEST(UpperAngle, NotConvergedIsFlagged) {
  AngleScheme s;
  s.j_max = 1;
  s.m = 3;
  EXPECT_FALSE(estimate_upper_angle(mink, ray(0.0), ray(0.5), s).converged);
}

TEST(UpperAngle, CurvesMustShareStart) {
  const auto shifted = geodesic(mink, {0.1, 0}, {1, 0});
  EXPECT_THROW(estimate_upper_angle(mink, ray(0.0), shifted), Error);
}

TEST(KScan, AgreesWithFlat) {
  for (const auto& row : k_independence_report(mink, ray(0.0), ray(0.5), {-1.0, 0.0, 1.0})) {
    EXPECT_TRUE(row.estimate.converged);
    EXPECT_NEAR(row.estimate.value, 0.5, 2e-3) << "k=" << row.k;
  }
  for (const auto& row : k_independence_report(mink, ray(0.3), ray(0.3), {-1.0, 0.0, 1.0}))
    EXPECT_NEAR(row.estimate.value, 0.0, 1e-6);
}

TEST(Directions, MinkowskiRays) {
  const auto ds = direction_space(mink, {0, 0}, {ray(0.0), ray(0.5), ray(1.0), ray(0.5, 0.7)});
  EXPECT_EQ(ds.class_count, 3u);
  EXPECT_EQ(ds.classes[3], ds.classes[1]);
  EXPECT_NEAR(ds.angle_matrix[0][2], 1.0, 1e-4);
  EXPECT_NEAR(ds.angle_matrix[0][1] + ds.angle_matrix[1][2], ds.angle_matrix[0][2], 1e-4);
  EXPECT_EQ(ds.metric.verdict, Verdict::pass);
  EXPECT_EQ(direction_space_base(ds).size(), 3u);
}

TEST(Directions, ConeVertexRays) {
  const auto cone = make_builtin("cone_over(line)");
  const std::vector<TimelikeCurve> rays{geodesic(*cone, {0, 0}, {1, 0}), geodesic(*cone, {0, 0.7}, {1, 0.7})};
  const auto ds = direction_space(*cone, {0, 0}, rays);
  EXPECT_NEAR(ds.angle_matrix[0][1], 0.7, 1e-4);
}

TEST(Directions, MixedOrientationRejected) {
  try {
    direction_space(mink, {0, 0}, {ray(0.0), past_ray(0.0)});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MixedOrientation);
  }
}

TEST(AngleTriangle, MinkowskiEqualityCase) {
  const auto a = angle_triangle_audit(mink, {0, 0}, {ray(0.0), ray(0.5), ray(1.0)});
  EXPECT_EQ(a.report.verdict, Verdict::pass);
  EXPECT_TRUE(a.findings.empty());
}

TEST(AngleTriangle, MinkowskiMixedOrientation) {
  const auto a = angle_triangle_audit(mink, {0, 0}, {ray(0.0), past_ray(0.3), ray(0.9)});
  EXPECT_EQ(a.report.verdict, Verdict::pass);
  EXPECT_EQ(a.report.violation_count, 0u);
}

TEST(AngleTriangle, FunnelBranchesBreakIt) {
  const auto f = make_builtin("causal_funnel");
  const Point o{0, 0};
  const std::vector<TimelikeCurve> curves{geodesic(*f, o, {1, 0}), geodesic(*f, {-1, 0}, o).reversed(),
                                          geodesic(*f, o, {std::cosh(0.25), std::sinh(0.25)})};
  const auto a = angle_triangle_audit(*f, o, curves);
  EXPECT_NEAR(a.angles[0][1], 0.0, 1e-6);
  EXPECT_NEAR(a.angles[1][2], 0.0, 1e-6);
  EXPECT_NEAR(a.angles[0][2], 0.25, 1e-4);
  ASSERT_FALSE(a.findings.empty());
  EXPECT_NEAR(a.findings.front().gap, 0.25, 1e-3);
}

TEST(AlongGeodesic, MinkowskiLine) {
  const auto g = geodesic(mink, {-1, 0}, {1, 0});
  EXPECT_EQ(angle_along_geodesic_check(mink, g, 1.0, ray(0.5)).verdict, Verdict::pass);
  EXPECT_EQ(angle_along_geodesic_check(mink, g, 1.0, ray(0.0)).verdict, Verdict::pass);
}

TEST(AlongGeodesic, BoundaryBlocksProlongation) {
  const auto h = make_builtin("half_minkowski");
  const auto g = geodesic(*h, {0, 0.5}, {1, 0});
  const auto beta = geodesic(*h, {1, 0}, {2, 0.2});
  try {
    angle_along_geodesic_check(*h, g, g.length(), beta);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoProlongation);
  }
}

TEST(AlongGeodesic, NeedsLowerBound) {
  const auto f = make_builtin("causal_funnel");
  const auto g = geodesic(*f, {0.5, 0}, {1.5, 0});
  EXPECT_THROW(angle_along_geodesic_check(*f, g, 0.5, geodesic(*f, {1, 0}, {2, 0.3})), Error);
}
