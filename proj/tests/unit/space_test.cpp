#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hyperfuzz;
using namespace hyperfuzz::testing;

TEST(Distance, Examples) {
  EXPECT_EQ(distance(*line(), pt(0), pt(0)), 0.0);
  EXPECT_EQ(distance(*line(), pt(0), pt(3)), 3.0);
  EXPECT_DOUBLE_EQ(distance(*plane(), pt(0, 0), pt(3, 4)), 5.0);
}

TEST(Distance, RejectsMismatchedPoints) {
  EXPECT_THROW(distance(*line(), pt(0), pt(0, 1)), InputError);
  auto finite = MetricSpace::finite({{0, 1}, {1, 0}});
  EXPECT_THROW(distance(*finite, Point::indexed(0), Point::indexed(2)), InputError);
  EXPECT_THROW(distance(*finite, Point::indexed(0), pt(0)), InputError);
  EXPECT_THROW(Point::euclidean({std::nan("")}), InputError);
}

TEST(Distance, FiniteModeReadsMatrix) {
  auto finite = MetricSpace::finite({{0, 2, 3}, {2, 0, 1}, {3, 1, 0}});
  EXPECT_EQ(distance(*finite, Point::indexed(0), Point::indexed(2)), 3.0);
  EXPECT_EQ(distance(*finite, Point::indexed(1), Point::indexed(1)), 0.0);
}

TEST(LiftedDistance, Examples) {
  EXPECT_NEAR(lifted_distance(*line(), {pt(0), 0.2}, {pt(0), 0.9}), 0.7, 1e-12);
  EXPECT_DOUBLE_EQ(lifted_distance(*line(), {pt(0), 0.0}, {pt(1), 1.0}), 2.0);
  EXPECT_EQ(lifted_distance(*line(), {pt(0.5), 0.3}, {pt(0.5), 0.3}), 0.0);
  EXPECT_THROW(LiftedPoint(pt(0), 1.5), InputError);
}

TEST(ValidateMetric, Examples) {
  EXPECT_EQ(validate_metric(*MetricSpace::finite({{0, 1}, {1, 0}})).verdict, Verdict::Pass);

  auto asym = validate_metric(*MetricSpace::finite({{0, 1}, {2, 0}}));
  EXPECT_EQ(asym.verdict, Verdict::Fail);
  EXPECT_EQ(asym.witness, "asymmetry (0,1)");

  auto tri = validate_metric(*MetricSpace::finite({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}));
  EXPECT_EQ(tri.verdict, Verdict::Fail);
  EXPECT_EQ(tri.witness, "triangle (0,2) via 1");
}

TEST(ValidateMetric, EuclideanIsUnsupported) { EXPECT_THROW(validate_metric(*plane()), Unsupported); }

TEST(ValidateMetric, RejectsMalformedMatrices) {
  EXPECT_THROW(MetricSpace::finite({{0, 1}, {1}}), InputError);
  EXPECT_THROW(MetricSpace::finite({{0, -1}, {-1, 0}}), InputError);
  EXPECT_THROW(MetricSpace::finite({}), InputError);
}

TEST(DistanceProperty, SymmetryTriangleAndLiftBounds) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const Point a = random_point(rng, *plane(), -5, 5);
    const Point b = random_point(rng, *plane(), -5, 5);
    const Point c = random_point(rng, *plane(), -5, 5);
    const double ab = distance(*plane(), a, b);
    EXPECT_EQ(ab, distance(*plane(), b, a));
    EXPECT_LE(distance(*plane(), a, c), ab + distance(*plane(), b, c) + kTolerance);
    EXPECT_NEAR(ab, raw_distance(*plane(), a, b), 1e-12);

    const double la = rng.unit(), lb = rng.unit();
    const double lifted = lifted_distance(*plane(), {a, la}, {b, lb});
    EXPECT_GE(lifted, std::abs(la - lb));
    EXPECT_GE(lifted, ab);
  }
}

TEST(DistanceProperty, RandomFiniteMetricsFromPointCloudsValidate) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Point> cloud;
    for (int i = 0; i < 6; ++i) cloud.push_back(random_point(rng, *plane(), 0, 1));
    MetricSpace::Matrix m(6, std::vector<double>(6));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) m[i][j] = distance(*plane(), cloud[i], cloud[j]);
    EXPECT_EQ(validate_metric(*MetricSpace::finite(m)).verdict, Verdict::Pass);
  }
}
