#include <gtest/gtest.h>

#include <random>

#include "ifbl/error.hpp"
#include "ifbl/simplex.hpp"
#include "test_support.hpp"

using namespace ifbl;

namespace {

struct HalfPlane {
  Eigen::Vector2d normal;
  double offset;  // normal' r <= offset
};

// Range of r_i over a planar polygon by enumerating every pairwise
// intersection of the bounding lines and keeping the feasible ones.
std::optional<Interval> vertex_range(int i, const Eigen::MatrixXd& P,
                                     const std::vector<Interval>& bounds, const SolutionBox& box) {
  std::vector<HalfPlane> planes;
  for (Eigen::Index j = 0; j < P.rows(); ++j) {
    const Eigen::Vector2d p = P.row(j).transpose();
    planes.push_back({p, bounds[j].hi});
    planes.push_back({-p, -bounds[j].lo});
  }
  for (int c = 0; c < 2; ++c) {
    Eigen::Vector2d e = Eigen::Vector2d::Zero();
    e[c] = 1.0;
    planes.push_back({e, box.upper[c]});
    planes.push_back({-e, -box.lower[c]});
  }
  std::optional<Interval> out;
  for (std::size_t a = 0; a < planes.size(); ++a) {
    for (std::size_t b = a + 1; b < planes.size(); ++b) {
      Eigen::Matrix2d m;
      m.row(0) = planes[a].normal.transpose();
      m.row(1) = planes[b].normal.transpose();
      if (std::abs(m.determinant()) < 1e-12) continue;
      const Eigen::Vector2d v = m.fullPivLu().solve(Eigen::Vector2d(planes[a].offset, planes[b].offset));
      bool ok = true;
      for (const auto& h : planes) ok = ok && h.normal.dot(v) <= h.offset + 1e-9;
      if (!ok) continue;
      if (!out) out = Interval{v[i], v[i]};
      out->lo = std::min(out->lo, v[i]);
      out->hi = std::max(out->hi, v[i]);
    }
  }
  return out;
}

}  // namespace

TEST(LpMinMax, DecoupledIdentity) {
  const std::vector<Interval> bounds{{0, 1}, {0, 1}};
  const auto r = lp_minmax(0, Eigen::Matrix2d::Identity(), bounds, SolutionBox::uniform(2, -10, 10));
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->lo, 0.0, 1e-12);
  EXPECT_NEAR(r->hi, 1.0, 1e-12);
}

TEST(LpMinMax, SumRow) {
  const std::vector<Interval> bounds{{1, 1}};
  // r0 = 1 - r1 with r1 in [-10, 10]; the box also caps r0 itself at 10.
  const auto r = lp_minmax(0, Eigen::RowVector2d(1, 1), bounds, SolutionBox::uniform(2, -10, 10));
  ASSERT_TRUE(r);
  EXPECT_NEAR(r->lo, -9.0, 1e-12);
  EXPECT_NEAR(r->hi, 10.0, 1e-12);

  const SolutionBox loose{Eigen::Vector2d(-20, -10), Eigen::Vector2d(20, 10)};
  const auto w = lp_minmax(0, Eigen::RowVector2d(1, 1), bounds, loose);
  ASSERT_TRUE(w);
  EXPECT_NEAR(w->lo, -9.0, 1e-12);
  EXPECT_NEAR(w->hi, 11.0, 1e-12);
}

TEST(LpMinMax, ContradictoryRowsAreInfeasible) {
  Eigen::Matrix2d P;
  P << 1, 0, 1, 0;
  const std::vector<Interval> bounds{{0, 0}, {1, 1}};
  EXPECT_FALSE(lp_minmax(0, P, bounds, SolutionBox::uniform(2, -10, 10)));
  ProjectionLp lp(P, bounds, SolutionBox::uniform(2, -10, 10));
  EXPECT_FALSE(lp.feasible());
  EXPECT_FALSE(lp.feasible_point());
}

TEST(LpMinMax, BoxAloneBoundsTheRange) {
  const std::vector<Interval> bounds{{-100, 100}};
  SolutionBox box{Eigen::Vector3d(-1, -2, -3), Eigen::Vector3d(1, 2, 3)};
  for (int i = 0; i < 3; ++i) {
    const auto r = lp_minmax(i, Eigen::RowVector3d(1, 1, 1), bounds, box);
    ASSERT_TRUE(r);
    EXPECT_NEAR(r->lo, box.lower[i], 1e-12);
    EXPECT_NEAR(r->hi, box.upper[i], 1e-12);
  }
}

TEST(LpMinMax, RejectsBadInput) {
  const std::vector<Interval> bounds{{0, 1}};
  EXPECT_THROW(lp_minmax(0, Eigen::RowVector2d(1, 1), bounds, SolutionBox::uniform(2, 1, -1)),
               Error);
  EXPECT_THROW(lp_minmax(5, Eigen::RowVector2d(1, 1), bounds, SolutionBox::uniform(2, -1, 1)),
               Error);
  const std::vector<Interval> reversed{{1, 0}};
  EXPECT_THROW(lp_minmax(0, Eigen::RowVector2d(1, 1), reversed, SolutionBox::uniform(2, -1, 1)),
               Error);
}

TEST(LpMinMax, FeasiblePointSatisfiesConstraints) {
  Eigen::MatrixXd P(2, 3);
  P << 1, 2, -1, 0.5, -1, 1;
  const std::vector<Interval> bounds{{0.2, 0.4}, {-0.1, 0.3}};
  const auto box = SolutionBox::uniform(3, -1, 1);
  ProjectionLp lp(P, bounds, box);
  ASSERT_TRUE(lp.feasible());
  const auto r = lp.feasible_point();
  ASSERT_TRUE(r);
  const Eigen::VectorXd pr = P * *r;
  for (int j = 0; j < 2; ++j) EXPECT_TRUE(bounds[j].contains(pr[j], 1e-9));
  for (int i = 0; i < 3; ++i) EXPECT_TRUE((Interval{-1, 1}).contains((*r)[i], 1e-9));
}

TEST(LpMinMax, MatchesVertexEnumeration) {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int k = 1 + trial % 3;
    Eigen::MatrixXd P(k, 2);
    for (int j = 0; j < k; ++j)
      for (int c = 0; c < 2; ++c) P(j, c) = testkit::uniform(rng, -1, 1);
    std::vector<Interval> bounds;
    for (int j = 0; j < k; ++j) {
      const double lo = testkit::uniform(rng, -1, 1);
      // Mix of equalities and slabs to exercise degenerate vertices.
      const double width = (trial % 5 == 0) ? 0.0 : testkit::uniform(rng, 0.0, 1.0);
      bounds.push_back({lo, lo + width});
    }
    const auto box = SolutionBox::uniform(2, -2, 2);
    ProjectionLp lp(P, bounds, box);
    for (int i = 0; i < 2; ++i) {
      const auto want = vertex_range(i, P, bounds, box);
      const auto got = lp.range(i);
      ASSERT_EQ(want.has_value(), got.has_value()) << "trial " << trial;
      if (!want) continue;
      ++feasible;
      EXPECT_NEAR(got->lo, want->lo, 1e-9) << "trial " << trial;
      EXPECT_NEAR(got->hi, want->hi, 1e-9) << "trial " << trial;
    }
  }
  EXPECT_GT(feasible, 100);
}

TEST(LpMinMax, HigherDimensionAgreesWithRandomFeasiblePoints) {
  // Every sampled feasible point must fall inside the reported range.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    const int k = 1 + trial % 3;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(k, n);
    for (int j = 0; j < k; ++j)
      for (int c = 0; c < n; ++c) P(j, c) = testkit::uniform(rng, -1, 1);
    std::vector<Interval> bounds;
    for (int j = 0; j < k; ++j) bounds.push_back({-0.3, 0.3});
    const auto box = SolutionBox::uniform(n, -1, 1);
    ProjectionLp lp(P, bounds, box);
    ASSERT_TRUE(lp.feasible());  // r = 0 is feasible
    std::vector<Interval> ranges;
    for (int i = 0; i < n; ++i) ranges.push_back(*lp.range(i));
    for (int s = 0; s < 2000; ++s) {
      Eigen::VectorXd r(n);
      for (int c = 0; c < n; ++c) r[c] = testkit::uniform(rng, -1, 1);
      const Eigen::VectorXd pr = P * r;
      bool inside = true;
      for (int j = 0; j < k; ++j) inside = inside && bounds[j].contains(pr[j]);
      if (!inside) continue;
      for (int i = 0; i < n; ++i) EXPECT_TRUE(ranges[i].contains(r[i], 1e-9));
    }
  }
}
