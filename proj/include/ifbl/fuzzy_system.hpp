#pragma once

// Intuitionistic fuzzy view system P r = V.
//
// Each view V_j is a trapezoidal IFN, so every membership level set and every
// nonmembership level set of V_j is an interval. A return vector reaches
// membership level alpha exactly when p_j' r lies in the alpha-cut of every
// V_j, i.e. when r lies in an interval-constrained polyhedron. Projecting that
// polyhedron onto asset i gives the alpha-cut of the posterior for asset i;
// the projection already ranges over the whole null space of P, which is the
// union over every particular solution of the system.

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "ifbl/error.hpp"
#include "ifbl/ifs.hpp"
#include "ifbl/simplex.hpp"

namespace ifbl {

inline constexpr int kDefaultLevels = 101;

struct IfsViewSet {
  Eigen::MatrixXd pick_matrix;  // k x n
  std::vector<TrapezoidalIfn> views;

  Eigen::Index count() const { return pick_matrix.rows(); }
};

void validate(const IfsViewSet& views, Eigen::Index asset_count);

struct SolutionFamilyInfo {
  Eigen::Index rank = 0;
  Eigen::Index null_dimension = 0;
  /// Feasibility of the membership polyhedron per alpha level (same order as
  /// LevelCutReport::alpha_levels). Empty when produced by family_info alone.
  std::vector<bool> particular_feasible;
};

struct AssetCuts {
  std::vector<std::optional<Interval>> membership;     // per alpha level
  std::vector<std::optional<Interval>> nonmembership;  // per beta level
  /// Every feasible membership cut touches the box on at least one side.
  bool box_limited = false;
};

struct LevelCutReport {
  /// 0, 1/L, ..., 1. Level 0 is the closed support of the views and only
  /// anchors the interpolation between 0 and 1/L.
  std::vector<double> alpha_levels;
  /// 0, 1/L, ..., 1. Level 1 is the closed support of 1 - nu.
  std::vector<double> beta_levels;
  std::vector<AssetCuts> assets;
  bool box_warning = false;
};

struct SystemSolution {
  std::vector<IfsOnReals> surfaces;
  LevelCutReport report;
  SolutionFamilyInfo family;
};

/// Raised when the membership polyhedron is empty already at the lowest
/// positive level.
class InfeasibleViewsError : public Error {
 public:
  explicit InfeasibleViewsError(double level);
  double level() const noexcept { return level_; }

 private:
  double level_;
};

/// Rank of P by SVD with singular values below 1e-10 * sigma_max dropped.
SolutionFamilyInfo family_info(const Eigen::MatrixXd& pick_matrix);

SystemSolution solve_system(const IfsViewSet& views, const SolutionBox& box,
                            int levels = kDefaultLevels,
                            std::size_t grid_resolution = kDefaultGridResolution);

}  // namespace ifbl
