#pragma once

// Coordinate projection of interval-constrained linear systems.
//
// The feasible set is the polyhedron
//     { r : lo_j <= p_j' r <= hi_j for every row j,  L <= r <= U }
// and the solver reports the range of one coordinate r_i over it. The LP is
// solved with a dense bounded-variable primal simplex using Bland's rule.

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ifbl/ifs.hpp"

namespace ifbl {

/// Global bounding box [lower, upper] for the return vector.
struct SolutionBox {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index size() const { return lower.size(); }
  static SolutionBox uniform(Eigen::Index n, double lo, double hi);
};

/// Throws validation.config unless lower < upper elementwise and sizes match.
void validate(const SolutionBox& box, Eigen::Index asset_count);

/// Reusable projection problem: phase one runs once, every coordinate range
/// then starts from the same feasible basis.
class ProjectionLp {
 public:
  ProjectionLp(const Eigen::MatrixXd& pick_matrix, std::span<const Interval> row_bounds,
               const SolutionBox& box);
  ~ProjectionLp();
  ProjectionLp(ProjectionLp&&) noexcept;
  ProjectionLp& operator=(ProjectionLp&&) noexcept;

  bool feasible() const { return feasible_; }

  /// Range of r_i over the polyhedron; nullopt when it is empty.
  std::optional<Interval> range(Eigen::Index coordinate) const;

  /// One feasible point (nullopt when empty).
  std::optional<Eigen::VectorXd> feasible_point() const;

 private:
  struct Tableau;
  std::unique_ptr<Tableau> tableau_;
  bool feasible_ = false;
};

/// min and max of r_i over the polyhedron, or nullopt when infeasible.
/// Throws numeric.solver_failure if the iteration guard trips.
std::optional<Interval> lp_minmax(Eigen::Index objective_index, const Eigen::MatrixXd& pick_matrix,
                                  std::span<const Interval> row_bounds, const SolutionBox& box);

}  // namespace ifbl
