#include "ifbl/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ifbl/error.hpp"

namespace ifbl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr double kTieTol = 1e-14;

}  // namespace

SolutionBox SolutionBox::uniform(Eigen::Index n, double lo, double hi) {
  return SolutionBox{Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
}

void validate(const SolutionBox& box, Eigen::Index asset_count) {
  if (box.lower.size() != asset_count || box.upper.size() != asset_count) {
    throw Error(ErrorKind::InputShape, codes::kConfig,
                "box has " + std::to_string(box.lower.size()) + "/" +
                    std::to_string(box.upper.size()) + " bounds for " +
                    std::to_string(asset_count) + " assets",
                "box");
  }
  for (Eigen::Index i = 0; i < asset_count; ++i) {
    if (!std::isfinite(box.lower[i]) || !std::isfinite(box.upper[i]) ||
        !(box.lower[i] < box.upper[i])) {
      throw Error(ErrorKind::Validation, codes::kConfig, "box requires finite lower < upper",
                  "box[" + std::to_string(i) + "]");
    }
  }
}

// Dense tableau B^-1 A for A x = 0 with bounds on every variable.
// Columns: r (n) | s (k, s_j = p_j' r) | artificial (k).
struct ProjectionLp::Tableau {
  Eigen::Index n = 0;
  Eigen::Index k = 0;
  Eigen::MatrixXd t;                // k x (n + 2k)
  std::vector<double> lower, upper, x;
  std::vector<Eigen::Index> basis;  // row -> variable
  std::vector<Eigen::Index> row_of; // variable -> row, -1 when nonbasic
  std::vector<bool> at_upper;       // nonbasic position

  Eigen::Index cols() const { return t.cols(); }

  void pivot(Eigen::Index row, Eigen::Index col) {
    const double p = t(row, col);
    t.row(row) /= p;
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i == row) continue;
      const double f = t(i, col);
      if (f != 0.0) t.row(i) -= f * t.row(row);
    }
    const Eigen::Index leaving = basis[static_cast<std::size_t>(row)];
    row_of[static_cast<std::size_t>(leaving)] = -1;
    basis[static_cast<std::size_t>(row)] = col;
    row_of[static_cast<std::size_t>(col)] = row;
  }

  // Minimizes cost' x from the current basic feasible point. Bland's rule for
  // both the entering and the leaving choice.
  void minimize(const std::vector<double>& cost) {
    const Eigen::Index m = t.rows();
    const Eigen::Index total = cols();
    const long guard = 20000 + 200 * static_cast<long>(m + total);
    for (long iter = 0;; ++iter) {
      if (iter > guard) {
        throw Error(ErrorKind::SolverFailure, codes::kSolverFailure,
                    "simplex iteration guard exceeded (" + std::to_string(guard) + ")", "lp");
      }
      Eigen::Index entering = -1;
      double direction = 0.0;
      for (Eigen::Index j = 0; j < total; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (row_of[ju] >= 0 || !(upper[ju] > lower[ju])) continue;
        double d = cost[ju];
        for (Eigen::Index r = 0; r < m; ++r) {
          d -= cost[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] * t(r, j);
        }
        if (!at_upper[ju] && d < -kCostTol) {
          entering = j;
          direction = 1.0;
          break;
        }
        if (at_upper[ju] && d > kCostTol) {
          entering = j;
          direction = -1.0;
          break;
        }
      }
      if (entering < 0) return;

      const auto eu = static_cast<std::size_t>(entering);
      double best = kInf;
      Eigen::Index leave_row = -1;
      Eigen::Index leave_var = std::numeric_limits<Eigen::Index>::max();
      for (Eigen::Index r = 0; r < m; ++r) {
        const double a = t(r, entering) * direction;
        const auto b = static_cast<std::size_t>(basis[static_cast<std::size_t>(r)]);
        double lim = kInf;
        if (a > kPivotTol) {
          lim = (x[b] - lower[b]) / a;
        } else if (a < -kPivotTol && std::isfinite(upper[b])) {
          lim = (upper[b] - x[b]) / (-a);
        } else {
          continue;
        }
        lim = std::max(lim, 0.0);
        const auto bi = static_cast<Eigen::Index>(b);
        if (lim < best - kTieTol || (lim <= best + kTieTol && bi < leave_var)) {
          best = std::min(best, lim);
          leave_row = r;
          leave_var = bi;
        }
      }
      const double flip = upper[eu] - lower[eu];
      if (!std::isfinite(flip) && leave_row < 0) {
        throw Error(ErrorKind::SolverFailure, codes::kSolverFailure, "unbounded ray in bounded LP",
                    "lp");
      }
      if (flip <= best) {
        for (Eigen::Index r = 0; r < m; ++r) {
          x[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] -=
              t(r, entering) * direction * flip;
        }
        at_upper[eu] = !at_upper[eu];
        x[eu] = at_upper[eu] ? upper[eu] : lower[eu];
        continue;
      }
      for (Eigen::Index r = 0; r < m; ++r) {
        x[static_cast<std::size_t>(basis[static_cast<std::size_t>(r)])] -=
            t(r, entering) * direction * best;
      }
      x[eu] += direction * best;
      const auto lv = static_cast<std::size_t>(leave_var);
      const bool to_upper = t(leave_row, entering) * direction < 0.0;
      x[lv] = to_upper ? upper[lv] : lower[lv];
      at_upper[lv] = to_upper;
      pivot(leave_row, entering);
    }
  }
};

ProjectionLp::ProjectionLp(const Eigen::MatrixXd& pick_matrix,
                           std::span<const Interval> row_bounds, const SolutionBox& box)
    : tableau_(std::make_unique<Tableau>()) {
  const Eigen::Index k = pick_matrix.rows();
  const Eigen::Index n = pick_matrix.cols();
  if (static_cast<Eigen::Index>(row_bounds.size()) != k) {
    throw Error(ErrorKind::InputShape, codes::kShape, "one interval per pick row is required",
                "row_bounds");
  }
  validate(box, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto& rb = row_bounds[static_cast<std::size_t>(j)];
    if (!(rb.lo <= rb.hi) || !std::isfinite(rb.lo) || !std::isfinite(rb.hi)) {
      throw Error(ErrorKind::Validation, codes::kViews, "row interval must satisfy lo <= hi",
                  "row_bounds[" + std::to_string(j) + "]");
    }
  }

  auto& tb = *tableau_;
  tb.n = n;
  tb.k = k;
  const Eigen::Index total = n + 2 * k;
  const auto tu = static_cast<std::size_t>(total);
  tb.t = Eigen::MatrixXd::Zero(k, total);
  tb.lower.assign(tu, 0.0);
  tb.upper.assign(tu, 0.0);
  tb.x.assign(tu, 0.0);
  tb.row_of.assign(tu, -1);
  tb.at_upper.assign(tu, false);
  tb.basis.assign(static_cast<std::size_t>(k), -1);

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    tb.lower[iu] = box.lower[i];
    tb.upper[iu] = box.upper[i];
    tb.x[iu] = box.lower[i];
  }

  std::vector<double> phase_one(tu, 0.0);
  bool need_phase_one = false;
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto s = static_cast<std::size_t>(n + j);
    const auto a = static_cast<std::size_t>(n + k + j);
    const auto& rb = row_bounds[static_cast<std::size_t>(j)];
    tb.lower[s] = rb.lo;
    tb.upper[s] = rb.hi;
    const double value = pick_matrix.row(j).dot(box.lower);
    if (value >= rb.lo && value <= rb.hi) {
      // s_j basic: s_j - p_j' r = 0
      tb.t.row(j).head(n) = -pick_matrix.row(j);
      tb.t(j, n + j) = 1.0;
      tb.t(j, n + k + j) = -1.0;
      tb.x[s] = value;
      tb.lower[a] = tb.upper[a] = 0.0;
      tb.basis[static_cast<std::size_t>(j)] = n + j;
      tb.row_of[s] = j;
    } else {
      const bool above = value > rb.hi;
      const double bound = above ? rb.hi : rb.lo;
      tb.x[s] = bound;
      tb.at_upper[s] = above;
      // sign * a_j = s_j - p_j' r, scaled so the artificial column is +1
      const double sign = bound > value ? 1.0 : -1.0;
      tb.t.row(j).head(n) = pick_matrix.row(j) / sign;
      tb.t(j, n + j) = -1.0 / sign;
      tb.t(j, n + k + j) = 1.0;
      tb.lower[a] = 0.0;
      tb.upper[a] = kInf;
      tb.x[a] = std::abs(bound - value);
      tb.basis[static_cast<std::size_t>(j)] = n + k + j;
      tb.row_of[a] = j;
      phase_one[a] = 1.0;
      need_phase_one = true;
    }
  }

  if (need_phase_one) {
    tb.minimize(phase_one);
    double infeasibility = 0.0;
    double scale = 1.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto& rb = row_bounds[static_cast<std::size_t>(j)];
      infeasibility += tb.x[static_cast<std::size_t>(n + k + j)];
      scale = std::max({scale, std::abs(rb.lo), std::abs(rb.hi)});
    }
    scale = std::max({scale, box.lower.cwiseAbs().maxCoeff(), box.upper.cwiseAbs().maxCoeff()});
    if (infeasibility > 1e-9 * scale) {
      feasible_ = false;
      return;
    }
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto a = static_cast<std::size_t>(n + k + j);
    tb.upper[a] = 0.0;
    tb.lower[a] = 0.0;
    if (tb.row_of[a] < 0) {
      tb.x[a] = 0.0;
      tb.at_upper[a] = false;
    }
  }
  feasible_ = true;
}

ProjectionLp::~ProjectionLp() = default;
ProjectionLp::ProjectionLp(ProjectionLp&&) noexcept = default;
ProjectionLp& ProjectionLp::operator=(ProjectionLp&&) noexcept = default;

std::optional<Interval> ProjectionLp::range(Eigen::Index coordinate) const {
  if (!feasible_) return std::nullopt;
  const auto& base = *tableau_;
  if (coordinate < 0 || coordinate >= base.n) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "objective index " + std::to_string(coordinate) + " out of range",
                "objective_index");
  }
  const auto cu = static_cast<std::size_t>(coordinate);
  std::vector<double> cost(base.x.size(), 0.0);
  double ends[2];
  for (int side = 0; side < 2; ++side) {
    Tableau work = base;
    cost[cu] = side == 0 ? 1.0 : -1.0;
    work.minimize(cost);
    ends[side] = std::clamp(work.x[cu], work.lower[cu], work.upper[cu]);
  }
  return Interval{ends[0], std::max(ends[0], ends[1])};
}

std::optional<Eigen::VectorXd> ProjectionLp::feasible_point() const {
  if (!feasible_) return std::nullopt;
  const auto& tb = *tableau_;
  Eigen::VectorXd r(tb.n);
  for (Eigen::Index i = 0; i < tb.n; ++i) r[i] = tb.x[static_cast<std::size_t>(i)];
  return r;
}

std::optional<Interval> lp_minmax(Eigen::Index objective_index, const Eigen::MatrixXd& pick_matrix,
                                  std::span<const Interval> row_bounds, const SolutionBox& box) {
  ProjectionLp lp(pick_matrix, row_bounds, box);
  return lp.range(objective_index);
}

}  // namespace ifbl
