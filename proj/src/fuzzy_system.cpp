#include "ifbl/fuzzy_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace ifbl {
namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Cuts over a level parameter g in {0, 1/L, ..., 1}, nested decreasing in g.
// Entries past the last feasible level are dropped.
struct NestedCuts {
  std::vector<double> lefts;   // nondecreasing
  std::vector<double> rights;  // nonincreasing
  double step = 0.0;

  bool empty() const { return lefts.empty(); }
  std::size_t top() const { return lefts.size() - 1; }

  void enforce_nesting() {
    for (std::size_t m = 1; m < lefts.size(); ++m) {
      lefts[m] = std::max(lefts[m], lefts[m - 1]);
      rights[m] = std::min(rights[m], rights[m - 1]);
    }
    for (std::size_t m = 0; m < lefts.size(); ++m) {
      if (lefts[m] > rights[m]) rights[m] = lefts[m];
    }
  }

  // sup { g : x in cut(g) } with the cut endpoints linearly interpolated
  // between sampled levels; negative when x lies outside cut(0).
  double level(double x, double tol) const {
    const double from_left = side_level(lefts, x, tol);
    std::vector<double> neg(rights.size());
    std::transform(rights.begin(), rights.end(), neg.begin(), [](double v) { return -v; });
    const double from_right = side_level(neg, -x, tol);
    return std::min({from_left, from_right, 1.0});
  }

 private:
  double side_level(const std::vector<double>& ends, double x, double tol) const {
    if (x < ends.front()) return x >= ends.front() - tol ? 0.0 : -1.0;
    auto it = std::upper_bound(ends.begin(), ends.end(), x);
    const auto m = static_cast<std::size_t>(it - ends.begin()) - 1;
    if (m == ends.size() - 1) return static_cast<double>(m) * step;
    const double frac = (x - ends[m]) / (ends[m + 1] - ends[m]);
    return (static_cast<double>(m) + std::clamp(frac, 0.0, 1.0)) * step;
  }
};

std::vector<Eigen::Index> canonical_row_order(const IfsViewSet& views) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(views.count()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto key_less = [&](Eigen::Index a, Eigen::Index b) {
    const auto& P = views.pick_matrix;
    for (Eigen::Index c = 0; c < P.cols(); ++c) {
      if (P(a, c) != P(b, c)) return P(a, c) < P(b, c);
    }
    const auto& va = views.views[static_cast<std::size_t>(a)];
    const auto& vb = views.views[static_cast<std::size_t>(b)];
    if (va.mu_knots() != vb.mu_knots()) return va.mu_knots() < vb.mu_knots();
    return va.co_knots() < vb.co_knots();
  };
  std::stable_sort(order.begin(), order.end(), key_less);
  return order;
}

}  // namespace

InfeasibleViewsError::InfeasibleViewsError(double level)
    : Error(ErrorKind::Infeasible, codes::kInfeasible,
            "inconsistent views: the membership cut polyhedron is empty at level alpha=" +
                fmt(level),
            "views"),
      level_(level) {}

void validate(const IfsViewSet& views, Eigen::Index asset_count) {
  const auto k = views.pick_matrix.rows();
  if (k < 1) {
    throw Error(ErrorKind::InputShape, codes::kShape, "at least one view is required", "P");
  }
  if (views.pick_matrix.cols() != asset_count) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "P has " + std::to_string(views.pick_matrix.cols()) + " columns for " +
                    std::to_string(asset_count) + " assets",
                "P");
  }
  if (static_cast<Eigen::Index>(views.views.size()) != k) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                std::to_string(views.views.size()) + " views for " + std::to_string(k) +
                    " rows of P",
                "views");
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (!views.pick_matrix.row(j).allFinite()) {
      throw Error(ErrorKind::Validation, codes::kViews, "non-finite pick entry",
                  "P[" + std::to_string(j) + "]");
    }
    if (views.pick_matrix.row(j).isZero(0.0)) {
      throw Error(ErrorKind::Validation, codes::kViews, "all-zero pick row",
                  "P[" + std::to_string(j) + "]");
    }
  }
}

SolutionFamilyInfo family_info(const Eigen::MatrixXd& pick_matrix) {
  SolutionFamilyInfo info;
  const auto n = pick_matrix.cols();
  if (pick_matrix.size() == 0) {
    info.null_dimension = n;
    return info;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pick_matrix);
  const auto& sv = svd.singularValues();
  const double cutoff = 1e-10 * sv.maxCoeff();
  info.rank = (sv.array() > cutoff).count();
  info.null_dimension = n - info.rank;
  return info;
}

SystemSolution solve_system(const IfsViewSet& views, const SolutionBox& box, int levels,
                            std::size_t grid_resolution) {
  const auto n = views.pick_matrix.cols();
  validate(views, n);
  validate(box, n);
  if (levels < 2) {
    throw Error(ErrorKind::Validation, codes::kConfig, "levels must be >= 2", "levels");
  }
  if (grid_resolution < 2) {
    throw Error(ErrorKind::Validation, codes::kConfig, "grid_resolution must be >= 2",
                "grid_resolution");
  }

  // Row order does not change the polyhedron; a canonical order makes the
  // pivot sequence, and therefore every bit of the output, order-free.
  const auto order = canonical_row_order(views);
  const auto k = views.count();
  Eigen::MatrixXd P(k, n);
  std::vector<const TrapezoidalIfn*> rows(static_cast<std::size_t>(k));
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto src = order[static_cast<std::size_t>(j)];
    P.row(j) = views.pick_matrix.row(src);
    rows[static_cast<std::size_t>(j)] = &views.views[static_cast<std::size_t>(src)];
  }

  const auto L = static_cast<std::size_t>(levels);
  const double step = 1.0 / static_cast<double>(levels);
  auto level_value = [&](std::size_t m) { return m == L ? 1.0 : static_cast<double>(m) * step; };

  SystemSolution out;
  out.family = family_info(views.pick_matrix);
  auto& report = out.report;
  report.alpha_levels.resize(L + 1);
  report.beta_levels.resize(L + 1);
  for (std::size_t m = 0; m <= L; ++m) report.alpha_levels[m] = report.beta_levels[m] = level_value(m);
  report.assets.resize(static_cast<std::size_t>(n));
  for (auto& a : report.assets) {
    a.membership.assign(L + 1, std::nullopt);
    a.nonmembership.assign(L + 1, std::nullopt);
  }
  out.family.particular_feasible.assign(L + 1, false);

  std::vector<NestedCuts> member(static_cast<std::size_t>(n));
  std::vector<NestedCuts> comember(static_cast<std::size_t>(n));  // over gamma = 1 - beta
  std::vector<Interval> bounds(static_cast<std::size_t>(k));

  // Membership: alpha increasing, stop at the first empty polyhedron (cuts
  // are nested so every higher level is empty too).
  for (std::size_t m = 0; m <= L; ++m) {
    const double alpha = level_value(m);
    for (Eigen::Index j = 0; j < k; ++j) {
      bounds[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j)]->alpha_cut(alpha);
    }
    ProjectionLp lp(P, bounds, box);
    if (!lp.feasible()) break;
    out.family.particular_feasible[m] = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const auto cut = *lp.range(i);
      report.assets[iu].membership[m] = cut;
      member[iu].lefts.push_back(cut.lo);
      member[iu].rights.push_back(cut.hi);
    }
  }
  if (!out.family.particular_feasible[1]) {
    throw InfeasibleViewsError(report.alpha_levels[1]);
  }

  // Nonmembership: beta decreasing from the support anchor beta = 1.
  for (std::size_t q = 0; q <= L; ++q) {
    const std::size_t m = L - q;
    const double beta = level_value(m);
    for (Eigen::Index j = 0; j < k; ++j) {
      bounds[static_cast<std::size_t>(j)] = rows[static_cast<std::size_t>(j)]->beta_cut(beta);
    }
    ProjectionLp lp(P, bounds, box);
    if (!lp.feasible()) break;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto iu = static_cast<std::size_t>(i);
      const auto cut = *lp.range(i);
      report.assets[iu].nonmembership[m] = cut;
      comember[iu].lefts.push_back(cut.lo);
      comember[iu].rights.push_back(cut.hi);
    }
  }

  out.surfaces.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto iu = static_cast<std::size_t>(i);
    auto& mc = member[iu];
    auto& cc = comember[iu];
    mc.step = cc.step = step;
    mc.enforce_nesting();
    cc.enforce_nesting();

    const double scale = std::max({1.0, std::abs(box.lower[i]), std::abs(box.upper[i])});
    const double tol = 1e-12 * scale;

    bool limited = true;
    for (std::size_t m = 1; m <= mc.top(); ++m) {
      const bool touches = mc.lefts[m] <= box.lower[i] + tol || mc.rights[m] >= box.upper[i] - tol;
      limited = limited && touches;
    }
    report.assets[iu].box_limited = limited;
    report.box_warning = report.box_warning || limited;

    // Hull of the widest nonmembership cut (contains every membership cut).
    double lo = cc.lefts.front();
    double hi = cc.rights.front();
    if (hi - lo <= tol) {
      const double pad = 1e-6 * std::max(1.0, std::abs(lo));
      lo = std::max(box.lower[i], lo - pad);
      hi = std::min(box.upper[i], hi + pad);
    }
    const double extra[] = {mc.lefts.front(), mc.rights.front(), mc.lefts.back(),
                            mc.rights.back(), cc.lefts.back(),   cc.rights.back()};
    auto grid = merged_grid(lo, hi, grid_resolution, extra);

    std::vector<double> mu(grid.size());
    std::vector<double> nu(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double x = grid[g];
      const double rho = std::max(0.0, mc.level(x, tol));
      const double gamma = std::max(0.0, cc.level(x, tol));
      mu[g] = rho;
      // gamma >= rho follows from cut containment; the min absorbs LP
      // rounding at shared cut endpoints.
      nu[g] = std::min(1.0 - gamma, 1.0 - rho);
    }
    out.surfaces.push_back(make_ifs(std::move(grid), std::move(mu), std::move(nu)));
  }
  return out;
}

}  // namespace ifbl
