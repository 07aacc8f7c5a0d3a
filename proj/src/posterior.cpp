#include "ifbl/posterior.hpp"

#include <algorithm>
#include <random>

#include "ifbl/error.hpp"

namespace ifbl {

PriorMeasure make_prior_measure(const GaussianPrior& prior) {
  require_spd(prior.covariance, "sigma");
  if (prior.mean.size() != prior.covariance.rows()) {
    throw Error(ErrorKind::InputShape, codes::kShape, "prior mean/covariance size mismatch",
                "prior");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(prior.covariance);
  return PriorMeasure{prior, llt.matrixL()};
}

PosteriorResult build_posterior(const MarketModel& market, const IfsViewSet& views,
                                const SolutionBox& box, int levels, std::size_t grid_resolution) {
  auto prior = reverse_optimize(market);
  validate(views, market.size());
  auto system = solve_system(views, box, levels, grid_resolution);

  PosteriorResult result;
  result.assets = market.asset_names;
  result.measures.reserve(system.surfaces.size());
  for (const auto& s : system.surfaces) result.measures.push_back(measures(s));
  result.surfaces = std::move(system.surfaces);
  result.family = std::move(system.family);
  result.level_report = std::move(system.report);
  result.prior_measure = make_prior_measure(prior);
  return result;
}

Eigen::MatrixXd sample_prior(const PriorMeasure& measure, std::size_t count, std::uint64_t seed) {
  if (count == 0) {
    throw Error(ErrorKind::Validation, codes::kParameter, "sample count must be >= 1", "count");
  }
  const auto n = measure.prior.mean.size();
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd draws(static_cast<Eigen::Index>(count), n);
  Eigen::VectorXd z(n);
  for (Eigen::Index s = 0; s < draws.rows(); ++s) {
    for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(engine);
    draws.row(s) = (measure.prior.mean + measure.factor.triangularView<Eigen::Lower>() * z).transpose();
  }
  return draws;
}

FunctionTable expected_membership(const PosteriorResult& result, std::size_t asset,
                                  const Eigen::MatrixXd& samples) {
  if (asset >= result.surfaces.size()) {
    throw Error(ErrorKind::NotFound, codes::kNotFound,
                "asset index " + std::to_string(asset) + " out of range", "asset");
  }
  if (samples.rows() == 0) {
    throw Error(ErrorKind::Validation, codes::kNoSamples, "no samples", "samples");
  }
  const auto& surface = result.surfaces[asset];
  // rho_i(x, omega): the surface value for state omega. The view system has no
  // state dependence, so the sampled state only selects the same surface.
  auto rho = [&](std::size_t node, Eigen::Index /*state*/) { return surface.mu()[node]; };

  FunctionTable table;
  table.x = surface.grid();
  table.value.resize(surface.size());
  for (std::size_t g = 0; g < surface.size(); ++g) {
    double mean = 0.0;
    for (Eigen::Index s = 0; s < samples.rows(); ++s) {
      mean += (rho(g, s) - mean) / static_cast<double>(s + 1);
    }
    table.value[g] = mean;
  }
  return table;
}

CrispenedView crispen(const TrapezoidalIfn& view) {
  const auto& [a, b, c, d] = view.mu_knots();
  const double width = ((d - a) + (c - b)) / 2.0;
  return {membership_centroid(view), std::max(width * width / 24.0, kCrispVarianceFloor)};
}

CrispViewSet crispen(const IfsViewSet& views) {
  const auto k = views.count();
  CrispViewSet crisp{views.pick_matrix, Eigen::VectorXd(k), Eigen::VectorXd(k)};
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto cv = crispen(views.views[static_cast<std::size_t>(j)]);
    crisp.means[j] = cv.mean;
    crisp.variances[j] = cv.variance;
  }
  return crisp;
}

PosteriorDistribution classic_comparison(const MarketModel& market, const IfsViewSet& views) {
  auto prior = reverse_optimize(market);
  validate(views, market.size());
  return posterior_classic(prior, crispen(views), market.tau);
}

}  // namespace ifbl
