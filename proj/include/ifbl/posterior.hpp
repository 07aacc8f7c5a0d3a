#pragma once

// Intuitionistic fuzzy probabilistic posterior.
//
// The view system does not depend on the market state, so every asset
// surface is the same for every state. The probability measure over states
// is the equilibrium Gaussian prior, carried alongside as a Cholesky factor
// and exposed through a seeded sampler.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ifbl/blm.hpp"
#include "ifbl/fuzzy_system.hpp"
#include "ifbl/ifs.hpp"

namespace ifbl {

struct PriorMeasure {
  GaussianPrior prior;
  Eigen::MatrixXd factor;  // lower triangular, covariance = factor * factor'
};

PriorMeasure make_prior_measure(const GaussianPrior& prior);

struct PosteriorResult {
  std::vector<std::string> assets;
  std::vector<IfsOnReals> surfaces;
  std::vector<MeasureTriple> measures;
  SolutionFamilyInfo family;
  PriorMeasure prior_measure;
  LevelCutReport level_report;
};

PosteriorResult build_posterior(const MarketModel& market, const IfsViewSet& views,
                                const SolutionBox& box, int levels = kDefaultLevels,
                                std::size_t grid_resolution = kDefaultGridResolution);

/// count x n matrix of draws pi + L z with z standard normal.
Eigen::MatrixXd sample_prior(const PriorMeasure& measure, std::size_t count, std::uint64_t seed);

struct FunctionTable {
  std::vector<double> x;
  std::vector<double> value;
};

/// Grid and E_omega[rho_i(x, omega)] under the empirical measure of `samples`.
FunctionTable expected_membership(const PosteriorResult& result, std::size_t asset,
                                  const Eigen::MatrixXd& samples);

/// Crisp stand-in for a trapezoidal view: centroid mean and W^2 / 24
/// variance, W the mean width of the membership trapezoid, floored at 1e-12.
struct CrispenedView {
  double mean = 0.0;
  double variance = 0.0;
};
inline constexpr double kCrispVarianceFloor = 1e-12;
CrispenedView crispen(const TrapezoidalIfn& view);

CrispViewSet crispen(const IfsViewSet& views);

/// Classical posterior for the crispened views with the market's tau.
PosteriorDistribution classic_comparison(const MarketModel& market, const IfsViewSet& views);

}  // namespace ifbl
