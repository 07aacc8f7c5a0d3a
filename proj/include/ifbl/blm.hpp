#pragma once

// Classical Black-Litterman mathematics: equilibrium prior by reverse
// optimization, the crisp-view posterior and the mean-variance back-out.
//
// All matrix inverses in the posterior formulas are realized as Cholesky
// factorizations followed by triangular solves.

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace ifbl {

struct MarketModel {
  std::vector<std::string> asset_names;
  Eigen::MatrixXd sigma;    // covariance of excess returns
  Eigen::VectorXd weights;  // market-capitalization weights
  double risk_aversion = 0.0;
  double tau = 0.0;

  Eigen::Index size() const { return weights.size(); }
};

struct GaussianPrior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

/// k crisp views: pick_matrix is k x n, variances is the diagonal of the
/// view covariance (a general dense view covariance is not accepted).
struct CrispViewSet {
  Eigen::MatrixXd pick_matrix;
  Eigen::VectorXd means;
  Eigen::VectorXd variances;

  Eigen::Index count() const { return pick_matrix.rows(); }
};

struct PosteriorDistribution {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kWeightSumTolerance = 1e-9;

/// Throws ifbl::Error (validation.*) on the first violated invariant.
void validate(const MarketModel& model);
void validate(const CrispViewSet& views, Eigen::Index asset_count);

/// Symmetric positive-definite check of a covariance. `what` names the matrix
/// in error messages.
void require_spd(const Eigen::MatrixXd& matrix, const std::string& what);

GaussianPrior reverse_optimize(const MarketModel& model);

PosteriorDistribution posterior_classic(const GaussianPrior& prior, const CrispViewSet& views,
                                        double tau);

/// No-information posterior: (pi, tau * Sigma).
PosteriorDistribution posterior_classic(const GaussianPrior& prior, double tau);

/// Unconstrained mean-variance weights (lambda * Sigma_BL)^-1 * pi_BL.
Eigen::VectorXd optimal_weights(const PosteriorDistribution& posterior, double risk_aversion);

}  // namespace ifbl
