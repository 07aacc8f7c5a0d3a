#include "ifbl/blm.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ifbl/error.hpp"

namespace ifbl {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string index_path(const std::string& base, Eigen::Index i, Eigen::Index j) {
  return base + "[" + std::to_string(i) + "][" + std::to_string(j) + "]";
}

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

Eigen::LLT<Eigen::MatrixXd> factor_or_throw(const Eigen::MatrixXd& m, const std::string& what,
                                            ErrorKind kind, std::string_view code) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw Error(kind, code,
                "Cholesky factorization failed (matrix not positive definite); smallest "
                "eigenvalue estimate " +
                    fmt_double(smallest_eigenvalue(m)),
                what);
  }
  return llt;
}

}  // namespace

void require_spd(const Eigen::MatrixXd& matrix, const std::string& what) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "must be a non-empty square matrix, got " + std::to_string(matrix.rows()) + "x" +
                    std::to_string(matrix.cols()),
                what);
  }
  if (!matrix.allFinite()) {
    throw Error(ErrorKind::Validation, codes::kParameter, "contains non-finite entries", what);
  }
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < matrix.cols(); ++j) {
      if (std::abs(matrix(i, j) - matrix(j, i)) > kSymmetryTolerance) {
        throw Error(ErrorKind::Validation, codes::kSigmaNotSymmetric,
                    "not symmetric: " + index_path(what, i, j) + "=" + fmt_double(matrix(i, j)) +
                        " but " + index_path(what, j, i) + "=" + fmt_double(matrix(j, i)),
                    what);
      }
    }
  }
  factor_or_throw(matrix, what, ErrorKind::Validation, codes::kSigmaNotSpd);
}

void validate(const MarketModel& model) {
  const auto n = model.weights.size();
  if (n == 0) {
    throw Error(ErrorKind::InputShape, codes::kShape, "at least one asset is required", "weights");
  }
  if (model.sigma.rows() != n || model.sigma.cols() != n) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "sigma is " + std::to_string(model.sigma.rows()) + "x" +
                    std::to_string(model.sigma.cols()) + " but there are " + std::to_string(n) +
                    " weights",
                "sigma");
  }
  if (static_cast<Eigen::Index>(model.asset_names.size()) != n) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                std::to_string(model.asset_names.size()) + " names for " + std::to_string(n) +
                    " assets",
                "assets");
  }
  require_spd(model.sigma, "sigma");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(model.weights[i]) || model.weights[i] < 0.0) {
      throw Error(ErrorKind::Validation, codes::kWeights, "weights must be finite and >= 0",
                  "weights[" + std::to_string(i) + "]");
    }
  }
  // A few ulps of slack so a sum written as 1 - 1e-9 is accepted.
  if (std::abs(model.weights.sum() - 1.0) > kWeightSumTolerance + 8 * kEps) {
    throw Error(ErrorKind::Validation, codes::kWeights,
                "weights must sum to 1 (got " + fmt_double(model.weights.sum()) + ")", "weights");
  }
  if (!(model.risk_aversion > 0.0) || !std::isfinite(model.risk_aversion)) {
    throw Error(ErrorKind::Validation, codes::kParameter, "risk aversion must be > 0",
                "risk_aversion");
  }
  if (!(model.tau > 0.0) || !std::isfinite(model.tau)) {
    throw Error(ErrorKind::Validation, codes::kParameter, "tau must be > 0", "tau");
  }
}

void validate(const CrispViewSet& views, Eigen::Index asset_count) {
  const auto k = views.pick_matrix.rows();
  if (k == 0) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "at least one view is required (use the no-view overload otherwise)", "P");
  }
  if (views.pick_matrix.cols() != asset_count) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "P has " + std::to_string(views.pick_matrix.cols()) + " columns for " +
                    std::to_string(asset_count) + " assets",
                "P");
  }
  if (views.means.size() != k || views.variances.size() != k) {
    throw Error(ErrorKind::InputShape, codes::kShape,
                "omega and zeta2 must have one entry per row of P", "omega");
  }
  for (Eigen::Index j = 0; j < k; ++j) {
    if (views.pick_matrix.row(j).isZero(0.0)) {
      throw Error(ErrorKind::Validation, codes::kViews, "all-zero pick row",
                  "P[" + std::to_string(j) + "]");
    }
    if (!(views.variances[j] > 0.0) || !std::isfinite(views.variances[j])) {
      throw Error(ErrorKind::Validation, codes::kViews, "view variance must be > 0",
                  "zeta2[" + std::to_string(j) + "]");
    }
  }
}

GaussianPrior reverse_optimize(const MarketModel& model) {
  validate(model);
  return GaussianPrior{model.risk_aversion * (model.sigma * model.weights), model.sigma};
}

PosteriorDistribution posterior_classic(const GaussianPrior& prior, double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::Validation, codes::kParameter, "tau must be > 0", "tau");
  }
  if (prior.mean.size() != prior.covariance.rows()) {
    throw Error(ErrorKind::InputShape, codes::kShape, "prior mean/covariance size mismatch",
                "prior");
  }
  require_spd(prior.covariance, "sigma");
  return PosteriorDistribution{prior.mean, tau * prior.covariance};
}

PosteriorDistribution posterior_classic(const GaussianPrior& prior, const CrispViewSet& views,
                                        double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorKind::Validation, codes::kParameter, "tau must be > 0", "tau");
  }
  const auto n = prior.mean.size();
  if (prior.covariance.rows() != n) {
    throw Error(ErrorKind::InputShape, codes::kShape, "prior mean/covariance size mismatch",
                "prior");
  }
  validate(views, n);

  const Eigen::MatrixXd scaled = tau * prior.covariance;
  require_spd(scaled, "tau*sigma");

  // Precision form ((tau S)^-1 + P' X^-1 P)^-1 rewritten through the
  // matrix inversion lemma so only the k x k innovation matrix is factored:
  //   Sigma_BL = tau S - (P tau S)' M^-1 (P tau S),  M = P tau S P' + X
  //   pi_BL    = pi + (P tau S)' M^-1 (omega - P pi)
  const Eigen::MatrixXd& P = views.pick_matrix;
  const Eigen::MatrixXd ps = P * scaled;  // k x n
  Eigen::MatrixXd innovation = ps * P.transpose();
  innovation.diagonal() += views.variances;
  auto llt = factor_or_throw(innovation, "innovation", ErrorKind::Conditioning,
                             codes::kConditioning);

  const Eigen::MatrixXd gain_t = llt.solve(ps);  // M^-1 P tau S, k x n
  Eigen::MatrixXd covariance = scaled - ps.transpose() * gain_t;
  covariance = 0.5 * (covariance + covariance.transpose()).eval();

  const Eigen::VectorXd residual = views.means - P * prior.mean;
  Eigen::VectorXd mean = prior.mean + gain_t.transpose() * residual;

  Eigen::LLT<Eigen::MatrixXd> check(covariance);
  if (check.info() != Eigen::Success) {
    throw Error(ErrorKind::Conditioning, codes::kConditioning,
                "posterior covariance is numerically indefinite; smallest eigenvalue estimate " +
                    fmt_double(smallest_eigenvalue(covariance)),
                "posterior.covariance");
  }
  return PosteriorDistribution{std::move(mean), std::move(covariance)};
}

Eigen::VectorXd optimal_weights(const PosteriorDistribution& posterior, double risk_aversion) {
  if (!(risk_aversion > 0.0)) {
    throw Error(ErrorKind::Validation, codes::kParameter, "risk aversion must be > 0",
                "risk_aversion");
  }
  if (posterior.covariance.rows() != posterior.mean.size() ||
      posterior.covariance.cols() != posterior.mean.size()) {
    throw Error(ErrorKind::InputShape, codes::kShape, "posterior mean/covariance size mismatch",
                "posterior");
  }
  auto llt = factor_or_throw(risk_aversion * posterior.covariance, "posterior.covariance",
                             ErrorKind::Conditioning, codes::kConditioning);
  const Eigen::VectorXd diag = llt.matrixLLT().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 1e-7 * diag.maxCoeff()) {
    throw Error(ErrorKind::Conditioning, codes::kConditioning,
                "posterior covariance is numerically singular; smallest eigenvalue estimate " +
                    fmt_double(smallest_eigenvalue(posterior.covariance)),
                "posterior.covariance");
  }
  return llt.solve(posterior.mean);
}

}  // namespace ifbl
