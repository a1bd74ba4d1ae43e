#include "relkit/error_measures.hpp"

#include <cmath>

#include "relkit/errors.hpp"
#include "relkit/stats.hpp"

namespace relkit {

double rrmse(const Eigen::MatrixXd& eap, const Eigen::MatrixXd& eta) {
  if (eap.rows() != eta.rows() || eap.cols() != eta.cols()) {
    throw InvalidArgument("rrmse: shape mismatch");
  }
  const double denom = eta.array().square().sum();
  if (!(denom > 0.0)) throw DegenerateInput("rrmse: all-zero latent matrix");
  const double num = (eap - eta).array().square().sum();
  return std::sqrt(num / denom);
}

double rae(const Eigen::MatrixXd& eap, double target_corr) {
  if (eap.cols() != 2) throw InvalidArgument("rae: expected 2 columns");
  if (eap.rows() < 3) throw InvalidArgument("rae: need at least 3 rows");
  if (target_corr == 0.0) throw InvalidArgument("rae: target correlation must be nonzero");
  const double corr = pearson_correlation(eap.col(0), eap.col(1));
  return std::abs(corr - target_corr) / std::abs(target_corr);
}

}  // namespace relkit
