#pragma once

#include <Eigen/Dense>

namespace relkit {

/// Nonparametric regression settings shared by every coefficient-of-determination
/// style estimator.
struct SmootherConfig {
  enum class Method { kLocalLinear, kKnnMean };
  enum class Kernel { kTricube, kUniform };

  Method method = Method::kLocalLinear;
  double span = 0.75;  ///< fraction of points per local fit (local-linear)
  int k = 25;          ///< neighbor count (k-nn-mean)
  Kernel kernel = Kernel::kTricube;

  void validate() const;
};

/// Local regression estimate of E[u | x_i] at every sample point. Predictor
/// columns are standardized to unit variance before distances are computed.
/// Requires n >= 10 p and p in {1, 2}.
Eigen::VectorXd fit_predict(const Eigen::MatrixXd& x, const Eigen::VectorXd& u,
                            const SmootherConfig& config);

}  // namespace relkit
