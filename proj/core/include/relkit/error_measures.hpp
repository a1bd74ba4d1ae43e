#pragma once

#include <Eigen/Dense>

namespace relkit {

/// Benchmark error measures for EAP recovery of the latent variables.
struct BenchmarkResult {
  double rrmse = 0.0;
  double rae = 0.0;
};

/// sqrt( sum (eap - eta)^2 / sum eta^2 ) over all entries.
double rrmse(const Eigen::MatrixXd& eap, const Eigen::MatrixXd& eta);

/// |Corr(eap col 1, eap col 2) - target| / target with the sample Pearson
/// correlation. target_corr defaults to the study's inter-LV correlation.
double rae(const Eigen::MatrixXd& eap, double target_corr = 0.5);

}  // namespace relkit
