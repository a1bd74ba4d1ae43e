#pragma once

#include <Eigen/Dense>

namespace relkit {

/// Sample mean.
double mean(const Eigen::VectorXd& v);

/// Unbiased sample variance (n - 1 denominator). Requires size >= 2.
double variance(const Eigen::VectorXd& v);

/// Unbiased sample covariance of two equally sized vectors.
double covariance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Sample Pearson correlation; throws DegenerateInput on a zero-variance input.
double pearson_correlation(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Sample covariance matrix of the columns of x (n x p), n - 1 denominator.
Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& x);

/// Standard normal CDF via the complementary error function.
double normal_cdf(double x);

/// Digamma function for positive arguments (recurrence plus asymptotic series).
double digamma(double x);

}  // namespace relkit
