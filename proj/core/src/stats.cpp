#include "relkit/stats.hpp"

#include <cmath>
#include <numbers>

#include "relkit/errors.hpp"

namespace relkit {

double mean(const Eigen::VectorXd& v) {
  if (v.size() == 0) throw InvalidArgument("mean: empty vector");
  return v.mean();
}

double variance(const Eigen::VectorXd& v) {
  const auto n = v.size();
  if (n < 2) throw InvalidArgument("variance: need at least 2 values");
  const double m = v.mean();
  return (v.array() - m).square().sum() / static_cast<double>(n - 1);
}

double covariance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const auto n = u.size();
  if (n != v.size()) throw InvalidArgument("covariance: size mismatch");
  if (n < 2) throw InvalidArgument("covariance: need at least 2 values");
  const double mu = u.mean();
  const double mv = v.mean();
  return ((u.array() - mu) * (v.array() - mv)).sum() / static_cast<double>(n - 1);
}

double pearson_correlation(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const double vu = variance(u);
  const double vv = variance(v);
  if (vu <= 0.0 || vv <= 0.0) {
    throw DegenerateInput("pearson_correlation: zero-variance input");
  }
  return covariance(u, v) / std::sqrt(vu * vv);
}

Eigen::MatrixXd covariance_matrix(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  if (n < 2) throw InvalidArgument("covariance_matrix: need at least 2 rows");
  const Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
  return centered.transpose() * centered / static_cast<double>(n - 1);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double digamma(double x) {
  if (!(x > 0.0)) throw InvalidArgument("digamma: requires x > 0");
  double result = 0.0;
  // Shift into the asymptotic regime, then use the Bernoulli-number series.
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  result += std::log(x) - 0.5 * inv -
            inv2 * (1.0 / 12.0 -
                    inv2 * (1.0 / 120.0 -
                            inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
  return result;
}

}  // namespace relkit
