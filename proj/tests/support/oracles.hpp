#pragma once

// Test-side oracles and data generators, kept independent of the library
// implementation paths they are used to check.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace testsupport {

/// Composite Simpson's rule on [a, b] with n (even) intervals.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        int n = 20000) {
  if (n % 2 != 0) ++n;
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) {
    sum += f(a + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

/// i.i.d. standard normal matrix via the standard library generator.
inline Eigen::MatrixXd std_normal_matrix(int n, int p, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd out(n, p);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < p; ++c) out(i, c) = normal(rng);
  }
  return out;
}

/// A correlated pair (u, v) with Corr(u, v) = rho, both standard normal.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> bivariate_normal(int n, double rho,
                                                                    unsigned seed) {
  const Eigen::MatrixXd z = std_normal_matrix(n, 2, seed);
  Eigen::VectorXd u = z.col(0);
  Eigen::VectorXd v = rho * z.col(0) + std::sqrt(1.0 - rho * rho) * z.col(1);
  return {std::move(u), std::move(v)};
}

/// Average rank (1-based) of every element; ties share the mean rank.
inline std::vector<double> average_ranks(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> ranks(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    int below = 0, equal = 0;
    for (int j = 0; j < n; ++j) {
      if (v(j) < v(i)) ++below;
      if (v(j) == v(i)) ++equal;
    }
    ranks[static_cast<std::size_t>(i)] = below + (equal + 1) / 2.0;
  }
  return ranks;
}

/// Brute-force empirical-copula sum: for every grid cell (i, j) the copula
/// count is enumerated directly over all points. Integer accumulation mirrors
/// the exactness required of the implementation.
inline double sigma_bruteforce(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int n = static_cast<int>(u.size());
  const std::vector<double> ru = average_ranks(u);
  const std::vector<double> rv = average_ranks(v);
  std::int64_t total = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      std::int64_t count = 0;
      for (int p = 0; p < n; ++p) {
        if (ru[static_cast<std::size_t>(p)] <= i && rv[static_cast<std::size_t>(p)] <= j) {
          ++count;
        }
      }
      total += std::llabs(static_cast<std::int64_t>(n) * count -
                          static_cast<std::int64_t>(i) * j);
    }
  }
  const double nd = n;
  return 12.0 * static_cast<double>(total) / ((nd * nd - 1.0) * nd * nd);
}

}  // namespace testsupport
