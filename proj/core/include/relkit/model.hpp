#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace relkit {

/// Mean vector and covariance of the latent variables.
struct LatentSpec {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;

  /// The two-dimensional default: zero mean, unit variances, covariance 0.5.
  static LatentSpec bivariate_default();

  int dim() const { return static_cast<int>(mean.size()); }

  /// Checks shape, symmetry, and positive definiteness; throws InvalidArgument.
  void validate() const;

  /// Lower Cholesky factor of the covariance; throws InvalidArgument if not SPD.
  Eigen::MatrixXd cholesky_lower() const;

  /// Pearson correlation implied between latent dimensions i and j.
  double implied_correlation(int i, int j) const;
};

/// One binary item under the three-parameter logistic model with simple
/// structure: the item loads on exactly one latent variable.
struct Item {
  double a = 1.0;  ///< discrimination, > 0
  double b = 0.0;  ///< difficulty
  double c = 0.0;  ///< pseudo-guessing probability, in [0, 1)
  int dim = 1;     ///< 1-based index of the latent variable the item loads on

  void validate(int latent_dim) const;
};

struct ItemBank {
  std::vector<Item> items;

  int size() const { return static_cast<int>(items.size()); }
  void validate(int latent_dim) const;
};

/// Paired latent draws and simulated binary responses for n cases.
struct MonteCarloSample {
  Eigen::MatrixXd eta;  ///< n x d latent draws
  Eigen::MatrixXi y;    ///< n x m responses, entries in {0, 1}

  int cases() const { return static_cast<int>(eta.rows()); }
};

/// Draws an item bank of even size m: a ~ U(0.5, 2), b ~ U(-2, 2),
/// c ~ U(0, 0.2); the first half loads on LV 1, the second half on LV 2.
ItemBank draw_item_bank(int m, std::uint64_t rng_seed);

/// n i.i.d. multivariate normal rows; n = 0 yields an empty matrix with d columns.
Eigen::MatrixXd sample_latents(int n, const LatentSpec& spec, std::uint64_t rng_seed);

/// c + (1 - c) / (1 + exp(-a (eta_k - b))) where k is the item's loading.
double response_probability(const Item& item, const Eigen::VectorXd& eta);

/// Bernoulli responses, conditionally independent given each latent row.
Eigen::MatrixXi simulate_responses(const Eigen::MatrixXd& eta, const ItemBank& bank,
                                   std::uint64_t rng_seed);

/// Elementwise percentile rank 100 * Phi(x).
Eigen::MatrixXd percentile_ranks(const Eigen::MatrixXd& eta);

}  // namespace relkit
