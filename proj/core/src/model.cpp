#include "relkit/model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "relkit/errors.hpp"
#include "relkit/rng.hpp"
#include "relkit/stats.hpp"

namespace relkit {

LatentSpec LatentSpec::bivariate_default() {
  LatentSpec spec;
  spec.mean = Eigen::VectorXd::Zero(2);
  spec.covariance.resize(2, 2);
  spec.covariance << 1.0, 0.5, 0.5, 1.0;
  return spec;
}

void LatentSpec::validate() const {
  const int d = dim();
  if (d < 1) throw InvalidArgument("LatentSpec: dimension must be positive");
  if (covariance.rows() != d || covariance.cols() != d) {
    throw InvalidArgument("LatentSpec: covariance shape does not match mean length");
  }
  const double scale = covariance.cwiseAbs().maxCoeff();
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
    throw InvalidArgument("LatentSpec: covariance is not symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("LatentSpec: covariance is not positive definite");
  }
}

Eigen::MatrixXd LatentSpec::cholesky_lower() const {
  validate();
  return Eigen::LLT<Eigen::MatrixXd>(covariance).matrixL();
}

double LatentSpec::implied_correlation(int i, int j) const {
  if (i < 0 || j < 0 || i >= dim() || j >= dim()) {
    throw InvalidArgument("LatentSpec: correlation index out of range");
  }
  return covariance(i, j) / std::sqrt(covariance(i, i) * covariance(j, j));
}

void Item::validate(int latent_dim) const {
  if (!(a > 0.0)) throw InvalidArgument("Item: discrimination a must be > 0");
  if (!(c >= 0.0 && c < 1.0)) throw InvalidArgument("Item: pseudo-guessing c must be in [0, 1)");
  if (!std::isfinite(b)) throw InvalidArgument("Item: difficulty b must be finite");
  if (dim < 1 || dim > latent_dim) {
    throw InvalidArgument("Item: dim must index a latent variable in 1.." +
                          std::to_string(latent_dim));
  }
}

void ItemBank::validate(int latent_dim) const {
  for (const Item& item : items) item.validate(latent_dim);
}

ItemBank draw_item_bank(int m, std::uint64_t rng_seed) {
  if (m < 2 || m % 2 != 0) {
    throw InvalidArgument("draw_item_bank: m must be even and >= 2, got " + std::to_string(m));
  }
  SplitMix64 rng(rng_seed);
  ItemBank bank;
  bank.items.reserve(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    Item item;
    item.a = rng.next_uniform(0.5, 2.0);
    item.b = rng.next_uniform(-2.0, 2.0);
    item.c = rng.next_uniform(0.0, 0.2);
    item.dim = j < m / 2 ? 1 : 2;
    bank.items.push_back(item);
  }
  return bank;
}

Eigen::MatrixXd sample_latents(int n, const LatentSpec& spec, std::uint64_t rng_seed) {
  if (n < 0) throw InvalidArgument("sample_latents: n must be non-negative");
  const Eigen::MatrixXd chol = spec.cholesky_lower();
  const int d = spec.dim();
  Eigen::MatrixXd eta(n, d);
  SplitMix64 rng(rng_seed);
  Eigen::VectorXd z(d);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < d; ++k) z(k) = rng.next_normal();
    eta.row(i) = (spec.mean + chol * z).transpose();
  }
  return eta;
}

double response_probability(const Item& item, const Eigen::VectorXd& eta) {
  if (item.dim < 1 || item.dim > eta.size()) {
    throw InvalidArgument("response_probability: item dim exceeds latent dimension");
  }
  const double z = item.a * (eta(item.dim - 1) - item.b);
  return item.c + (1.0 - item.c) / (1.0 + std::exp(-z));
}

Eigen::MatrixXi simulate_responses(const Eigen::MatrixXd& eta, const ItemBank& bank,
                                   std::uint64_t rng_seed) {
  const int n = static_cast<int>(eta.rows());
  const int d = static_cast<int>(eta.cols());
  const int m = bank.size();
  bank.validate(d);
  Eigen::MatrixXi y(n, m);
  SplitMix64 rng(rng_seed);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const Item& item = bank.items[static_cast<std::size_t>(j)];
      const double z = item.a * (eta(i, item.dim - 1) - item.b);
      const double p = item.c + (1.0 - item.c) / (1.0 + std::exp(-z));
      y(i, j) = rng.next_double() < p ? 1 : 0;
    }
  }
  return y;
}

Eigen::MatrixXd percentile_ranks(const Eigen::MatrixXd& eta) {
  return eta.unaryExpr([](double x) { return 100.0 * normal_cdf(x); });
}

}  // namespace relkit
