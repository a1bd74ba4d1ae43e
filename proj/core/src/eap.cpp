#include "relkit/eap.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <string>

#include "relkit/errors.hpp"
#include "relkit/stats.hpp"

namespace relkit {

namespace {

// log(sigmoid(z)) without underflow on either tail.
inline double log_sigmoid(double z) {
  return z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

inline double log_response(const Item& item, double z) {
  if (item.c == 0.0) return log_sigmoid(z);
  return std::log(item.c + (1.0 - item.c) / (1.0 + std::exp(-z)));
}

inline double log_nonresponse(const Item& item, double z) {
  return std::log1p(-item.c) + log_sigmoid(-z);
}

}  // namespace

QuadratureGrid QuadratureGrid::build(const LatentSpec& spec, int nodes_per_dim, double lower,
                                     double upper) {
  spec.validate();
  if (nodes_per_dim < 2) throw InvalidArgument("QuadratureGrid: nodes_per_dim must be >= 2");
  if (!(upper > lower)) throw InvalidArgument("QuadratureGrid: upper must exceed lower");

  const int d = spec.dim();
  // The grid must bracket at least 99.99% of the prior mass in each dimension.
  for (int k = 0; k < d; ++k) {
    const double sd = std::sqrt(spec.covariance(k, k));
    const double mass =
        normal_cdf((upper - spec.mean(k)) / sd) - normal_cdf((lower - spec.mean(k)) / sd);
    if (mass < 0.9999) {
      throw InvalidArgument("QuadratureGrid: bounds cover only " + std::to_string(mass) +
                            " of the prior mass in dimension " + std::to_string(k + 1));
    }
  }

  long long total = 1;
  for (int k = 0; k < d; ++k) {
    total *= nodes_per_dim;
    if (total > 10'000'000) throw InvalidArgument("QuadratureGrid: grid too large");
  }
  const int count = static_cast<int>(total);

  QuadratureGrid grid;
  grid.nodes_per_dim = nodes_per_dim;
  grid.lower = lower;
  grid.upper = upper;
  grid.nodes.resize(count, d);
  grid.prior_weights.resize(count);

  Eigen::VectorXd axis(nodes_per_dim);
  const double step = (upper - lower) / static_cast<double>(nodes_per_dim - 1);
  for (int i = 0; i < nodes_per_dim; ++i) axis(i) = lower + step * i;

  const Eigen::LLT<Eigen::MatrixXd> llt(spec.covariance);
  for (int g = 0; g < count; ++g) {
    int rem = g;
    for (int k = d - 1; k >= 0; --k) {
      grid.nodes(g, k) = axis(rem % nodes_per_dim);
      rem /= nodes_per_dim;
    }
    const Eigen::VectorXd z = grid.nodes.row(g).transpose() - spec.mean;
    const Eigen::VectorXd w = llt.matrixL().solve(z);
    grid.prior_weights(g) = std::exp(-0.5 * w.squaredNorm());
  }
  grid.prior_weights /= grid.prior_weights.sum();
  return grid;
}

Eigen::MatrixXd eap_scores(const Eigen::MatrixXi& y, const ItemBank& bank,
                           const LatentSpec& spec, const QuadratureGrid& grid) {
  const int n = static_cast<int>(y.rows());
  const int m = static_cast<int>(y.cols());
  const int d = spec.dim();
  const int count = grid.count();
  if (m != bank.size()) {
    throw InvalidArgument("eap_scores: response columns do not match item bank size");
  }
  bank.validate(d);
  if (grid.nodes.cols() != d) {
    throw InvalidArgument("eap_scores: grid dimension does not match latent spec");
  }

  Eigen::MatrixXd eap(n, d);
  if (n == 0) return eap;

  // With no items the posterior equals the prior at every node.
  if (m == 0) {
    const Eigen::RowVectorXd prior_mean = grid.prior_weights.transpose() * grid.nodes;
    eap.rowwise() = prior_mean;
    return eap;
  }

  // log L(y_i | node_g) = base(g) + sum_j y_ij (log p_jg - log q_jg) with
  // q = 1 - p; the data-dependent part is one dense product.
  Eigen::MatrixXd delta(m, count);
  Eigen::RowVectorXd base = Eigen::RowVectorXd::Zero(count);
  for (int j = 0; j < m; ++j) {
    const Item& item = bank.items[static_cast<std::size_t>(j)];
    for (int g = 0; g < count; ++g) {
      const double z = item.a * (grid.nodes(g, item.dim - 1) - item.b);
      const double lp = log_response(item, z);
      const double lq = log_nonresponse(item, z);
      delta(j, g) = lp - lq;
      base(g) += lq;
    }
  }
  base += grid.prior_weights.array().log().matrix().transpose();

  constexpr int kBlock = 512;
  Eigen::MatrixXd logpost;
  for (int start = 0; start < n; start += kBlock) {
    const int rows = std::min(kBlock, n - start);
    logpost.noalias() = y.middleRows(start, rows).cast<double>() * delta;
    logpost.rowwise() += base;
    for (int r = 0; r < rows; ++r) {
      const double shift = logpost.row(r).maxCoeff();
      if (!std::isfinite(shift)) {
        throw ComputationError("eap_scores: zero posterior mass for case " +
                               std::to_string(start + r + 1));
      }
      const Eigen::ArrayXd w = (logpost.row(r).transpose().array() - shift).exp();
      const double total = w.sum();
      eap.row(start + r) = (w.matrix().transpose() * grid.nodes) / total;
    }
  }
  return eap;
}

}  // namespace relkit
