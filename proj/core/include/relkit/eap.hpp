#pragma once

#include <Eigen/Dense>

#include "relkit/model.hpp"

namespace relkit {

/// Rectangular tensor-product quadrature grid with weights proportional to the
/// latent prior density at the nodes, renormalized to sum to one.
struct QuadratureGrid {
  int nodes_per_dim = 61;
  double lower = -5.0;
  double upper = 5.0;
  Eigen::MatrixXd nodes;          ///< G x d node coordinates
  Eigen::VectorXd prior_weights;  ///< G weights, sum to 1

  static QuadratureGrid build(const LatentSpec& spec, int nodes_per_dim = 61,
                              double lower = -5.0, double upper = 5.0);

  int count() const { return static_cast<int>(nodes.rows()); }
};

/// Posterior-mean scores E[eta | y] for every row of y, computed on the grid
/// with log-space likelihood accumulation. Returns an n x d matrix.
Eigen::MatrixXd eap_scores(const Eigen::MatrixXi& y, const ItemBank& bank,
                           const LatentSpec& spec, const QuadratureGrid& grid);

}  // namespace relkit
