#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "relkit/scores.hpp"
#include "relkit/smoother.hpp"

namespace relkit {

/// The nine coefficients of the battery, in report order.
enum class Coefficient {
  kR2Measure,
  kR2Predict,
  kCorr2,
  kSigma,
  kTMeasure,
  kTPredict,
  kMi,
  kWMeasure,
  kWPredict,
};

enum class Direction { kSymmetric, kObservedOutcome, kLatentOutcome };

const char* to_string(Coefficient c);
const char* to_string(Direction d);
Direction direction_of(Coefficient c);

/// All battery coefficients in report order.
const std::vector<Coefficient>& all_coefficients();

struct ReliabilityEstimate {
  Coefficient name;
  double value;  ///< raw estimate; sampling noise may leave [0, 1] slightly
  Direction direction;

  double clamped() const { return std::clamp(value, 0.0, 1.0); }
};

/// 1 - Var(u - fitted) / Var(u) with fitted = fit_predict(x, u, config).
double r_squared(const Eigen::VectorXd& u, const Eigen::MatrixXd& x,
                 const SmootherConfig& config);

/// Cov(u, v)^2 / (Var(u) Var(v)) with sample moments; symmetric in arguments.
double squared_correlation(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct SigmaResult {
  double raw;       ///< empirical-copula L1 coefficient
  double rescaled;  ///< 4 sin^2(pi/6 raw)
};

/// The normalized double sum 12/(n^2-1) sum_ij |C_n(i/n, j/n) - ij/n^2| with
/// average ranks for ties, accumulated in exact integer arithmetic: the result
/// is bit-identical under argument swaps and strictly monotone transforms of
/// either input. Defined for 2 <= n <= 50000.
double empirical_copula_l1(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Rank-based dependence coefficient from the empirical copula, raw and
/// rescaled. The estimator proper requires n >= 10.
SigmaResult schweizer_wolff_sigma(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct MutualInformationResult {
  double nats;      ///< k-NN estimate, floored at 0
  double rescaled;  ///< 1 - exp(-2 nats)
  int duplicate_joint_points;
};

/// Kraskov-Stoegbauer-Grassberger estimator (variant 1) with max-norm joint
/// distances and strict-inequality marginal counts. Coordinates are rescaled
/// to unit variance before the neighbor search so no coordinate dominates the
/// max-norm. Duplicate joint points are separated by a deterministic
/// sub-resolution jitter keyed by (seed, data).
MutualInformationResult ksg_mutual_information(const Eigen::MatrixXd& u,
                                               const Eigen::MatrixXd& v, int k,
                                               std::uint64_t seed = 0);

/// CODEC estimate of the Azadkia-Chatterjee coefficient with u as outcome and
/// the rows of x as predictors. Nearest-neighbor ties are broken uniformly at
/// random under the given seed.
double codec_t(const Eigen::VectorXd& u, const Eigen::MatrixXd& x, std::uint64_t seed = 0);

/// Determinant-ratio multivariate coefficient: 1 - det(Cov(resid)) / det(Cov(u)),
/// residuals from per-coordinate smoother fits of u on x.
double coefficient_w(const Eigen::MatrixXd& u, const Eigen::MatrixXd& x,
                     const SmootherConfig& config);

struct BatteryConfig {
  SmootherConfig smoother{};
  int mi_neighbors = 5;
  std::uint64_t seed = 0;  ///< jitter and nearest-neighbor tie-breaks
};

/// Evaluates the nine-coefficient battery on a score set:
///   R2(measure):  s1 on latent pair      Corr2, Sigma:  (s1, xi1)
///   R2(predict):  xi1 on observed pair   T(measure):    s1 on latent pair
///   MI:           observed vs latent     T(predict):    xi1 on observed pair
///   W(measure):   observed on latent     W(predict):    latent on observed
std::vector<ReliabilityEstimate> table1_battery(const ScoreSet& scores,
                                                const BatteryConfig& config);

}  // namespace relkit
