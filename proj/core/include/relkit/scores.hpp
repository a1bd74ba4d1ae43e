#pragma once

#include <Eigen/Dense>
#include <string>

namespace relkit {

/// Which latent-score transform a ScoreSet was built with.
enum class Transform { kRaw, kPercentile };

const char* to_string(Transform t);
Transform transform_from_string(const std::string& s);

/// Observed (EAP) and latent scores for one condition.
struct ScoreSet {
  Eigen::MatrixXd observed;  ///< n x 2 EAP scores
  Eigen::MatrixXd latent;    ///< n x 2 latent scores: raw eta or percentile ranks
  Transform transform = Transform::kRaw;

  int cases() const { return static_cast<int>(observed.rows()); }
  void validate() const;
};

}  // namespace relkit
