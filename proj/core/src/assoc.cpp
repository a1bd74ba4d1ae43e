#include "relkit/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "relkit/errors.hpp"
#include "relkit/rng.hpp"
#include "relkit/stats.hpp"

namespace relkit {

const char* to_string(Transform t) {
  return t == Transform::kRaw ? "raw" : "percentile";
}

Transform transform_from_string(const std::string& s) {
  if (s == "raw") return Transform::kRaw;
  if (s == "percentile") return Transform::kPercentile;
  throw InvalidArgument("unknown transform '" + s + "' (expected raw or percentile)");
}

void ScoreSet::validate() const {
  if (observed.cols() != 2 || latent.cols() != 2) {
    throw InvalidArgument("ScoreSet: observed and latent scores must have 2 columns");
  }
  if (observed.rows() != latent.rows()) {
    throw InvalidArgument("ScoreSet: observed and latent row counts differ");
  }
}

const char* to_string(Coefficient c) {
  switch (c) {
    case Coefficient::kR2Measure: return "R2_measure";
    case Coefficient::kR2Predict: return "R2_predict";
    case Coefficient::kCorr2: return "Corr2";
    case Coefficient::kSigma: return "Sigma";
    case Coefficient::kTMeasure: return "T_measure";
    case Coefficient::kTPredict: return "T_predict";
    case Coefficient::kMi: return "MI";
    case Coefficient::kWMeasure: return "W_measure";
    case Coefficient::kWPredict: return "W_predict";
  }
  return "?";
}

const char* to_string(Direction d) {
  switch (d) {
    case Direction::kSymmetric: return "symmetric";
    case Direction::kObservedOutcome: return "observed-as-outcome";
    case Direction::kLatentOutcome: return "latent-as-outcome";
  }
  return "?";
}

Direction direction_of(Coefficient c) {
  switch (c) {
    case Coefficient::kR2Measure:
    case Coefficient::kTMeasure:
    case Coefficient::kWMeasure:
      return Direction::kObservedOutcome;
    case Coefficient::kR2Predict:
    case Coefficient::kTPredict:
    case Coefficient::kWPredict:
      return Direction::kLatentOutcome;
    case Coefficient::kCorr2:
    case Coefficient::kSigma:
    case Coefficient::kMi:
      return Direction::kSymmetric;
  }
  return Direction::kSymmetric;
}

const std::vector<Coefficient>& all_coefficients() {
  static const std::vector<Coefficient> order = {
      Coefficient::kR2Measure, Coefficient::kR2Predict, Coefficient::kCorr2,
      Coefficient::kSigma,     Coefficient::kTMeasure,  Coefficient::kTPredict,
      Coefficient::kMi,        Coefficient::kWMeasure,  Coefficient::kWPredict,
  };
  return order;
}

namespace {

void require_finite(const Eigen::VectorXd& v, const char* who) {
  if (!v.allFinite()) throw InvalidArgument(std::string(who) + ": non-finite input");
}

// Twice the average rank of each element, an exact integer even under ties.
std::vector<std::int64_t> double_ranks(const Eigen::VectorXd& v) {
  const int n = static_cast<int>(v.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return v(a) < v(b); });
  std::vector<std::int64_t> r2(static_cast<std::size_t>(n));
  int s = 0;
  while (s < n) {
    int e = s;
    while (e + 1 < n && v(order[static_cast<std::size_t>(e + 1)]) ==
                            v(order[static_cast<std::size_t>(s)])) {
      ++e;
    }
    const std::int64_t sum = static_cast<std::int64_t>(s) + e + 2;  // (s+1) + (e+1)
    for (int j = s; j <= e; ++j) r2[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])] = sum;
    s = e + 1;
  }
  return r2;
}

// Deterministic sub-resolution jitter, magnitude 1e-9 of each column's SD.
// The stream is keyed by the matrix content, not the argument position, so
// symmetric estimators remain exactly symmetric under argument swaps.
Eigen::MatrixXd jittered(const Eigen::MatrixXd& m, std::uint64_t seed, std::uint64_t purpose) {
  const std::uint64_t content =
      hash_bytes(m.data(), sizeof(double) * static_cast<std::size_t>(m.size()));
  SplitMix64 rng(derive_stream(seed, {content, purpose}));
  Eigen::VectorXd mag(m.cols());
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mu = m.col(c).mean();
    const double var =
        (m.col(c).array() - mu).square().sum() / std::max<double>(1.0, double(m.rows() - 1));
    mag(c) = 1e-9 * std::sqrt(var);
  }
  Eigen::MatrixXd out = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      out(i, c) += (2.0 * rng.next_double() - 1.0) * mag(c);
    }
  }
  return out;
}

// Rescales every column to unit variance so max-norm neighborhoods weight all
// coordinates comparably; constant columns are left untouched.
Eigen::MatrixXd unit_variance_columns(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd out = m;
  if (m.rows() < 2) return out;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    const double mu = m.col(c).mean();
    const double var = (m.col(c).array() - mu).square().sum() / double(m.rows() - 1);
    if (var > 0.0) out.col(c) /= std::sqrt(var);
  }
  return out;
}

int count_duplicate_joint_rows(const Eigen::MatrixXd& u, const Eigen::MatrixXd& v) {
  const int n = static_cast<int>(u.rows());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  const auto less = [&](int a, int b) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      if (u(a, c) != u(b, c)) return u(a, c) < u(b, c);
    }
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      if (v(a, c) != v(b, c)) return v(a, c) < v(b, c);
    }
    return false;
  };
  std::sort(order.begin(), order.end(), less);
  int dup = 0;
  for (int i = 1; i < n; ++i) {
    if (!less(order[static_cast<std::size_t>(i - 1)], order[static_cast<std::size_t>(i)])) ++dup;
  }
  return dup;
}

}  // namespace

double r_squared(const Eigen::VectorXd& u, const Eigen::MatrixXd& x,
                 const SmootherConfig& config) {
  require_finite(u, "r_squared");
  const double var_u = variance(u);
  if (!(var_u > 0.0)) throw DegenerateInput("r_squared: zero-variance outcome");
  const Eigen::VectorXd fitted = fit_predict(x, u, config);
  const double var_resid = variance(u - fitted);
  return 1.0 - var_resid / var_u;
}

double squared_correlation(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  require_finite(u, "squared_correlation");
  require_finite(v, "squared_correlation");
  if (u.size() != v.size()) throw InvalidArgument("squared_correlation: size mismatch");
  const double var_u = variance(u);
  const double var_v = variance(v);
  if (!(var_u > 0.0) || !(var_v > 0.0)) {
    throw DegenerateInput("squared_correlation: zero-variance input");
  }
  const double cov = covariance(u, v);
  return cov * cov / (var_u * var_v);
}

double empirical_copula_l1(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int n = static_cast<int>(u.size());
  if (v.size() != n) throw InvalidArgument("empirical_copula_l1: size mismatch");
  if (n < 2) throw InvalidArgument("empirical_copula_l1: need n >= 2");
  if (n > 50000) throw InvalidArgument("empirical_copula_l1: n > 50000 overflows the exact sum");
  require_finite(u, "empirical_copula_l1");
  require_finite(v, "empirical_copula_l1");

  const std::vector<std::int64_t> r2u = double_ranks(u);
  const std::vector<std::int64_t> r2v = double_ranks(v);

  // Grid cell of each point: the smallest integer i with rank <= i.
  std::vector<std::vector<int>> by_row(static_cast<std::size_t>(n + 1));
  for (int p = 0; p < n; ++p) {
    const int iu = static_cast<int>((r2u[static_cast<std::size_t>(p)] + 1) / 2);
    const int iv = static_cast<int>((r2v[static_cast<std::size_t>(p)] + 1) / 2);
    by_row[static_cast<std::size_t>(iu)].push_back(iv);
  }

  // total = sum_{i,j} | n^2 C_n(i/n, j/n) - i j |, accumulated exactly in integers.
  std::vector<std::int32_t> cnt(static_cast<std::size_t>(n + 1), 0);
  std::int64_t total = 0;
  const std::int64_t nn = n;
  for (int i = 1; i <= n; ++i) {
    for (const int iv : by_row[static_cast<std::size_t>(i)]) {
      ++cnt[static_cast<std::size_t>(iv)];
    }
    std::int64_t cum = 0;
    std::int64_t ij = 0;
    for (int j = 1; j <= n; ++j) {
      cum += cnt[static_cast<std::size_t>(j)];
      ij += i;
      total += std::llabs(nn * cum - ij);
    }
  }

  const double nd = static_cast<double>(n);
  return 12.0 * static_cast<double>(total) / ((nd * nd - 1.0) * nd * nd);
}

SigmaResult schweizer_wolff_sigma(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() < 10) throw InvalidArgument("schweizer_wolff_sigma: need n >= 10");
  SigmaResult out;
  out.raw = empirical_copula_l1(u, v);
  const double s = std::sin(std::numbers::pi / 6.0 * out.raw);
  out.rescaled = 4.0 * s * s;
  return out;
}

MutualInformationResult ksg_mutual_information(const Eigen::MatrixXd& u,
                                               const Eigen::MatrixXd& v, int k,
                                               std::uint64_t seed) {
  const int n = static_cast<int>(u.rows());
  if (v.rows() != n) throw InvalidArgument("ksg_mutual_information: row mismatch");
  if (n < 100) throw InvalidArgument("ksg_mutual_information: need n >= 100");
  if (k < 2) throw InvalidArgument("ksg_mutual_information: need k >= 2");
  if (k >= n) throw InvalidArgument("ksg_mutual_information: k must be < n");
  if (u.cols() < 1 || v.cols() < 1) {
    throw InvalidArgument("ksg_mutual_information: empty input");
  }

  MutualInformationResult out{};
  out.duplicate_joint_points = count_duplicate_joint_rows(u, v);
  if (out.duplicate_joint_points * 100 > n) {
    std::cerr << "warning: ksg_mutual_information: " << out.duplicate_joint_points
              << " duplicate joint points out of " << n
              << "; relying on sub-resolution jitter\n";
  }

  const Eigen::MatrixXd uj = jittered(unit_variance_columns(u), seed, 0x6a69);
  const Eigen::MatrixXd vj = jittered(unit_variance_columns(v), seed, 0x6a69);

  const int p = static_cast<int>(u.cols());
  const int q = static_cast<int>(v.cols());
  std::vector<double> du(static_cast<std::size_t>(n));
  std::vector<double> dv(static_cast<std::size_t>(n));
  std::vector<double> buf(static_cast<std::size_t>(n));

  double psi_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double a = 0.0;
      for (int c = 0; c < p; ++c) a = std::max(a, std::abs(uj(j, c) - uj(i, c)));
      double b = 0.0;
      for (int c = 0; c < q; ++c) b = std::max(b, std::abs(vj(j, c) - vj(i, c)));
      du[static_cast<std::size_t>(j)] = a;
      dv[static_cast<std::size_t>(j)] = b;
      buf[static_cast<std::size_t>(j)] = std::max(a, b);
    }
    buf[static_cast<std::size_t>(i)] = std::numeric_limits<double>::infinity();
    std::vector<double> sel = buf;
    std::nth_element(sel.begin(), sel.begin() + (k - 1), sel.end());
    const double eps = sel[static_cast<std::size_t>(k - 1)];

    int nu = 0, nv = 0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      if (du[static_cast<std::size_t>(j)] < eps) ++nu;
      if (dv[static_cast<std::size_t>(j)] < eps) ++nv;
    }
    psi_sum += digamma(nu + 1) + digamma(nv + 1);
  }

  out.nats = digamma(k) + digamma(n) - psi_sum / n;
  if (out.nats < 0.0) out.nats = 0.0;
  out.rescaled = 1.0 - std::exp(-2.0 * out.nats);
  return out;
}

double codec_t(const Eigen::VectorXd& u, const Eigen::MatrixXd& x, std::uint64_t seed) {
  const int n = static_cast<int>(u.size());
  if (x.rows() != n) throw InvalidArgument("codec_t: row mismatch");
  if (n < 30) throw InvalidArgument("codec_t: need n >= 30");
  require_finite(u, "codec_t");
  if (u.minCoeff() == u.maxCoeff()) throw DegenerateInput("codec_t: constant outcome");

  // R_i = #{j : u_j <= u_i}, L_i = #{j : u_j >= u_i}.
  std::vector<double> sorted(u.data(), u.data() + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::int64_t> r(static_cast<std::size_t>(n)), l(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    r[static_cast<std::size_t>(i)] =
        std::upper_bound(sorted.begin(), sorted.end(), u(i)) - sorted.begin();
    l[static_cast<std::size_t>(i)] =
        n - (std::lower_bound(sorted.begin(), sorted.end(), u(i)) - sorted.begin());
  }

  const std::uint64_t content =
      hash_bytes(x.data(), sizeof(double) * static_cast<std::size_t>(x.size()));
  const Eigen::MatrixXd xj = jittered(x, seed, 0xc0dec);

  const int p = static_cast<int>(x.cols());
  std::vector<int> ties;
  std::int64_t num = 0, den = 0;
  for (int i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    ties.clear();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d2 = 0.0;
      for (int c = 0; c < p; ++c) {
        const double e = xj(j, c) - xj(i, c);
        d2 += e * e;
      }
      if (d2 < best) {
        best = d2;
        ties.clear();
        ties.push_back(j);
      } else if (d2 == best) {
        ties.push_back(j);
      }
    }
    int nn_index = ties.front();
    if (ties.size() > 1) {
      SplitMix64 rng(derive_stream(seed, {content, 0x7e5, static_cast<std::uint64_t>(i)}));
      const auto pick = std::min<std::size_t>(
          static_cast<std::size_t>(rng.next_double() * static_cast<double>(ties.size())),
          ties.size() - 1);
      nn_index = ties[pick];
    }
    const std::int64_t ri = r[static_cast<std::size_t>(i)];
    const std::int64_t rn = r[static_cast<std::size_t>(nn_index)];
    const std::int64_t li = l[static_cast<std::size_t>(i)];
    num += static_cast<std::int64_t>(n) * std::min(ri, rn) - li * li;
    den += li * (n - li);
  }
  if (den == 0) throw DegenerateInput("codec_t: degenerate outcome ranks");
  return static_cast<double>(num) / static_cast<double>(den);
}

double coefficient_w(const Eigen::MatrixXd& u, const Eigen::MatrixXd& x,
                     const SmootherConfig& config) {
  const int n = static_cast<int>(u.rows());
  const int q = static_cast<int>(u.cols());
  if (q < 1) throw InvalidArgument("coefficient_w: outcome must have >= 1 column");
  if (x.rows() != n) throw InvalidArgument("coefficient_w: row mismatch");

  const Eigen::MatrixXd cov_u = covariance_matrix(u);
  const double det_u = cov_u.determinant();
  const double scale = std::pow(std::max(cov_u.diagonal().maxCoeff(), 1e-300), q);
  if (!(det_u > 1e-12 * scale)) {
    throw DegenerateInput("coefficient_w: singular outcome covariance");
  }

  Eigen::MatrixXd resid(n, q);
  for (int c = 0; c < q; ++c) {
    resid.col(c) = u.col(c) - fit_predict(x, u.col(c), config);
  }
  const double det_e = covariance_matrix(resid).determinant();
  return 1.0 - det_e / det_u;
}

namespace {

template <typename F>
double annotated(Coefficient c, F&& f) {
  const std::string name = to_string(c);
  try {
    return f();
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(name + ": " + e.what());
  } catch (const DegenerateInput& e) {
    throw DegenerateInput(name + ": " + e.what());
  } catch (const ComputationError& e) {
    throw ComputationError(name + ": " + e.what());
  }
}

}  // namespace

std::vector<ReliabilityEstimate> table1_battery(const ScoreSet& scores,
                                                const BatteryConfig& config) {
  scores.validate();
  const Eigen::VectorXd s1 = scores.observed.col(0);
  const Eigen::VectorXd xi1 = scores.latent.col(0);
  const auto& smoother = config.smoother;

  std::vector<ReliabilityEstimate> out;
  out.reserve(9);
  const auto add = [&out](Coefficient c, double value) {
    if (!(value >= -0.1 && value <= 1.1)) {
      throw ComputationError(std::string(to_string(c)) + ": estimate " +
                             std::to_string(value) + " outside [-0.1, 1.1]");
    }
    out.push_back(ReliabilityEstimate{c, value, direction_of(c)});
  };

  add(Coefficient::kR2Measure, annotated(Coefficient::kR2Measure, [&] {
        return r_squared(s1, scores.latent, smoother);
      }));
  add(Coefficient::kR2Predict, annotated(Coefficient::kR2Predict, [&] {
        return r_squared(xi1, scores.observed, smoother);
      }));
  add(Coefficient::kCorr2, annotated(Coefficient::kCorr2, [&] {
        return squared_correlation(s1, xi1);
      }));
  add(Coefficient::kSigma, annotated(Coefficient::kSigma, [&] {
        return schweizer_wolff_sigma(s1, xi1).rescaled;
      }));
  add(Coefficient::kTMeasure, annotated(Coefficient::kTMeasure, [&] {
        return codec_t(s1, scores.latent, derive_stream(config.seed, {21}));
      }));
  add(Coefficient::kTPredict, annotated(Coefficient::kTPredict, [&] {
        return codec_t(xi1, scores.observed, derive_stream(config.seed, {22}));
      }));
  add(Coefficient::kMi, annotated(Coefficient::kMi, [&] {
        return ksg_mutual_information(scores.observed, scores.latent, config.mi_neighbors,
                                      derive_stream(config.seed, {23}))
            .rescaled;
      }));
  add(Coefficient::kWMeasure, annotated(Coefficient::kWMeasure, [&] {
        return coefficient_w(scores.observed, scores.latent, smoother);
      }));
  add(Coefficient::kWPredict, annotated(Coefficient::kWPredict, [&] {
        return coefficient_w(scores.latent, scores.observed, smoother);
      }));
  return out;
}

}  // namespace relkit
