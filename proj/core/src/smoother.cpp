#include "relkit/smoother.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "relkit/errors.hpp"

namespace relkit {

void SmootherConfig::validate() const {
  if (!(span > 0.0 && span <= 1.0)) {
    throw InvalidArgument("SmootherConfig: span must be in (0, 1]");
  }
  if (k < 2) throw InvalidArgument("SmootherConfig: k must be >= 2");
}

namespace {

inline double kernel_weight(SmootherConfig::Kernel kernel, double z) {
  if (kernel == SmootherConfig::Kernel::kUniform) return 1.0;
  const double t = 1.0 - z * z * z;
  return t * t * t;
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& x) {
  const auto n = x.rows();
  Eigen::MatrixXd xs(n, x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    const double m = x.col(c).mean();
    const double var = (x.col(c).array() - m).square().sum() / static_cast<double>(n - 1);
    if (!(var > 0.0)) {
      throw DegenerateInput("fit_predict: zero-variance predictor column " +
                            std::to_string(c + 1));
    }
    xs.col(c) = (x.col(c).array() - m) / std::sqrt(var);
  }
  return xs;
}

// Local fits over sorted contiguous windows; the q nearest neighbors of a
// point in one dimension always form such a window.
Eigen::VectorXd fit_sorted_1d(const Eigen::VectorXd& xs, const Eigen::VectorXd& u, int q,
                              const SmootherConfig& config) {
  const int n = static_cast<int>(xs.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return xs(a) < xs(b); });

  Eigen::VectorXd sx(n), su(n);
  for (int i = 0; i < n; ++i) {
    sx(i) = xs(order[static_cast<std::size_t>(i)]);
    su(i) = u(order[static_cast<std::size_t>(i)]);
  }

  Eigen::VectorXd fitted(n);
  int lo = 0;
  for (int i = 0; i < n; ++i) {
    if (lo < i - q + 1) lo = i - q + 1;
    while (lo < i && lo + q <= n - 1 && sx(lo + q) - sx(i) < sx(i) - sx(lo)) ++lo;
    const int hi = lo + q - 1;
    const double dmax = std::max(sx(i) - sx(lo), sx(hi) - sx(i));

    if (config.method == SmootherConfig::Method::kKnnMean || dmax <= 0.0) {
      fitted(i) = su.segment(lo, q).mean();
    } else {
      double s0 = 0.0, s1 = 0.0, s2 = 0.0, t0 = 0.0, t1 = 0.0;
      for (int j = lo; j <= hi; ++j) {
        const double t = sx(j) - sx(i);
        const double w = kernel_weight(config.kernel, std::abs(t) / dmax);
        s0 += w;
        s1 += w * t;
        s2 += w * t * t;
        t0 += w * su(j);
        t1 += w * t * su(j);
      }
      const double denom = s0 * s2 - s1 * s1;
      fitted(i) = denom > 1e-12 * s0 * s2 ? (s2 * t0 - s1 * t1) / denom : t0 / s0;
    }
  }

  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(order[static_cast<std::size_t>(i)]) = fitted(i);
  return out;
}

Eigen::VectorXd fit_2d(const Eigen::MatrixXd& xs, const Eigen::VectorXd& u, int q,
                       const SmootherConfig& config) {
  const int n = static_cast<int>(xs.rows());
  Eigen::VectorXd fitted(n);
  std::vector<double> d2(static_cast<std::size_t>(n));
  std::vector<double> buf(static_cast<std::size_t>(n));

  const Eigen::VectorXd x0 = xs.col(0);
  const Eigen::VectorXd x1 = xs.col(1);

  for (int i = 0; i < n; ++i) {
    const double a0 = x0(i);
    const double a1 = x1(i);
    for (int j = 0; j < n; ++j) {
      const double e0 = x0(j) - a0;
      const double e1 = x1(j) - a1;
      d2[static_cast<std::size_t>(j)] = e0 * e0 + e1 * e1;
    }
    buf = d2;
    std::nth_element(buf.begin(), buf.begin() + (q - 1), buf.end());
    const double dmax2 = buf[static_cast<std::size_t>(q - 1)];
    const double dmax = std::sqrt(dmax2);

    if (config.method == SmootherConfig::Method::kKnnMean || dmax <= 0.0) {
      double sum = 0.0;
      int cnt = 0;
      for (int j = 0; j < n; ++j) {
        if (d2[static_cast<std::size_t>(j)] <= dmax2) {
          sum += u(j);
          ++cnt;
        }
      }
      fitted(i) = sum / cnt;
      continue;
    }

    Eigen::Matrix3d a = Eigen::Matrix3d::Zero();
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    for (int j = 0; j < n; ++j) {
      const double dj2 = d2[static_cast<std::size_t>(j)];
      if (dj2 > dmax2) continue;
      const double w = kernel_weight(config.kernel, std::sqrt(dj2) / dmax);
      const double t0 = x0(j) - a0;
      const double t1 = x1(j) - a1;
      a(0, 0) += w;
      a(0, 1) += w * t0;
      a(0, 2) += w * t1;
      a(1, 1) += w * t0 * t0;
      a(1, 2) += w * t0 * t1;
      a(2, 2) += w * t1 * t1;
      b(0) += w * u(j);
      b(1) += w * t0 * u(j);
      b(2) += w * t1 * u(j);
    }
    a(1, 0) = a(0, 1);
    a(2, 0) = a(0, 2);
    a(2, 1) = a(1, 2);

    const Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
    if (lu.isInvertible()) {
      fitted(i) = lu.solve(b)(0);
    } else {
      fitted(i) = b(0) / a(0, 0);
    }
  }
  return fitted;
}

}  // namespace

Eigen::VectorXd fit_predict(const Eigen::MatrixXd& x, const Eigen::VectorXd& u,
                            const SmootherConfig& config) {
  config.validate();
  const int n = static_cast<int>(x.rows());
  const int p = static_cast<int>(x.cols());
  if (u.size() != n) throw InvalidArgument("fit_predict: outcome length does not match rows");
  if (p != 1 && p != 2) throw InvalidArgument("fit_predict: predictors must have 1 or 2 columns");
  if (n < 10 * p) {
    throw InvalidArgument("fit_predict: need at least " + std::to_string(10 * p) +
                          " rows, got " + std::to_string(n));
  }

  const Eigen::MatrixXd xs = standardize_columns(x);

  int q;
  if (config.method == SmootherConfig::Method::kKnnMean) {
    q = std::min(config.k, n);
  } else {
    q = static_cast<int>(std::ceil(config.span * n));
  }
  q = std::max(q, 2);

  return p == 1 ? fit_sorted_1d(xs.col(0), u, q, config) : fit_2d(xs, u, q, config);
}

}  // namespace relkit
