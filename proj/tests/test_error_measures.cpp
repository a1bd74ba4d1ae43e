#include <doctest.h>

#include <cmath>

#include "relkit/error_measures.hpp"
#include "relkit/errors.hpp"
#include "support/oracles.hpp"

using namespace relkit;

namespace {

// Two exactly uncorrelated unit-variance columns, mixed to hit a target
// sample correlation exactly (up to one rounding).
Eigen::MatrixXd columns_with_correlation(double rho) {
  const int n = 16;
  Eigen::MatrixXd out(n, 2);
  for (int i = 0; i < n; ++i) {
    const double a = (i % 2 == 0) ? 1.0 : -1.0;
    const double b = (i % 4 < 2) ? 1.0 : -1.0;
    out(i, 0) = a;
    out(i, 1) = rho * a + std::sqrt(1.0 - rho * rho) * b;
  }
  return out;
}

}  // namespace

TEST_CASE("rrmse: exact recovery, zero predictor, hand-computed case") {
  const Eigen::MatrixXd eta = testsupport::std_normal_matrix(50, 2, 1);
  CHECK(rrmse(eta, eta) == 0.0);
  CHECK(rrmse(Eigen::MatrixXd::Zero(50, 2), eta) == doctest::Approx(1.0).epsilon(1e-12));

  Eigen::MatrixXd small_eta(2, 2), small_eap(2, 2);
  small_eta << 1.0, 0.0, 0.0, 1.0;
  small_eap << 0.5, 0.0, 0.0, 0.5;
  CHECK(rrmse(small_eap, small_eta) == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(rrmse(small_eap, small_eta.topRows(1)), InvalidArgument);
  CHECK_THROWS_AS(rrmse(Eigen::MatrixXd::Zero(3, 2), Eigen::MatrixXd::Zero(3, 2)),
                  DegenerateInput);
}

TEST_CASE("rae: exact targets and error arithmetic") {
  CHECK(rae(columns_with_correlation(0.5), 0.5) < 1e-12);
  CHECK(rae(columns_with_correlation(0.25), 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rae(columns_with_correlation(0.75), 0.5) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("rae is exactly invariant to positive rescaling of a column") {
  Eigen::MatrixXd eap = testsupport::std_normal_matrix(500, 2, 2);
  eap.col(1) = 0.4 * eap.col(0) + eap.col(1);
  const double base = rae(eap);
  Eigen::MatrixXd scaled = eap;
  scaled.col(0) *= 3.75;
  CHECK(std::abs(rae(scaled) - base) < 1e-12);
}

TEST_CASE("rae rejects degenerate input") {
  Eigen::MatrixXd tiny(2, 2);
  tiny << 0.0, 1.0, 1.0, 0.0;
  CHECK_THROWS_AS(rae(tiny), InvalidArgument);

  Eigen::MatrixXd flat = testsupport::std_normal_matrix(100, 2, 3);
  flat.col(1).setConstant(2.0);
  CHECK_THROWS_AS(rae(flat), DegenerateInput);

  CHECK_THROWS_AS(rae(testsupport::std_normal_matrix(100, 2, 4), 0.0), InvalidArgument);
}
