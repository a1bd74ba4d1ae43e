#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "relkit/assoc.hpp"
#include "relkit/eap.hpp"
#include "relkit/errors.hpp"
#include "relkit/model.hpp"
#include "relkit/rng.hpp"
#include "relkit/stats.hpp"
#include "support/oracles.hpp"

using namespace relkit;

TEST_CASE("latent spec default is the bivariate study prior") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  spec.validate();
  CHECK(spec.dim() == 2);
  CHECK(spec.mean.isZero());
  CHECK(spec.covariance(0, 1) == 0.5);
  CHECK(spec.implied_correlation(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("latent spec rejects non-SPD and asymmetric covariances") {
  LatentSpec spec = LatentSpec::bivariate_default();
  spec.covariance << 1.0, 2.0, 2.0, 1.0;  // eigenvalues -1 and 3
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
  spec.covariance << 1.0, 0.3, 0.5, 1.0;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("draw_item_bank honors ranges and the simple-structure split") {
  const ItemBank bank = draw_item_bank(6, 123);
  REQUIRE(bank.size() == 6);
  for (int j = 0; j < 6; ++j) {
    const Item& item = bank.items[static_cast<std::size_t>(j)];
    CHECK(item.a >= 0.5);
    CHECK(item.a <= 2.0);
    CHECK(item.b >= -2.0);
    CHECK(item.b <= 2.0);
    CHECK(item.c >= 0.0);
    CHECK(item.c <= 0.2);
    CHECK(item.dim == (j < 3 ? 1 : 2));
  }

  const ItemBank pair = draw_item_bank(2, 5);
  CHECK(pair.items[0].dim == 1);
  CHECK(pair.items[1].dim == 2);

  CHECK_THROWS_AS(draw_item_bank(5, 1), InvalidArgument);
  CHECK_THROWS_AS(draw_item_bank(0, 1), InvalidArgument);
  CHECK_THROWS_AS(draw_item_bank(-4, 1), InvalidArgument);
}

TEST_CASE("draw_item_bank is deterministic per seed") {
  const ItemBank a = draw_item_bank(12, 77);
  const ItemBank b = draw_item_bank(12, 77);
  for (int j = 0; j < 12; ++j) {
    CHECK(a.items[static_cast<std::size_t>(j)].a == b.items[static_cast<std::size_t>(j)].a);
    CHECK(a.items[static_cast<std::size_t>(j)].b == b.items[static_cast<std::size_t>(j)].b);
    CHECK(a.items[static_cast<std::size_t>(j)].c == b.items[static_cast<std::size_t>(j)].c);
  }
}

TEST_CASE("sample_latents reproduces the prior correlation") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const Eigen::MatrixXd eta = sample_latents(100000, spec, 99);
  REQUIRE(eta.rows() == 100000);
  REQUIRE(eta.cols() == 2);
  CHECK(pearson_correlation(eta.col(0), eta.col(1)) == doctest::Approx(0.5).epsilon(0.02));

  LatentSpec indep = spec;
  indep.covariance = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd eta0 = sample_latents(100000, indep, 99);
  CHECK(std::abs(pearson_correlation(eta0.col(0), eta0.col(1))) < 0.01);
}

TEST_CASE("sample_latents handles the empty case and bad covariances") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const Eigen::MatrixXd empty = sample_latents(0, spec, 1);
  CHECK(empty.rows() == 0);
  CHECK(empty.cols() == 2);

  LatentSpec bad = spec;
  bad.covariance << 1.0, 1.5, 1.5, 1.0;
  CHECK_THROWS_AS(sample_latents(10, bad, 1), InvalidArgument);
}

TEST_CASE("response_probability matches the logistic form") {
  Eigen::VectorXd eta(2);
  eta << 0.0, 1.0;
  CHECK(response_probability({1.0, 0.0, 0.0, 1}, eta) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(response_probability({1.0, 0.0, 0.2, 1}, eta) == doctest::Approx(0.6).epsilon(1e-12));

  Eigen::VectorXd hi(2), lo(2);
  hi << 50.0, 0.0;
  lo << -50.0, 0.0;
  CHECK(response_probability({2.0, 1.0, 0.1, 1}, hi) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(response_probability({2.0, 1.0, 0.1, 1}, lo) == doctest::Approx(0.1).epsilon(1e-10));
}

TEST_CASE("response_probability is increasing and bounded in (c, 1)") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    Item item;
    item.a = rng.next_uniform(0.5, 2.0);
    item.b = rng.next_uniform(-2.0, 2.0);
    item.c = rng.next_uniform(0.0, 0.2);
    item.dim = 1;
    double prev = -1.0;
    for (double e = -6.0; e <= 6.0; e += 0.5) {
      Eigen::VectorXd eta(1);
      eta << e;
      const double p = response_probability(item, eta);
      CHECK(p > item.c);
      CHECK(p < 1.0);
      CHECK(p > prev);
      prev = p;
    }
  }
}

TEST_CASE("simulate_responses matches conditional probabilities") {
  ItemBank bank;
  bank.items.push_back({1.5, 0.0, 0.0, 1});
  const Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(100000, 2);
  const Eigen::MatrixXi y = simulate_responses(eta, bank, 3);
  CHECK(y.cast<double>().col(0).mean() == doctest::Approx(0.5).epsilon(0.01));

  ItemBank guess;
  guess.items.push_back({1.0, 0.0, 0.2, 1});
  const Eigen::MatrixXd low = Eigen::MatrixXd::Constant(100000, 2, -10.0);
  const Eigen::MatrixXi y2 = simulate_responses(low, guess, 4);
  CHECK(y2.cast<double>().col(0).mean() == doctest::Approx(0.2).epsilon(0.025));
}

TEST_CASE("simulate_responses: empty input and dimension mismatch") {
  const ItemBank bank = draw_item_bank(4, 8);
  const Eigen::MatrixXd empty(0, 2);
  CHECK(simulate_responses(empty, bank, 1).rows() == 0);

  ItemBank wide;
  wide.items.push_back({1.0, 0.0, 0.0, 3});
  const Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(5, 2);
  CHECK_THROWS_AS(simulate_responses(eta, wide, 1), InvalidArgument);
}

TEST_CASE("quadrature grid weights are a normalized prior") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  CHECK(grid.count() == 61 * 61);
  CHECK(grid.prior_weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(grid.prior_weights.minCoeff() > 0.0);
  CHECK_THROWS_AS(QuadratureGrid::build(spec, 61, -1.0, 1.0), InvalidArgument);
}

TEST_CASE("eap with no items returns the prior mean") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  const ItemBank empty_bank;
  const Eigen::MatrixXi y(3, 0);
  const Eigen::MatrixXd eap = eap_scores(y, empty_bank, spec, grid);
  REQUIRE(eap.rows() == 3);
  CHECK(std::abs(eap(0, 0)) < 1e-12);
  CHECK(std::abs(eap(0, 1)) < 1e-12);
}

TEST_CASE("eap flips sign between all-ones and all-zeros for a symmetric bank") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  ItemBank bank;
  bank.items.push_back({1.2, 0.7, 0.0, 1});
  bank.items.push_back({1.2, -0.7, 0.0, 1});
  bank.items.push_back({0.9, 0.3, 0.0, 2});
  bank.items.push_back({0.9, -0.3, 0.0, 2});

  Eigen::MatrixXi y(2, 4);
  y.row(0).setOnes();
  y.row(1).setZero();
  const Eigen::MatrixXd eap = eap_scores(y, bank, spec, grid);
  CHECK(eap(0, 0) == doctest::Approx(-eap(1, 0)).epsilon(1e-6));
  CHECK(eap(0, 1) == doctest::Approx(-eap(1, 1)).epsilon(1e-6));
  CHECK(eap(0, 0) > 0.0);
}

TEST_CASE("eap is invariant to consistent item permutations") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  const ItemBank bank = draw_item_bank(8, 21);
  const Eigen::MatrixXd eta = sample_latents(20, spec, 22);
  const Eigen::MatrixXi y = simulate_responses(eta, bank, 23);

  std::vector<int> perm(8);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  std::swap(perm[1], perm[5]);

  ItemBank shuffled;
  Eigen::MatrixXi ys(y.rows(), y.cols());
  for (int j = 0; j < 8; ++j) {
    shuffled.items.push_back(bank.items[static_cast<std::size_t>(perm[static_cast<std::size_t>(j)])]);
    ys.col(j) = y.col(perm[static_cast<std::size_t>(j)]);
  }

  const Eigen::MatrixXd a = eap_scores(y, bank, spec, grid);
  const Eigen::MatrixXd b = eap_scores(ys, shuffled, spec, grid);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("eap columns are centered and shrunk on a large sample") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  const ItemBank bank = draw_item_bank(12, 41);
  const int n = 4000;
  const Eigen::MatrixXd eta = sample_latents(n, spec, 42);
  const Eigen::MatrixXi y = simulate_responses(eta, bank, 43);
  const Eigen::MatrixXd eap = eap_scores(y, bank, spec, grid);

  for (int k = 0; k < 2; ++k) {
    const double sd = std::sqrt(variance(eap.col(k)));
    CHECK(std::abs(eap.col(k).mean()) < 3.0 * sd / std::sqrt(static_cast<double>(n)));
    // A posterior mean cannot out-vary the latent variable it predicts.
    const double var_eta = variance(eta.col(k));
    const double se = var_eta * std::sqrt(2.0 / (n - 1.0));
    CHECK(variance(eap.col(k)) <= var_eta + 3.0 * se);
  }
}

TEST_CASE("doubling quadrature nodes leaves EAPs unchanged to 1e-4") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const ItemBank bank = draw_item_bank(120, 51);
  const Eigen::MatrixXd eta = sample_latents(50, spec, 52);
  const Eigen::MatrixXi y = simulate_responses(eta, bank, 53);

  const Eigen::MatrixXd coarse = eap_scores(y, bank, spec, QuadratureGrid::build(spec, 61));
  const Eigen::MatrixXd fine = eap_scores(y, bank, spec, QuadratureGrid::build(spec, 122));
  CHECK((coarse - fine).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("eap rejects mismatched banks and names a case with no posterior mass") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  const ItemBank bank = draw_item_bank(6, 1);
  const Eigen::MatrixXi wrong = Eigen::MatrixXi::Zero(4, 5);
  CHECK_THROWS_AS(eap_scores(wrong, bank, spec, grid), InvalidArgument);

  // Two step-function items whose endorsed/refused pattern is contradictory:
  // the likelihood vanishes at every node.
  ItemBank steep;
  steep.items.push_back({1e308, 1.0, 0.0, 1});
  steep.items.push_back({1e308, -1.0, 0.0, 1});
  Eigen::MatrixXi y(1, 2);
  y << 1, 0;  // eta > 1 and eta < -1 simultaneously
  try {
    eap_scores(y, steep, spec, grid);
    FAIL("expected ComputationError");
  } catch (const ComputationError& e) {
    CHECK(std::string(e.what()).find("case 1") != std::string::npos);
  }
}

TEST_CASE("squared EAP-latent correlation matches the PRMSE estimate at m = 120") {
  const LatentSpec spec = LatentSpec::bivariate_default();
  const QuadratureGrid grid = QuadratureGrid::build(spec);
  const ItemBank bank = draw_item_bank(120, 61);
  const Eigen::MatrixXd eta = sample_latents(1000, spec, 62);
  const Eigen::MatrixXi y = simulate_responses(eta, bank, 63);
  const Eigen::MatrixXd eap = eap_scores(y, bank, spec, grid);

  const double corr2 = squared_correlation(eap.col(0), eta.col(0));
  const double prmse = r_squared(eta.col(0), eap, {});
  CHECK(std::abs(corr2 - prmse) < 0.03);
  CHECK(corr2 > 0.8);  // a 120-item test pins the first latent variable well
}

TEST_CASE("percentile ranks apply the exact normal CDF") {
  Eigen::MatrixXd eta(3, 1);
  eta << 0.0, 1.96, -1.96;
  const Eigen::MatrixXd pct = percentile_ranks(eta);
  CHECK(pct(0, 0) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(pct(1, 0) == doctest::Approx(97.5).epsilon(1e-4));
  CHECK(pct(1, 0) + pct(2, 0) == doctest::Approx(100.0).epsilon(1e-12));

  const Eigen::MatrixXd draws = testsupport::std_normal_matrix(200, 1, 9);
  const Eigen::MatrixXd ranks = percentile_ranks(draws);
  for (int i = 1; i < 200; ++i) {
    for (int j = 0; j < i; ++j) {
      CHECK((draws(i, 0) < draws(j, 0)) == (ranks(i, 0) < ranks(j, 0)));
    }
  }
}
