// Micro-benchmarks for the estimator hot paths and EAP scoring.
// Run: ./relkit_benchmarks [--benchmark_filter=...]

#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "relkit/assoc.hpp"
#include "relkit/eap.hpp"
#include "relkit/model.hpp"
#include "relkit/rng.hpp"
#include "relkit/smoother.hpp"

namespace {

Eigen::MatrixXd normal_matrix(int n, int p, std::uint64_t seed) {
  relkit::SplitMix64 rng(seed);
  Eigen::MatrixXd out(n, p);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < p; ++c) out(i, c) = rng.next_normal();
  }
  return out;
}

void BM_EapScores(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const relkit::LatentSpec spec = relkit::LatentSpec::bivariate_default();
  const relkit::ItemBank bank = relkit::draw_item_bank(m, 1);
  const Eigen::MatrixXd eta = relkit::sample_latents(1000, spec, 2);
  const Eigen::MatrixXi y = relkit::simulate_responses(eta, bank, 3);
  const relkit::QuadratureGrid grid = relkit::QuadratureGrid::build(spec);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::eap_scores(y, bank, spec, grid));
  }
}
BENCHMARK(BM_EapScores)->Arg(12)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_LocalLinear1d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = normal_matrix(n, 1, 4);
  const Eigen::VectorXd u = x.col(0).array().sin() + normal_matrix(n, 1, 5).col(0).array();
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::fit_predict(x, u, {}));
  }
}
BENCHMARK(BM_LocalLinear1d)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_LocalLinear2d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = normal_matrix(n, 2, 6);
  const Eigen::VectorXd u = x.col(0) + 0.5 * x.col(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::fit_predict(x, u, {}));
  }
}
BENCHMARK(BM_LocalLinear2d)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_SchweizerWolff(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd z = normal_matrix(n, 2, 7);
  const Eigen::VectorXd u = z.col(0);
  const Eigen::VectorXd v = 0.5 * z.col(0) + 0.866 * z.col(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::schweizer_wolff_sigma(u, v));
  }
}
BENCHMARK(BM_SchweizerWolff)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_KsgMutualInformation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd u = normal_matrix(n, 2, 8);
  Eigen::MatrixXd v = normal_matrix(n, 2, 9);
  v.col(0) += 0.8 * u.col(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::ksg_mutual_information(u, v, 5));
  }
}
BENCHMARK(BM_KsgMutualInformation)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_CodecT(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = normal_matrix(n, 2, 10);
  const Eigen::VectorXd u = x.col(0) + 0.3 * normal_matrix(n, 1, 11).col(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::codec_t(u, x));
  }
}
BENCHMARK(BM_CodecT)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_Battery(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  relkit::ScoreSet scores;
  scores.latent = normal_matrix(n, 2, 12);
  scores.observed = 0.8 * scores.latent + 0.4 * normal_matrix(n, 2, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(relkit::table1_battery(scores, {}));
  }
}
BENCHMARK(BM_Battery)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
