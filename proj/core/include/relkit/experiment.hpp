#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relkit/assoc.hpp"
#include "relkit/error_measures.hpp"
#include "relkit/model.hpp"
#include "relkit/scores.hpp"
#include "relkit/smoother.hpp"

namespace relkit {

/// Latent-score conditions requested for a run.
enum class TransformMode { kRaw, kPercentile, kBoth };

const char* to_string(TransformMode m);
TransformMode transform_mode_from_string(const std::string& s);

struct ExperimentConfig {
  std::vector<int> m_grid = default_m_grid();  ///< test lengths, even
  int n_mc = 1000;                             ///< MC sample size per replication
  int replications = 50;                       ///< item-bank draws per test length
  TransformMode latent_transform = TransformMode::kBoth;
  std::uint64_t master_seed = 1;
  SmootherConfig smoother{};
  int mi_k = 5;
  int quadrature_nodes = 61;
  LatentSpec latent_spec = LatentSpec::bivariate_default();

  static std::vector<int> default_m_grid();  ///< 6, 12, ..., 120

  void validate() const;

  /// Conditions implied by latent_transform, raw first.
  std::vector<Transform> conditions() const;

  /// Target inter-LV correlation implied by latent_spec (used by rae).
  double target_correlation() const;
};

struct ReplicationResult {
  int m = 0;
  int rep_index = 0;
  std::uint64_t seed = 0;  ///< derived base seed of this replication
  Transform condition = Transform::kRaw;
  std::vector<ReliabilityEstimate> estimates;  ///< nine, battery order
  BenchmarkResult benchmark{};
  double wall_seconds = 0.0;
};

struct AggregateCell {
  int m = 0;
  Transform condition = Transform::kRaw;
  std::string metric;  ///< coefficient name, "RRMSE", or "RAE"
  double mean = 0.0;
  double sd = 0.0;
  int count = 0;
};

struct SweepFailure {
  int m = 0;
  int rep_index = 0;
  Transform condition = Transform::kRaw;
  std::string message;
};

struct AggregateTable {
  std::vector<AggregateCell> cells;
  std::vector<SweepFailure> failures;

  const AggregateCell* find(int m, Transform condition, const std::string& metric) const;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Runs one replication for the single condition selected by
/// config.latent_transform (kBoth is rejected): draws an item bank, simulates
/// latents and responses, scores by EAP, and evaluates the battery and
/// benchmarks. Deterministic given (master_seed, m, rep_index).
ReplicationResult run_replication(int m, int rep_index, const ExperimentConfig& config);

/// The item bank and Monte Carlo sample of one replication, drawn from the
/// same streams run_replication uses.
struct SimulationArtifacts {
  ItemBank bank;
  MonteCarloSample sample;
};

SimulationArtifacts simulate_artifacts(int m, int rep_index, const ExperimentConfig& config);

/// All per-replication results of the sweep, every requested condition. The
/// raw and percentile conditions of a replication share seeds and simulated
/// data. Failed replications are reported through `failures`.
struct SweepResult {
  std::vector<ReplicationResult> replications;
  std::vector<SweepFailure> failures;
};

SweepResult run_sweep_detailed(const ExperimentConfig& config, int workers = 1,
                               const ProgressFn& progress = {});

/// Aggregates per-replication results into per-(m, condition, metric) cells.
AggregateTable aggregate_results(const SweepResult& result, const ExperimentConfig& config);

/// run_sweep_detailed followed by aggregation. Throws ComputationError if any
/// requested (m, condition) cell has zero successful replications.
AggregateTable run_sweep(const ExperimentConfig& config, int workers = 1,
                         const ProgressFn& progress = {});

}  // namespace relkit
