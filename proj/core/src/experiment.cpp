#include "relkit/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "relkit/eap.hpp"
#include "relkit/errors.hpp"
#include "relkit/rng.hpp"

namespace relkit {

namespace {

enum Purpose : std::uint64_t {
  kItemsStream = 1,
  kLatentsStream = 2,
  kResponsesStream = 3,
  kAssocStream = 4,
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const char* to_string(TransformMode m) {
  switch (m) {
    case TransformMode::kRaw: return "raw";
    case TransformMode::kPercentile: return "percentile";
    case TransformMode::kBoth: return "both";
  }
  return "?";
}

TransformMode transform_mode_from_string(const std::string& s) {
  if (s == "raw") return TransformMode::kRaw;
  if (s == "percentile") return TransformMode::kPercentile;
  if (s == "both") return TransformMode::kBoth;
  throw InvalidArgument("unknown latent_transform '" + s +
                        "' (expected raw, percentile, or both)");
}

std::vector<int> ExperimentConfig::default_m_grid() {
  std::vector<int> grid;
  for (int m = 6; m <= 120; m += 6) grid.push_back(m);
  return grid;
}

void ExperimentConfig::validate() const {
  if (m_grid.empty()) throw InvalidArgument("m_grid: must not be empty");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (m_grid[i] < 2 || m_grid[i] % 2 != 0) {
      throw InvalidArgument("m_grid[" + std::to_string(i) + "]: test length " +
                            std::to_string(m_grid[i]) + " must be even and >= 2");
    }
  }
  if (n_mc < 100) throw InvalidArgument("n_mc: must be >= 100");
  if (replications < 1) throw InvalidArgument("replications: must be >= 1");
  if (mi_k < 2) throw InvalidArgument("mi_k: must be >= 2");
  if (quadrature_nodes < 2) throw InvalidArgument("quadrature_nodes: must be >= 2");
  smoother.validate();
  latent_spec.validate();
  if (latent_spec.dim() != 2) {
    throw InvalidArgument("latent_spec: the study design is two-dimensional");
  }
}

std::vector<Transform> ExperimentConfig::conditions() const {
  switch (latent_transform) {
    case TransformMode::kRaw: return {Transform::kRaw};
    case TransformMode::kPercentile: return {Transform::kPercentile};
    case TransformMode::kBoth: return {Transform::kRaw, Transform::kPercentile};
  }
  return {};
}

double ExperimentConfig::target_correlation() const {
  return latent_spec.implied_correlation(0, 1);
}

const AggregateCell* AggregateTable::find(int m, Transform condition,
                                          const std::string& metric) const {
  for (const AggregateCell& cell : cells) {
    if (cell.m == m && cell.condition == condition && cell.metric == metric) return &cell;
  }
  return nullptr;
}

namespace {

struct SimulatedReplication {
  std::uint64_t base_seed = 0;
  Eigen::MatrixXd eta;
  Eigen::MatrixXd eap;
  BenchmarkResult benchmark{};
  double sim_seconds = 0.0;
};

SimulatedReplication simulate_replication(int m, int rep_index, const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  SimulatedReplication sim;
  sim.base_seed = derive_stream(config.master_seed,
                                {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(rep_index)});
  const ItemBank bank = draw_item_bank(m, derive_stream(sim.base_seed, {kItemsStream}));
  sim.eta = sample_latents(config.n_mc, config.latent_spec,
                           derive_stream(sim.base_seed, {kLatentsStream}));
  const Eigen::MatrixXi y =
      simulate_responses(sim.eta, bank, derive_stream(sim.base_seed, {kResponsesStream}));
  const QuadratureGrid grid = QuadratureGrid::build(config.latent_spec, config.quadrature_nodes);
  sim.eap = eap_scores(y, bank, config.latent_spec, grid);
  sim.benchmark.rrmse = rrmse(sim.eap, sim.eta);
  sim.benchmark.rae = rae(sim.eap, config.target_correlation());
  sim.sim_seconds = seconds_since(t0);
  return sim;
}

ReplicationResult evaluate_condition(const SimulatedReplication& sim, Transform condition,
                                     int m, int rep_index, const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  ScoreSet scores;
  scores.observed = sim.eap;
  scores.latent = condition == Transform::kRaw ? sim.eta : percentile_ranks(sim.eta);
  scores.transform = condition;

  BatteryConfig battery;
  battery.smoother = config.smoother;
  battery.mi_neighbors = config.mi_k;
  battery.seed = derive_stream(sim.base_seed, {kAssocStream});

  ReplicationResult result;
  result.m = m;
  result.rep_index = rep_index;
  result.seed = sim.base_seed;
  result.condition = condition;
  result.estimates = table1_battery(scores, battery);
  result.benchmark = sim.benchmark;
  result.wall_seconds = sim.sim_seconds + seconds_since(t0);
  return result;
}

std::string annotate(int m, int rep_index, const char* what) {
  std::ostringstream oss;
  oss << "m=" << m << " rep=" << rep_index << ": " << what;
  return oss.str();
}

}  // namespace

SimulationArtifacts simulate_artifacts(int m, int rep_index, const ExperimentConfig& config) {
  config.validate();
  const std::uint64_t base = derive_stream(
      config.master_seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(rep_index)});
  SimulationArtifacts out;
  out.bank = draw_item_bank(m, derive_stream(base, {kItemsStream}));
  out.sample.eta = sample_latents(config.n_mc, config.latent_spec,
                                  derive_stream(base, {kLatentsStream}));
  out.sample.y =
      simulate_responses(out.sample.eta, out.bank, derive_stream(base, {kResponsesStream}));
  return out;
}

ReplicationResult run_replication(int m, int rep_index, const ExperimentConfig& config) {
  config.validate();
  if (config.latent_transform == TransformMode::kBoth) {
    throw InvalidArgument(
        "latent_transform: must be raw or percentile for a single replication");
  }
  try {
    const SimulatedReplication sim = simulate_replication(m, rep_index, config);
    return evaluate_condition(sim, config.conditions().front(), m, rep_index, config);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(annotate(m, rep_index, e.what()));
  } catch (const DegenerateInput& e) {
    throw DegenerateInput(annotate(m, rep_index, e.what()));
  } catch (const ComputationError& e) {
    throw ComputationError(annotate(m, rep_index, e.what()));
  }
}

SweepResult run_sweep_detailed(const ExperimentConfig& config, int workers,
                               const ProgressFn& progress) {
  config.validate();
  const std::vector<Transform> conditions = config.conditions();
  const int reps = config.replications;
  const std::size_t units = config.m_grid.size() * static_cast<std::size_t>(reps);

  struct UnitOutcome {
    std::vector<ReplicationResult> results;
    std::vector<SweepFailure> failures;
  };
  std::vector<UnitOutcome> outcomes(units);

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  std::exception_ptr fatal;
  std::mutex fatal_mutex;

  const auto emit = [&](const std::string& line) {
    if (!progress) return;
    const std::lock_guard<std::mutex> lock(progress_mutex);
    progress(line);
  };

  const auto work = [&] {
    for (;;) {
      const std::size_t idx = next.fetch_add(1);
      if (idx >= units) return;
      const int m = config.m_grid[idx / static_cast<std::size_t>(reps)];
      const int rep = static_cast<int>(idx % static_cast<std::size_t>(reps));
      UnitOutcome& unit = outcomes[idx];
      try {
        const auto t0 = std::chrono::steady_clock::now();
        SimulatedReplication sim;
        bool simulated = false;
        try {
          sim = simulate_replication(m, rep, config);
          simulated = true;
        } catch (const Error& e) {
          for (const Transform c : conditions) {
            unit.failures.push_back({m, rep, c, e.what()});
          }
        }
        if (simulated) {
          for (const Transform c : conditions) {
            try {
              unit.results.push_back(evaluate_condition(sim, c, m, rep, config));
            } catch (const Error& e) {
              unit.failures.push_back({m, rep, c, e.what()});
            }
          }
        }
        std::ostringstream oss;
        oss << "m=" << m << " rep=" << (rep + 1) << "/" << reps;
        if (unit.failures.empty()) {
          oss << " done in " << seconds_since(t0) << "s";
        } else {
          oss << " failed: " << unit.failures.front().message;
        }
        emit(oss.str());
      } catch (...) {
        const std::lock_guard<std::mutex> lock(fatal_mutex);
        if (!fatal) fatal = std::current_exception();
        return;
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(workers, static_cast<int>(units)));
  if (thread_count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (fatal) std::rethrow_exception(fatal);

  SweepResult result;
  for (UnitOutcome& unit : outcomes) {
    for (ReplicationResult& r : unit.results) result.replications.push_back(std::move(r));
    for (SweepFailure& f : unit.failures) result.failures.push_back(std::move(f));
  }
  return result;
}

AggregateTable aggregate_results(const SweepResult& result, const ExperimentConfig& config) {
  std::vector<std::string> metrics;
  for (const Coefficient c : all_coefficients()) metrics.emplace_back(to_string(c));
  metrics.emplace_back("RRMSE");
  metrics.emplace_back("RAE");

  AggregateTable table;
  table.failures = result.failures;
  for (const int m : config.m_grid) {
    for (const Transform condition : config.conditions()) {
      std::vector<const ReplicationResult*> rows;
      for (const ReplicationResult& r : result.replications) {
        if (r.m == m && r.condition == condition) rows.push_back(&r);
      }
      for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
        std::vector<double> values;
        values.reserve(rows.size());
        for (const ReplicationResult* r : rows) {
          if (metrics[mi] == "RRMSE") {
            values.push_back(r->benchmark.rrmse);
          } else if (metrics[mi] == "RAE") {
            values.push_back(r->benchmark.rae);
          } else {
            for (const ReliabilityEstimate& e : r->estimates) {
              if (metrics[mi] == to_string(e.name)) {
                values.push_back(e.value);
                break;
              }
            }
          }
        }
        AggregateCell cell;
        cell.m = m;
        cell.condition = condition;
        cell.metric = metrics[mi];
        cell.count = static_cast<int>(values.size());
        if (!values.empty()) {
          double sum = 0.0;
          for (const double v : values) sum += v;
          cell.mean = sum / static_cast<double>(values.size());
          if (values.size() > 1) {
            double ss = 0.0;
            for (const double v : values) ss += (v - cell.mean) * (v - cell.mean);
            cell.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
          }
        }
        table.cells.push_back(std::move(cell));
      }
    }
  }
  return table;
}

AggregateTable run_sweep(const ExperimentConfig& config, int workers, const ProgressFn& progress) {
  const SweepResult detailed = run_sweep_detailed(config, workers, progress);
  AggregateTable table = aggregate_results(detailed, config);
  for (const AggregateCell& cell : table.cells) {
    if (cell.count == 0) {
      throw ComputationError("run_sweep: no successful replications for m=" +
                             std::to_string(cell.m) + ", condition=" +
                             to_string(cell.condition));
    }
  }
  return table;
}

}  // namespace relkit
