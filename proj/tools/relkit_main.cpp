// Command-line front end: simulate writes item-bank and sample CSVs, estimate
// writes the coefficient battery for a score file or a simulated replication,
// experiment runs the full test-length sweep, figure renders the aggregate CSV
// as a three-panel SVG. Every command writes a manifest.json next to its
// outputs; rerunning with a manifest as --config reproduces the run.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relkit/config.hpp"
#include "relkit/csv.hpp"
#include "relkit/errors.hpp"
#include "relkit/experiment.hpp"
#include "relkit/figure.hpp"
#include "relkit/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string transform;  // raw | percentile | both; empty = from config
};

std::string iso_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

relkit::ExperimentConfig load_config(const GlobalOptions& g) {
  if (g.config_path.empty()) {
    throw relkit::InvalidArgument("config: --config <path> is required for this command");
  }
  relkit::ExperimentConfig cfg = relkit::load_experiment_config(g.config_path);
  if (g.seed) cfg.master_seed = *g.seed;
  if (!g.transform.empty()) {
    cfg.latent_transform = relkit::transform_mode_from_string(g.transform);
  }
  return cfg;
}

void write_manifest(const fs::path& dir, const std::string& command,
                    std::uint64_t master_seed, const json& config_echo,
                    const std::vector<std::string>& outputs, const std::string& started_at) {
  json manifest;
  manifest["tool"] = "relkit";
  manifest["version"] = relkit::kVersion;
  manifest["command"] = command;
  manifest["master_seed"] = master_seed;
  manifest["started_at"] = started_at;
  manifest["finished_at"] = iso_timestamp();
  manifest["outputs"] = outputs;
  manifest["config"] = config_echo;

  const fs::path path = dir / "manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw relkit::IoError("cannot write file: " + path.string());
  out << manifest.dump(2) << '\n';
  out.flush();
  if (!out) throw relkit::IoError("write failed: " + path.string());
}

fs::path prepare_out_dir(const GlobalOptions& g) {
  const fs::path dir(g.out_dir);
  fs::create_directories(dir);
  return dir;
}

int cmd_simulate(const GlobalOptions& g) {
  const std::string started = iso_timestamp();
  const relkit::ExperimentConfig cfg = load_config(g);
  const fs::path dir = prepare_out_dir(g);

  std::vector<std::string> outputs;
  for (const int m : cfg.m_grid) {
    const relkit::SimulationArtifacts art = relkit::simulate_artifacts(m, 0, cfg);
    const fs::path items_path = dir / ("items_m" + std::to_string(m) + ".csv");
    const fs::path sample_path = dir / ("sample_m" + std::to_string(m) + ".csv");
    relkit::write_item_bank_csv(art.bank, items_path);
    relkit::write_sample_csv(art.sample, sample_path);
    outputs.push_back(items_path.filename().string());
    outputs.push_back(sample_path.filename().string());
  }
  write_manifest(dir, "simulate", cfg.master_seed,
                 json::parse(relkit::experiment_config_to_json(cfg)), outputs, started);
  return 0;
}

int cmd_estimate(const GlobalOptions& g, const std::string& scores_path) {
  const std::string started = iso_timestamp();
  const fs::path dir = prepare_out_dir(g);
  const fs::path battery_path = dir / "battery.csv";

  if (!scores_path.empty()) {
    relkit::Transform condition = relkit::Transform::kRaw;
    if (!g.transform.empty()) {
      condition = relkit::transform_from_string(g.transform);
    }
    const relkit::ScoreSet scores = relkit::read_scores_csv(scores_path, condition);
    relkit::BatteryConfig battery;
    if (!g.config_path.empty()) {
      const relkit::ExperimentConfig cfg = relkit::load_experiment_config(g.config_path);
      battery.smoother = cfg.smoother;
      battery.mi_neighbors = cfg.mi_k;
      battery.seed = cfg.master_seed;
    }
    if (g.seed) battery.seed = *g.seed;
    const std::vector<relkit::ReliabilityEstimate> estimates =
        relkit::table1_battery(scores, battery);
    relkit::write_battery_csv(estimates, condition, battery_path);
    json echo;
    echo["scores"] = scores_path;
    echo["transform"] = relkit::to_string(condition);
    write_manifest(dir, "estimate", battery.seed, echo, {battery_path.filename().string()},
                   started);
    return 0;
  }

  const relkit::ExperimentConfig cfg = load_config(g);
  std::ofstream out(battery_path, std::ios::binary);
  if (!out) throw relkit::IoError("cannot write file: " + battery_path.string());
  out << "name,raw,clamped,direction,condition\n";
  for (const relkit::Transform condition : cfg.conditions()) {
    relkit::ExperimentConfig single = cfg;
    single.latent_transform = condition == relkit::Transform::kRaw
                                  ? relkit::TransformMode::kRaw
                                  : relkit::TransformMode::kPercentile;
    const relkit::ReplicationResult rep =
        relkit::run_replication(cfg.m_grid.front(), 0, single);
    for (const relkit::ReliabilityEstimate& e : rep.estimates) {
      out << relkit::to_string(e.name) << ',' << relkit::format_real(e.value) << ','
          << relkit::format_real(e.clamped()) << ',' << relkit::to_string(e.direction) << ','
          << relkit::to_string(condition) << '\n';
    }
  }
  out.flush();
  if (!out) throw relkit::IoError("write failed: " + battery_path.string());
  write_manifest(dir, "estimate", cfg.master_seed,
                 json::parse(relkit::experiment_config_to_json(cfg)),
                 {battery_path.filename().string()}, started);
  return 0;
}

int cmd_experiment(const GlobalOptions& g) {
  const std::string started = iso_timestamp();
  const relkit::ExperimentConfig cfg = load_config(g);
  const fs::path dir = prepare_out_dir(g);

  const relkit::AggregateTable table =
      relkit::run_sweep(cfg, g.workers, [](const std::string& line) {
        std::cerr << "progress: " << line << '\n';
      });
  for (const relkit::SweepFailure& f : table.failures) {
    std::cerr << "warning: replication failed: m=" << f.m << " rep=" << f.rep_index
              << " condition=" << relkit::to_string(f.condition) << ": " << f.message << '\n';
  }

  const fs::path agg_path = dir / "aggregate.csv";
  relkit::write_aggregate_csv(table, agg_path);
  write_manifest(dir, "experiment", cfg.master_seed,
                 json::parse(relkit::experiment_config_to_json(cfg)),
                 {agg_path.filename().string()}, started);
  return 0;
}

int cmd_figure(const GlobalOptions& g, const std::string& input_path) {
  const std::string started = iso_timestamp();
  const fs::path dir = prepare_out_dir(g);
  const relkit::AggregateTable table = relkit::read_aggregate_csv(input_path);
  const fs::path svg_path = dir / "figure.svg";
  relkit::write_figure_svg(table, svg_path);
  json echo;
  echo["input"] = input_path;
  write_manifest(dir, "figure", g.seed.value_or(0), echo, {svg_path.filename().string()},
                 started);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo reliability coefficients for multidimensional IRT scores"};
  app.set_version_flag("--version", relkit::kVersion);
  app.require_subcommand(1);

  GlobalOptions g;
  std::uint64_t seed_value = 0;
  bool seed_set = false;
  app.add_option("--config", g.config_path, "JSON config (or a manifest from a previous run)");
  app.add_option("--seed", seed_value, "override the master seed")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--out", g.out_dir, "output directory (default: current directory)");
  app.add_option("--workers", g.workers, "worker threads for the experiment sweep");
  app.add_option("--transform", g.transform, "latent-score condition: raw|percentile|both");

  std::string scores_path;
  std::string figure_input;

  CLI::App* simulate = app.add_subcommand("simulate", "write item-bank and sample CSVs");
  CLI::App* estimate =
      app.add_subcommand("estimate", "write the coefficient battery as CSV");
  estimate->add_option("--scores", scores_path, "score CSV (s_1,s_2,xi_1,xi_2)");
  CLI::App* experiment =
      app.add_subcommand("experiment", "run the test-length sweep and aggregate");
  CLI::App* figure = app.add_subcommand("figure", "render an aggregate CSV as SVG");
  figure->add_option("--input", figure_input, "aggregate CSV path")->required();
  for (CLI::App* sub : {simulate, estimate, experiment, figure}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (seed_set) g.seed = seed_value;

  try {
    if (simulate->parsed()) return cmd_simulate(g);
    if (estimate->parsed()) return cmd_estimate(g, scores_path);
    if (experiment->parsed()) return cmd_experiment(g);
    if (figure->parsed()) return cmd_figure(g, figure_input);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const relkit::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const relkit::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return 3;
  } catch (const relkit::DegenerateInput& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return 4;
  } catch (const relkit::ComputationError& e) {
    std::cerr << "estimation error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
