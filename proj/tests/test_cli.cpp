#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>

#include "relkit/csv.hpp"
#include "relkit/scores.hpp"
#include "support/oracles.hpp"
#include "support/subprocess.hpp"
#include "support/xml_check.hpp"

using testsupport::RunResult;
using testsupport::TempDir;
using testsupport::run_cli;

namespace {

const char* kSmallConfig = R"({
  "m_grid": [6],
  "n_mc": 120,
  "replications": 2,
  "latent_transform": "both",
  "master_seed": 4711
})";

}  // namespace

TEST_CASE("simulate writes the documented CSV shapes and a manifest") {
  const TempDir dir("cli_sim");
  testsupport::write_text(dir.path() / "cfg.json", kSmallConfig);

  const RunResult r = run_cli("simulate --config cfg.json --out sim", dir.path());
  REQUIRE(r.exit_code == 0);

  const std::string items = testsupport::read_file(dir.path() / "sim" / "items_m6.csv");
  CHECK(testsupport::count_lines(items) == 7);
  CHECK(items.rfind("a,b,c,dim\n", 0) == 0);

  const std::string sample = testsupport::read_file(dir.path() / "sim" / "sample_m6.csv");
  CHECK(testsupport::count_lines(sample) == 121);
  CHECK(sample.rfind("eta_1,eta_2,y_1,y_2,y_3,y_4,y_5,y_6\n", 0) == 0);

  const std::string manifest = testsupport::read_file(dir.path() / "sim" / "manifest.json");
  CHECK(manifest.find("\"tool\": \"relkit\"") != std::string::npos);
  CHECK(manifest.find("\"master_seed\": 4711") != std::string::npos);

  // Same seed, same bytes.
  const RunResult again = run_cli("simulate --config cfg.json --out sim2", dir.path());
  REQUIRE(again.exit_code == 0);
  CHECK(testsupport::read_file(dir.path() / "sim2" / "items_m6.csv") == items);
  CHECK(testsupport::read_file(dir.path() / "sim2" / "sample_m6.csv") == sample);

  // Different seed, different draws.
  const RunResult other = run_cli("simulate --config cfg.json --seed 999 --out sim3", dir.path());
  REQUIRE(other.exit_code == 0);
  CHECK(testsupport::read_file(dir.path() / "sim3" / "sample_m6.csv") != sample);
}

TEST_CASE("simulate rejects an odd test length with exit 2 naming the field") {
  const TempDir dir("cli_sim_bad");
  testsupport::write_text(dir.path() / "cfg.json", R"({"m_grid": [7], "n_mc": 120})");
  const RunResult r = run_cli("simulate --config cfg.json --out sim", dir.path());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("m_grid") != std::string::npos);
}

TEST_CASE("malformed JSON and unreadable paths use exits 2 and 3") {
  const TempDir dir("cli_errs");
  testsupport::write_text(dir.path() / "broken.json", "{ nope");
  CHECK(run_cli("simulate --config broken.json", dir.path()).exit_code == 2);
  CHECK(run_cli("simulate --config missing.json", dir.path()).exit_code == 3);
  CHECK(run_cli("experiment", dir.path()).exit_code == 2);  // --config required
  CHECK(run_cli("figure --input missing.csv", dir.path()).exit_code == 3);
  testsupport::write_text(dir.path() / "empty_grid.json", R"({"m_grid": []})");
  CHECK(run_cli("experiment --config empty_grid.json", dir.path()).exit_code == 2);
}

TEST_CASE("estimate on a score file: perfect, independent, and invariant inputs") {
  const TempDir dir("cli_est");
  using relkit::ScoreSet;
  using relkit::Transform;

  // Perfect proxies: observed equals latent.
  ScoreSet perfect;
  perfect.latent = testsupport::std_normal_matrix(2000, 2, 1);
  perfect.observed = perfect.latent;
  relkit::write_scores_csv(perfect, dir.path() / "perfect.csv");
  const RunResult rp = run_cli("estimate --scores perfect.csv --out perfect", dir.path());
  REQUIRE(rp.exit_code == 0);
  const auto perfect_rows =
      testsupport::read_file(dir.path() / "perfect" / "battery.csv");
  int checked = 0;
  std::size_t pos = 0;
  std::string line;
  std::istringstream iss(perfect_rows);
  std::getline(iss, line);  // header
  while (std::getline(iss, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    const double clamped = std::strtod(line.substr(c2 + 1, c3 - c2 - 1).c_str(), nullptr);
    CHECK(clamped >= 0.95);
    ++checked;
  }
  CHECK(checked == 9);
  (void)pos;

  // Independent scores: everything small.
  ScoreSet indep;
  indep.latent = testsupport::std_normal_matrix(2000, 2, 2);
  indep.observed = testsupport::std_normal_matrix(2000, 2, 3);
  relkit::write_scores_csv(indep, dir.path() / "indep.csv");
  const RunResult ri = run_cli("estimate --scores indep.csv --out indep", dir.path());
  REQUIRE(ri.exit_code == 0);
  std::istringstream iss2(testsupport::read_file(dir.path() / "indep" / "battery.csv"));
  std::getline(iss2, line);
  while (std::getline(iss2, line)) {
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    const auto c3 = line.find(',', c2 + 1);
    const double clamped = std::strtod(line.substr(c2 + 1, c3 - c2 - 1).c_str(), nullptr);
    CHECK(clamped <= 0.1);
  }

  // Percentile transform of the latent side leaves the Sigma row identical.
  ScoreSet noisy;
  noisy.latent = testsupport::std_normal_matrix(1500, 2, 4);
  noisy.observed = 0.8 * noisy.latent + 0.4 * testsupport::std_normal_matrix(1500, 2, 5);
  relkit::write_scores_csv(noisy, dir.path() / "raw.csv");
  ScoreSet pct = noisy;
  pct.latent = relkit::percentile_ranks(noisy.latent);
  relkit::write_scores_csv(pct, dir.path() / "pct.csv");

  REQUIRE(run_cli("estimate --scores raw.csv --seed 7 --out raw", dir.path()).exit_code == 0);
  REQUIRE(run_cli("estimate --scores pct.csv --seed 7 --transform percentile --out pct",
                  dir.path())
              .exit_code == 0);
  const std::string raw_csv = testsupport::read_file(dir.path() / "raw" / "battery.csv");
  const std::string pct_csv = testsupport::read_file(dir.path() / "pct" / "battery.csv");
  const auto row_of = [](const std::string& csv, const std::string& name) {
    const auto at = csv.find("\n" + name + ",");
    const auto end = csv.find('\n', at + 1);
    std::string row = csv.substr(at + 1, end - at - 1);
    return row.substr(0, row.rfind(','));  // drop the condition column
  };
  CHECK(row_of(raw_csv, "Sigma") == row_of(pct_csv, "Sigma"));
  CHECK(row_of(raw_csv, "T_predict") == row_of(pct_csv, "T_predict"));
}

TEST_CASE("estimate surfaces estimator failures as exit 4 naming the coefficient") {
  const TempDir dir("cli_est_bad");
  relkit::ScoreSet degenerate;
  degenerate.latent = testsupport::std_normal_matrix(500, 2, 6);
  degenerate.observed = degenerate.latent;
  degenerate.observed.col(0).setConstant(1.0);
  relkit::write_scores_csv(degenerate, dir.path() / "scores.csv");
  const RunResult r = run_cli("estimate --scores scores.csv --out out", dir.path());
  CHECK(r.exit_code == 4);
  CHECK(r.err.find("R2_measure") != std::string::npos);
}

TEST_CASE("experiment writes the aggregate schema and figure renders it") {
  const TempDir dir("cli_exp");
  testsupport::write_text(dir.path() / "cfg.json", kSmallConfig);
  const RunResult r = run_cli("experiment --config cfg.json --workers 2 --out exp", dir.path());
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.find("progress:") != std::string::npos);

  const std::string agg = testsupport::read_file(dir.path() / "exp" / "aggregate.csv");
  CHECK(agg.rfind("m,condition,metric,mean,sd,count\n", 0) == 0);
  CHECK(testsupport::count_lines(agg) == 1 + 2 * 11);

  const RunResult f = run_cli("figure --input exp/aggregate.csv --out fig", dir.path());
  REQUIRE(f.exit_code == 0);
  const std::string svg = testsupport::read_file(dir.path() / "fig" / "figure.svg");
  std::string why;
  CHECK_MESSAGE(testsupport::xml_well_formed(svg, &why), why);
  CHECK(svg.find("<svg") != std::string::npos);

  // Figure over a schema-violating CSV names the missing column.
  testsupport::write_text(dir.path() / "bad.csv", "m,cond,metric,mean,sd,count\n");
  const RunResult fb = run_cli("figure --input bad.csv --out figbad", dir.path());
  CHECK(fb.exit_code == 2);
  CHECK(fb.err.find("condition") != std::string::npos);
}

TEST_CASE("transform flag restricts the experiment conditions") {
  const TempDir dir("cli_transform");
  testsupport::write_text(dir.path() / "cfg.json", kSmallConfig);
  const RunResult r =
      run_cli("experiment --config cfg.json --transform raw --out exp", dir.path());
  REQUIRE(r.exit_code == 0);
  const std::string agg = testsupport::read_file(dir.path() / "exp" / "aggregate.csv");
  CHECK(testsupport::count_lines(agg) == 1 + 11);
  CHECK(agg.find("percentile") == std::string::npos);
}
