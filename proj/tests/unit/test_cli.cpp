#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "krig/bench.hpp"
#include "krig/cli.hpp"
#include "krig/csv.hpp"

using namespace krig;

namespace {

namespace fs = std::filesystem;

// Temp files for the predict round-trips.
struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() / ("krig_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& content) const {
    const fs::path p = dir / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::istringstream in(s);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// Value of a "label   number" report line.
double labeled_value(const std::string& text, const std::string& label) {
  const std::size_t pos = text.find(label);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + label.size()));
}

std::vector<double> parse_csv_row(const std::string& line) {
  std::vector<double> out;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) out.push_back(std::stod(field));
  return out;
}

}  // namespace

TEST_CASE("csv reader parses and reports malformed rows") {
  std::istringstream good("x1,z\n0.5,1\n1.0,2\n");
  const cli::Table t = cli::read_numeric_csv(good, "good");
  REQUIRE(t.header.size() == 2);
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[1][0] == 1.0);

  std::istringstream bad("x1,z\n0.5,1\noops,2\n");
  try {
    cli::read_numeric_csv(bad, "bad");
    FAIL("expected CsvParseError");
  } catch (const cli::CsvParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("bad:3") != std::string::npos);
  }

  std::istringstream short_row("x1,x2\n0.5\n");
  CHECK_THROWS_AS(cli::read_numeric_csv(short_row, "short"), cli::CsvParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(cli::read_numeric_csv(empty, "empty"), cli::CsvParseError);
}

TEST_CASE("make_kernel understands the family names") {
  CHECK(cli::make_kernel({"brownian", 1.0, 0.3}).family() == KernelFamily::brownian);
  CHECK(cli::make_kernel({"se", 1.0, 0.3}).family() == KernelFamily::squared_exponential);
  CHECK(cli::make_kernel({"matern52", 1.0, 0.3}).family() == KernelFamily::matern52);
  CHECK_THROWS_AS(cli::make_kernel({"cubic", 1.0, 0.3}), std::invalid_argument);
}

TEST_CASE("counterexample command prints the reference values and succeeds") {
  std::ostringstream out;
  CHECK(cli::cmd_counterexample(out) == cli::kExitOk);
  const std::string text = out.str();
  CHECK(labeled_value(text, "prior_variance") == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(labeled_value(text, "weight_1") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(labeled_value(text, "weight_2") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(labeled_value(text, "corrected_variance") == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(labeled_value(text, "emery_variance") == doctest::Approx(0.375).epsilon(1e-12));
  CHECK(labeled_value(text, "correction_term") == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(text.find("status              OK") != std::string::npos);

  std::ostringstream again;
  cli::cmd_counterexample(again);
  CHECK(out.str() == again.str());  // byte-identical
}

TEST_CASE("verify command passes on a small config and is reproducible") {
  cli::VerifyConfig cfg;
  cfg.trials = 1;
  cfg.n = {0, 4};
  cfg.k = {1, 2};
  cfg.d = {1};
  cfg.kernel.family = "matern52";
  cfg.seed = 11;

  std::ostringstream a, b;
  CHECK(cli::cmd_verify(cfg, a) == cli::kExitOk);
  CHECK(cli::cmd_verify(cfg, b) == cli::kExitOk);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("result: PASS") != std::string::npos);
}

TEST_CASE("verify command rejects brownian in three dimensions") {
  cli::VerifyConfig cfg;
  cfg.kernel.family = "brownian";
  cfg.d = {1, 3};
  std::ostringstream out;
  CHECK(cli::cmd_verify(cfg, out) == cli::kExitUsage);
  CHECK(out.str().find("brownian") != std::string::npos);
}

TEST_CASE("bench command emits the declared CSV columns") {
  cli::BenchCliConfig cfg;
  cfg.n = {0, 48};
  cfg.k = {4};
  cfg.trials = 2;

  std::ostringstream csv, log;
  CHECK(cli::cmd_bench(cfg, csv, log) == cli::kExitOk);
  const std::vector<std::string> lines = split_lines(csv.str());
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "n,k,update_time_s,refit_time_s,speedup");
  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::istringstream in(lines[row]);
    std::string field;
    std::size_t count = 0;
    while (std::getline(in, field, ',')) ++count;
    CHECK(count == 5);
  }
}

TEST_CASE("bench refuses to emit timings when the agreement pre-check fails") {
  bench::BenchConfig cfg;
  cfg.n_list = {32};
  cfg.k_list = {3};
  cfg.trials = 1;
  cfg.agreement_tol = 0.0;  // impossible to satisfy: any roundoff trips it
  const bench::BenchReport rep = bench::run_bench(cfg);
  CHECK(!rep.agreement_ok);
  CHECK(rep.rows.empty());
  CHECK(!rep.failure.empty());

  cli::BenchCliConfig cli_cfg;
  cli_cfg.n = {32};
  cli_cfg.k = {3};
  cli_cfg.trials = 0;  // invalid trial count is a usage error
  std::ostringstream csv, log;
  CHECK(cli::cmd_bench(cli_cfg, csv, log) == cli::kExitUsage);
}

TEST_CASE("predict command reproduces the counter-example from files") {
  TempDir tmp;
  const std::string obs = tmp.write("obs.csv", "x1,z\n0.5,1\n1.0,2\n");
  const std::string query = tmp.write("query.csv", "x1\n0.75\n");

  cli::PredictConfig cfg;
  cfg.obs_path = obs;
  cfg.query_path = query;
  cfg.kernel.family = "brownian";

  std::ostringstream out, log;
  REQUIRE(cli::cmd_predict(cfg, out, log) == cli::kExitOk);
  const std::vector<std::string> lines = split_lines(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "x1,mean,variance");
  const std::vector<double> row = parse_csv_row(lines[1]);
  REQUIRE(row.size() == 3);
  CHECK(row[0] == 0.75);
  CHECK(row[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(row[2] == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("predict command with an empty observation file returns the prior") {
  TempDir tmp;
  cli::PredictConfig cfg;
  cfg.obs_path = tmp.write("obs.csv", "x1,z\n");
  cfg.query_path = tmp.write("query.csv", "x1\n0.75\n");
  cfg.kernel.family = "brownian";

  std::ostringstream out, log;
  REQUIRE(cli::cmd_predict(cfg, out, log) == cli::kExitOk);
  const std::vector<std::string> lines = split_lines(out.str());
  REQUIRE(lines.size() == 2);
  CHECK(lines[1] == "0.75,0,0.75");
}

TEST_CASE("predict command assimilates a second batch like direct observations") {
  TempDir tmp;
  const std::string query = tmp.write("query.csv", "x1\n0.75\n0.3\n");

  cli::PredictConfig split;
  split.obs_path = tmp.write("obs1.csv", "x1,z\n0.5,1\n");
  split.batch_path = tmp.write("obs2.csv", "x1,z\n1.0,2\n");
  split.query_path = query;
  split.kernel.family = "brownian";

  cli::PredictConfig joint;
  joint.obs_path = tmp.write("obs_all.csv", "x1,z\n0.5,1\n1.0,2\n");
  joint.query_path = query;
  joint.kernel.family = "brownian";

  std::ostringstream out_split, out_joint, log;
  REQUIRE(cli::cmd_predict(split, out_split, log) == cli::kExitOk);
  REQUIRE(cli::cmd_predict(joint, out_joint, log) == cli::kExitOk);
  CHECK(out_split.str() == out_joint.str());
}

TEST_CASE("predict command writes parseable json") {
  TempDir tmp;
  cli::PredictConfig cfg;
  cfg.obs_path = tmp.write("obs.csv", "x1,z\n0.5,1\n1.0,2\n");
  cfg.query_path = tmp.write("query.csv", "x1\n0.75\n");
  cfg.kernel.family = "brownian";
  cfg.format = "json";

  std::ostringstream out, log;
  REQUIRE(cli::cmd_predict(cfg, out, log) == cli::kExitOk);
  const nlohmann::json j = nlohmann::json::parse(out.str());
  CHECK(j["n_observations"] == 2);
  CHECK(j["predictions"][0]["mean"] == doctest::Approx(1.5));
  CHECK(j["predictions"][0]["variance"] == doctest::Approx(0.125));
}

TEST_CASE("predict command error paths") {
  TempDir tmp;
  const std::string query = tmp.write("query.csv", "x1\n0.75\n");

  // malformed row: error names the line
  cli::PredictConfig bad;
  bad.obs_path = tmp.write("bad.csv", "x1,z\n0.5,1\nnope,2\n");
  bad.query_path = query;
  bad.kernel.family = "brownian";
  std::ostringstream out1, log1;
  CHECK(cli::cmd_predict(bad, out1, log1) == cli::kExitUsage);
  CHECK(log1.str().find(":3") != std::string::npos);

  // wrong header
  cli::PredictConfig head;
  head.obs_path = tmp.write("head.csv", "a,b\n0.5,1\n");
  head.query_path = query;
  std::ostringstream out2, log2;
  CHECK(cli::cmd_predict(head, out2, log2) == cli::kExitUsage);

  // duplicate observations at zero jitter: numeric failure with a jitter hint
  cli::PredictConfig dup;
  dup.obs_path = tmp.write("dup.csv", "x1,z\n0.5,1\n0.5,1\n");
  dup.query_path = query;
  dup.kernel.family = "brownian";
  std::ostringstream out3, log3;
  CHECK(cli::cmd_predict(dup, out3, log3) == cli::kExitNumeric);
  CHECK(log3.str().find("jitter") != std::string::npos);

  // brownian on 2-d data
  cli::PredictConfig dims;
  dims.obs_path = tmp.write("d2.csv", "x1,x2,z\n0.5,0.5,1\n");
  dims.query_path = tmp.write("q2.csv", "x1,x2\n0.1,0.2\n");
  dims.kernel.family = "brownian";
  std::ostringstream out4, log4;
  CHECK(cli::cmd_predict(dims, out4, log4) == cli::kExitUsage);

  // unknown format
  cli::PredictConfig fmt;
  fmt.obs_path = dup.obs_path;
  fmt.query_path = query;
  fmt.format = "xml";
  std::ostringstream out5, log5;
  CHECK(cli::cmd_predict(fmt, out5, log5) == cli::kExitUsage);
}
