// krig: Simple-Kriging prediction with batch-sequential posterior updates.
//
// Subcommands:
//   counterexample   reproduce the Wiener-kernel batch-update counter-example
//   verify           randomized verification against the brute-force oracle
//   bench            time batch assimilation vs full refit, CSV output
//   predict          batch prediction over CSV observations/queries

#include <iostream>

#include <CLI11.hpp>

#include "krig/cli.hpp"
#include "krig/errors.hpp"

namespace {

void add_kernel_options(CLI::App* cmd, krig::cli::KernelSpec& spec) {
  cmd->add_option("--kernel", spec.family,
                  "kernel family: brownian, squared-exponential (se), matern52")
      ->capture_default_str();
  cmd->add_option("--variance", spec.variance, "kernel variance (> 0)")->capture_default_str();
  cmd->add_option("--lengthscale", spec.lengthscale, "kernel lengthscale (> 0, ignored by brownian)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simple Kriging with corrected batch-sequential update equations"};
  app.require_subcommand(1);

  CLI::App* ce = app.add_subcommand(
      "counterexample", "Reproduce the min(x,y)-kernel counter-example for the diagonal-only "
                        "batch variance update");

  krig::cli::VerifyConfig verify_cfg;
  CLI::App* vf = app.add_subcommand(
      "verify", "Verify the update equations against a brute-force refit oracle on seeded "
                "random instances");
  vf->add_option("--seed", verify_cfg.seed, "RNG seed")->capture_default_str();
  vf->add_option("--trials", verify_cfg.trials, "instances per grid cell")->capture_default_str();
  vf->add_option("--n", verify_cfg.n, "initial design sizes")->capture_default_str();
  vf->add_option("--k", verify_cfg.k, "batch sizes (>= 1)")->capture_default_str();
  vf->add_option("--d", verify_cfg.d, "input dimensions")->capture_default_str();
  add_kernel_options(vf, verify_cfg.kernel);
  vf->add_option("--jitter", verify_cfg.jitter, "base nugget added at factorization")
      ->capture_default_str();

  krig::cli::BenchCliConfig bench_cfg;
  CLI::App* bn = app.add_subcommand(
      "bench", "Time assimilation via block factor update against a full refit");
  bn->add_option("--n", bench_cfg.n, "initial design sizes")->capture_default_str();
  bn->add_option("--k", bench_cfg.k, "batch sizes (>= 1)")->capture_default_str();
  bn->add_option("--trials", bench_cfg.trials, "timing trials per cell (median)")
      ->capture_default_str();
  bn->add_option("--seed", bench_cfg.seed, "RNG seed")->capture_default_str();
  bn->add_option("--out", bench_cfg.out_path, "CSV output file ('-' for stdout)")
      ->capture_default_str();

  krig::cli::PredictConfig predict_cfg;
  CLI::App* pd = app.add_subcommand("predict", "Predict mean/variance at query points from CSV data");
  pd->add_option("--obs", predict_cfg.obs_path, "observations CSV with columns x1,...,xd,z")
      ->required();
  pd->add_option("--batch", predict_cfg.batch_path,
                 "optional second observation CSV, assimilated via the update path");
  pd->add_option("--query", predict_cfg.query_path, "query CSV with columns x1,...,xd")->required();
  add_kernel_options(pd, predict_cfg.kernel);
  pd->add_option("--jitter", predict_cfg.jitter, "nugget added at factorization")
      ->capture_default_str();
  pd->add_option("--format", predict_cfg.format, "output format: csv or json")
      ->capture_default_str();
  pd->add_option("--out", predict_cfg.out_path, "output file ('-' for stdout)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? krig::cli::kExitOk : krig::cli::kExitUsage;
  }

  try {
    if (ce->parsed()) return krig::cli::cmd_counterexample(std::cout);
    if (vf->parsed()) return krig::cli::cmd_verify(verify_cfg, std::cout);
    if (bn->parsed()) return krig::cli::cmd_bench(bench_cfg, std::cout, std::cerr);
    if (pd->parsed()) return krig::cli::cmd_predict(predict_cfg, std::cout, std::cerr);
  } catch (const krig::NotPositiveDefinite& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: pass a small --jitter (e.g. 1e-10) or remove duplicate points.\n";
    return krig::cli::kExitNumeric;
  } catch (const krig::DegenerateNewPoint& e) {
    std::cerr << "error: " << e.what() << "\n";
    return krig::cli::kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return krig::cli::kExitUsage;
  }
  return krig::cli::kExitUsage;
}
