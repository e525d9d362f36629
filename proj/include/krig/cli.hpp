#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "krig/kernels.hpp"

namespace krig::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

struct KernelSpec {
  std::string family = "squared-exponential";
  double variance = 1.0;
  double lengthscale = 0.3;
};

// Accepts "brownian", "squared-exponential" (alias "se"), "matern52".
Kernel make_kernel(const KernelSpec& spec);

// Reproduces the Wiener-kernel counter-example: observations at 0.5 and 1.0,
// prediction at 0.75. Prints the prior variance, the two weights, the
// corrected and diagonal-only posterior variances and the off-diagonal
// correction term; exits nonzero if any value is off by more than 1e-12.
int cmd_counterexample(std::ostream& out);

struct VerifyConfig {
  std::uint64_t seed = 42;
  std::size_t trials = 5;
  std::vector<std::size_t> n{0, 5, 20};
  std::vector<std::size_t> k{1, 2, 5};
  std::vector<std::size_t> d{1, 3};
  KernelSpec kernel;
  double jitter = 1e-10;
};

// Runs the oracle-equivalence, Prop-2, total-variance, emery-gap and
// k1-collapse suites over seeded random instances. Returns 0 when every
// suite passes.
int cmd_verify(const VerifyConfig& config, std::ostream& out);

struct BenchCliConfig {
  std::vector<std::size_t> n{500, 1000, 2000};
  std::vector<std::size_t> k{10};
  std::size_t trials = 5;
  std::uint64_t seed = 42;
  std::string out_path;  // empty or "-" writes to the fallback stream
};

int cmd_bench(const BenchCliConfig& config, std::ostream& csv_fallback, std::ostream& log);

struct PredictConfig {
  std::string obs_path;
  std::string batch_path;  // optional second batch, assimilated via the update path
  std::string query_path;
  KernelSpec kernel;
  double jitter = 0.0;
  std::string format = "csv";  // "csv" or "json"
  std::string out_path;        // empty or "-" writes to the fallback stream
};

int cmd_predict(const PredictConfig& config, std::ostream& out_fallback, std::ostream& log);

}  // namespace krig::cli
