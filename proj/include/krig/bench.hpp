#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "krig/kernels.hpp"

namespace krig::bench {

// Wall-clock comparison of batch assimilation against a full refit. Both
// paths must agree numerically on sampled predictions before anything is
// timed; if they do not, no timings are emitted.

struct BenchConfig {
  std::vector<std::size_t> n_list{500, 1000, 2000};
  std::vector<std::size_t> k_list{10};
  std::size_t trials = 5;  // median over this many runs, after one warm-up
  std::uint64_t seed = 42;
  Kernel kernel = Kernel::squared_exponential(1.0, 0.3);
  double jitter = 1e-10;
  std::size_t dim = 1;
  double agreement_tol = 1e-6;
  std::size_t check_queries = 5;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t k = 0;
  double update_time_s = 0.0;
  double refit_time_s = 0.0;
  double speedup = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  bool agreement_ok = true;
  std::string failure;
};

BenchReport run_bench(const BenchConfig& config);

// Header `n,k,update_time_s,refit_time_s,speedup` plus one row per grid cell.
void write_csv(const BenchReport& report, std::ostream& out);

}  // namespace krig::bench
