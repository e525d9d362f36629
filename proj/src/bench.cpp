#include "krig/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <random>

#include "krig/kriging.hpp"
#include "krig/linalg.hpp"
#include "krig/verify.hpp"

namespace krig::bench {

namespace {

volatile double g_sink = 0.0;  // keeps timed results observable

template <typename F>
double time_once(F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

template <typename F>
double median_time(F&& body, std::size_t trials) {
  body();  // warm-up, discarded
  std::vector<double> times(trials);
  for (double& t : times) t = time_once(body);
  std::sort(times.begin(), times.end());
  const std::size_t mid = trials / 2;
  if (trials % 2 == 1) return times[mid];
  return 0.5 * (times[mid - 1] + times[mid]);
}

}  // namespace

BenchReport run_bench(const BenchConfig& config) {
  BenchReport report;
  for (std::size_t n : config.n_list)
    for (std::size_t k : config.k_list) {
      if (k == 0) {
        report.agreement_ok = false;
        report.failure = "bench requires k >= 1";
        return report;
      }
      std::mt19937_64 rng(config.seed + 7919 * n + k);
      std::uniform_real_distribution<double> unif(0.0, 1.0);

      const std::size_t total = n + k;
      std::vector<Point> design(total);
      for (Point& p : design) {
        p.coords.resize(config.dim);
        for (double& c : p.coords) c = unif(rng);
      }

      // Observations from the prior (one untimed factorization).
      const CholeskyFactor draw =
          cholesky(gram(config.kernel, design), std::max(config.jitter, 1e-12));
      std::normal_distribution<double> normal(0.0, 1.0);
      std::vector<double> xi(total);
      for (double& v : xi) v = normal(rng);
      std::vector<double> z(total, 0.0);
      for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = 0; j <= i; ++j) z[i] += draw.lower()(i, j) * xi[j];

      const std::vector<Point> x_old(design.begin(), design.begin() + static_cast<std::ptrdiff_t>(n));
      const std::vector<double> z_old(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(n));
      const UpdateBatch batch{{design.begin() + static_cast<std::ptrdiff_t>(n), design.end()},
                              {z.begin() + static_cast<std::ptrdiff_t>(n), z.end()}};

      const KrigingState base = fit(config.kernel, x_old, z_old, config.jitter);

      // Agreement pre-check: no timings unless both paths predict the same.
      {
        const KrigingState via_update = assimilate(base, batch);
        const KrigingState via_refit = fit(config.kernel, design, z, config.jitter);
        for (std::size_t q = 0; q < config.check_queries; ++q) {
          Point query;
          query.coords.resize(config.dim);
          for (double& c : query.coords) c = unif(rng);
          const double em = verify::rel_err(predict_mean(via_update, query),
                                            predict_mean(via_refit, query));
          const double ev = verify::rel_err(predict_variance(via_update, query),
                                            predict_variance(via_refit, query));
          if (em > config.agreement_tol || ev > config.agreement_tol) {
            report.agreement_ok = false;
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "agreement pre-check failed at n=%zu k=%zu: mean err %.3e, "
                          "variance err %.3e (tol %.1e)",
                          n, k, em, ev, config.agreement_tol);
            report.failure = buf;
            return report;
          }
        }
      }

      BenchRow row;
      row.n = n;
      row.k = k;
      row.update_time_s = median_time(
          [&] {
            const KrigingState s = assimilate(base, batch);
            g_sink = g_sink + s.alpha().back();
          },
          config.trials);
      row.refit_time_s = median_time(
          [&] {
            const KrigingState s = fit(config.kernel, design, z, config.jitter);
            g_sink = g_sink + s.alpha().back();
          },
          config.trials);
      row.speedup = row.refit_time_s / row.update_time_s;
      report.rows.push_back(row);
    }
  return report;
}

void write_csv(const BenchReport& report, std::ostream& out) {
  out << "n,k,update_time_s,refit_time_s,speedup\n";
  char buf[128];
  for (const BenchRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%zu,%.6e,%.6e,%.3f\n", r.n, r.k, r.update_time_s,
                  r.refit_time_s, r.speedup);
    out << buf;
  }
}

}  // namespace krig::bench
