#include "krig/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "krig/bench.hpp"
#include "krig/csv.hpp"
#include "krig/errors.hpp"
#include "krig/kriging.hpp"
#include "krig/verify.hpp"

namespace krig::cli {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "}";
}

void print_suite(std::ostream& out, const verify::SuiteResult& r) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "[%s] %-22s max err %.3e  (tol %.1e, %zu instances, %zu checks)",
                r.pass ? "PASS" : "FAIL", r.name.c_str(), r.max_err, r.tolerance, r.instances,
                r.checks);
  out << buf;
  if (!r.note.empty()) out << "  [" << r.note << "]";
  out << "\n";
}

// Expects columns x1..xd (+ trailing z when with_values). Returns d.
std::size_t check_schema(const Table& table, bool with_values, const std::string& source) {
  const std::size_t min_cols = with_values ? 2 : 1;
  if (table.header.size() < min_cols)
    throw CsvParseError(source, 1, with_values ? "need columns x1,...,xd,z" : "need columns x1,...,xd");
  const std::size_t d = table.header.size() - (with_values ? 1 : 0);
  for (std::size_t i = 0; i < d; ++i) {
    const std::string want = "x" + std::to_string(i + 1);
    if (table.header[i] != want)
      throw CsvParseError(source, 1, "expected column '" + want + "', found '" + table.header[i] + "'");
  }
  if (with_values && table.header.back() != "z")
    throw CsvParseError(source, 1, "expected trailing column 'z', found '" + table.header.back() + "'");
  return d;
}

void split_points(const Table& table, std::size_t d, bool with_values, std::vector<Point>& points,
                  std::vector<double>& values) {
  points.reserve(table.rows.size());
  if (with_values) values.reserve(table.rows.size());
  for (const std::vector<double>& row : table.rows) {
    Point p;
    p.coords.assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(d));
    points.push_back(std::move(p));
    if (with_values) values.push_back(row.back());
  }
}

}  // namespace

Kernel make_kernel(const KernelSpec& spec) {
  if (spec.family == "brownian") return Kernel::brownian(spec.variance);
  if (spec.family == "squared-exponential" || spec.family == "se")
    return Kernel::squared_exponential(spec.variance, spec.lengthscale);
  if (spec.family == "matern52") return Kernel::matern52(spec.variance, spec.lengthscale);
  throw std::invalid_argument("unknown kernel family '" + spec.family +
                              "' (expected brownian, squared-exponential or matern52)");
}

int cmd_counterexample(std::ostream& out) {
  const Kernel wiener = Kernel::brownian(1.0);
  const KrigingState prior = fit(wiener, {}, {}, 0.0);
  const std::vector<Point> x_new = {Point{{0.5}}, Point{{1.0}}};
  const ConditionalBlock block = conditional_block(prior, x_new);
  const Point x{{0.75}};

  const KrigingWeights w = weights_new(block, x);
  const double prior_variance = predict_variance(prior, x);
  const double corrected = update_variance_corrected(prior, block, x);
  const double emery = update_variance_emery(prior, block, x);
  const double correction =
      2.0 * w.lambda_new[0] * w.lambda_new[1] * eval(wiener, x_new[0], x_new[1]);

  out << "counter-example: kernel min(x,y), observations at x1=0.5 and x2=1.0, query x=0.75\n";
  out << "prior_variance      " << fmt(prior_variance) << "\n";
  out << "weight_1            " << fmt(w.lambda_new[0]) << "\n";
  out << "weight_2            " << fmt(w.lambda_new[1]) << "\n";
  out << "corrected_variance  " << fmt(corrected) << "\n";
  out << "emery_variance      " << fmt(emery) << "\n";
  out << "correction_term     " << fmt(correction) << "\n";
  out << "note: emery_variance drops the off-diagonal conditional covariance and is too large;\n";
  out << "      corrected_variance matches the direct Simple-Kriging value.\n";

  const double dev = std::max({std::abs(prior_variance - 0.75), std::abs(w.lambda_new[0] - 0.5),
                               std::abs(w.lambda_new[1] - 0.5), std::abs(corrected - 0.125),
                               std::abs(emery - 0.375), std::abs(correction - 0.25)});
  out << "max_deviation       " << fmt(dev) << "\n";
  out << "status              " << (dev <= 1e-12 ? "OK" : "MISMATCH") << "\n";
  return dev <= 1e-12 ? kExitOk : kExitVerificationFailure;
}

int cmd_verify(const VerifyConfig& config, std::ostream& out) {
  Kernel kernel = make_kernel(config.kernel);
  if (config.n.empty() || config.k.empty() || config.d.empty()) {
    out << "error: --n, --k and --d must be nonempty\n";
    return kExitUsage;
  }
  if (config.trials == 0) {
    out << "error: --trials must be >= 1\n";
    return kExitUsage;
  }
  for (std::size_t k : config.k)
    if (k == 0) {
      out << "error: batch sizes must be >= 1\n";
      return kExitUsage;
    }
  for (std::size_t d : config.d) {
    if (d == 0) {
      out << "error: dimensions must be >= 1\n";
      return kExitUsage;
    }
    if (kernel.family() == KernelFamily::brownian && d != 1) {
      out << "error: brownian kernel requires d = 1 (got d = " << d << ")\n";
      return kExitUsage;
    }
  }

  out << "kernel " << kernel.name() << "(variance=" << kernel.variance();
  if (kernel.family() != KernelFamily::brownian)
    out << ", lengthscale=" << kernel.lengthscale();
  out << "), base jitter " << fmt_short(config.jitter) << ", seed " << config.seed << "\n";

  const std::vector<verify::Instance> instances = verify::make_grid(
      kernel, config.n, config.k, config.d, config.trials, config.jitter, config.seed);
  out << "grid: n=" << join_sizes(config.n) << " k=" << join_sizes(config.k)
      << " d=" << join_sizes(config.d) << ", trials " << config.trials << " -> "
      << instances.size() << " instances, 20 queries each\n";
  for (std::size_t d : config.d) {
    const double floor = verify::stability_jitter_floor(kernel, d);
    if (floor > config.jitter)
      out << "note: " << kernel.name() << " designs in d=" << d << " run with nugget "
          << fmt_short(floor) << " (numerically rank-deficient at base jitter)\n";
  }

  const std::vector<verify::SuiteResult> results = {
      verify::suite_oracle_equivalence(instances), verify::suite_prop2(instances),
      verify::suite_total_variance(instances), verify::suite_emery_gap(instances),
      verify::suite_k1_collapse(instances)};

  bool all_pass = true;
  for (const verify::SuiteResult& r : results) {
    print_suite(out, r);
    all_pass = all_pass && r.pass;
  }
  out << "result: " << (all_pass ? "PASS" : "FAIL") << "\n";
  return all_pass ? kExitOk : kExitVerificationFailure;
}

int cmd_bench(const BenchCliConfig& config, std::ostream& csv_fallback, std::ostream& log) {
  if (config.trials == 0) {
    log << "error: --trials must be >= 1\n";
    return kExitUsage;
  }
  bench::BenchConfig bc;
  bc.n_list = config.n;
  bc.k_list = config.k;
  bc.trials = config.trials;
  bc.seed = config.seed;

  log << "bench: kernel " << bc.kernel.name() << "(variance=" << bc.kernel.variance()
      << ", lengthscale=" << bc.kernel.lengthscale() << "), jitter " << fmt_short(bc.jitter)
      << ", d=" << bc.dim << ", trials " << bc.trials << " (median, one warm-up discarded)\n";

  const bench::BenchReport report = bench::run_bench(bc);
  if (!report.agreement_ok) {
    log << "error: " << report.failure << "\n";
    log << "no timings emitted.\n";
    return kExitVerificationFailure;
  }

  if (!config.out_path.empty() && config.out_path != "-") {
    std::ofstream file(config.out_path);
    if (!file) {
      log << "error: cannot open '" << config.out_path << "' for writing\n";
      return kExitUsage;
    }
    bench::write_csv(report, file);
    log << "wrote " << report.rows.size() << " rows to " << config.out_path << "\n";
  } else {
    bench::write_csv(report, csv_fallback);
  }
  return kExitOk;
}

int cmd_predict(const PredictConfig& config, std::ostream& out_fallback, std::ostream& log) {
  if (config.format != "csv" && config.format != "json") {
    log << "error: --format must be csv or json\n";
    return kExitUsage;
  }

  try {
    const Table obs = read_numeric_csv_file(config.obs_path);
    const std::size_t d = check_schema(obs, true, config.obs_path);

    const Kernel kernel = make_kernel(config.kernel);
    if (kernel.family() == KernelFamily::brownian && d != 1) {
      log << "error: brownian kernel requires 1-d observations, file has d = " << d << "\n";
      return kExitUsage;
    }

    std::vector<Point> points;
    std::vector<double> values;
    split_points(obs, d, true, points, values);

    KrigingState state = fit(kernel, std::move(points), std::move(values), config.jitter);

    if (!config.batch_path.empty()) {
      const Table batch_table = read_numeric_csv_file(config.batch_path);
      if (check_schema(batch_table, true, config.batch_path) != d)
        throw CsvParseError(config.batch_path, 1,
                            "batch dimension differs from observations (d = " + std::to_string(d) + ")");
      UpdateBatch batch;
      split_points(batch_table, d, true, batch.points, batch.values);
      if (batch.points.empty())
        throw CsvParseError(config.batch_path, 1, "batch file has no rows");
      state = assimilate(state, batch);
    }

    const Table query = read_numeric_csv_file(config.query_path);
    if (check_schema(query, false, config.query_path) != d)
      throw CsvParseError(config.query_path, 1,
                          "query dimension differs from observations (d = " + std::to_string(d) + ")");
    std::vector<Point> queries;
    std::vector<double> unused;
    split_points(query, d, false, queries, unused);

    std::ostringstream body;
    if (config.format == "csv") {
      for (std::size_t i = 0; i < d; ++i) body << "x" << (i + 1) << ",";
      body << "mean,variance\n";
      for (const Point& q : queries) {
        for (double c : q.coords) body << fmt(c) << ",";
        body << fmt(predict_mean(state, q)) << "," << fmt(predict_variance(state, q)) << "\n";
      }
    } else {
      nlohmann::json j;
      j["kernel"] = {{"family", kernel.name()}, {"variance", kernel.variance()}};
      if (kernel.family() != KernelFamily::brownian)
        j["kernel"]["lengthscale"] = kernel.lengthscale();
      j["jitter"] = config.jitter;
      j["n_observations"] = state.size();
      j["predictions"] = nlohmann::json::array();
      for (const Point& q : queries)
        j["predictions"].push_back({{"point", q.coords},
                                    {"mean", predict_mean(state, q)},
                                    {"variance", predict_variance(state, q)}});
      body << j.dump(2) << "\n";
    }

    if (!config.out_path.empty() && config.out_path != "-") {
      std::ofstream file(config.out_path);
      if (!file) {
        log << "error: cannot open '" << config.out_path << "' for writing\n";
        return kExitUsage;
      }
      file << body.str();
    } else {
      out_fallback << body.str();
    }
    return kExitOk;
  } catch (const CsvParseError& e) {
    log << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotPositiveDefinite& e) {
    log << "error: " << e.what() << "\n";
    log << "hint: pass a small --jitter (e.g. 1e-10) or remove duplicate observation points.\n";
    return kExitNumeric;
  } catch (const DegenerateNewPoint& e) {
    log << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}

}  // namespace krig::cli
