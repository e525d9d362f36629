#include "krig/verify.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "krig/linalg.hpp"
#include "krig/oracle.hpp"

namespace krig::verify {

namespace {

double sep_for(std::size_t d, std::size_t total) {
  if (total == 0) return 0.0;
  if (d == 1) return std::min(0.02, 0.4 / static_cast<double>(total));
  return std::min(0.10, 0.9 / std::pow(static_cast<double>(total), 1.0 / static_cast<double>(d)));
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double dd = a.coords[i] - b.coords[i];
    s += dd * dd;
  }
  return std::sqrt(s);
}

std::vector<Point> separated_design(std::size_t count, std::size_t d, double lo, double sep,
                                    std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(lo, 1.0);
  std::vector<Point> pts;
  pts.reserve(count);
  std::size_t stale = 0;
  while (pts.size() < count) {
    Point p;
    p.coords.resize(d);
    for (double& c : p.coords) c = unif(rng);
    bool ok = true;
    for (const Point& q : pts)
      if (distance(p, q) < sep) {
        ok = false;
        break;
      }
    if (ok) {
      pts.push_back(std::move(p));
      stale = 0;
    } else if (++stale > 2000) {
      sep *= 0.5;  // degenerate request; relax rather than spin
      stale = 0;
    }
  }
  return pts;
}

void record(SuiteResult& r, double err) {
  r.checks += 1;
  if (err > r.max_err) r.max_err = err;
}

struct Fitted {
  KrigingState state;
  ConditionalBlock block;
  UpdateBatch batch;
  KrigingState updated;
  std::vector<Point> x_all;
  std::vector<double> z_all;
};

Fitted prepare(const Instance& in) {
  KrigingState state = fit(in.kernel, in.x_old, in.z_old, in.jitter);
  ConditionalBlock block = conditional_block(state, in.x_new);
  UpdateBatch batch{in.x_new, in.z_new};
  KrigingState updated = assimilate(state, batch);
  std::vector<Point> x_all = in.x_old;
  x_all.insert(x_all.end(), in.x_new.begin(), in.x_new.end());
  std::vector<double> z_all = in.z_old;
  z_all.insert(z_all.end(), in.z_new.begin(), in.z_new.end());
  return Fitted{std::move(state), std::move(block), std::move(batch), std::move(updated),
                std::move(x_all), std::move(z_all)};
}

// lambda^T (Sigma + jitter I) lambda, the quadratic form in the matrix the
// weights were solved against.
double regularized_quad_form(const ConditionalBlock& block, const std::vector<double>& lam_x,
                             const std::vector<double>& lam_y) {
  const CovMatrix& s = block.sigma_new();
  const std::size_t k = lam_x.size();
  double q = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < k; ++j) row += (s(i, j) + (i == j ? block.jitter() : 0.0)) * lam_y[j];
    q += lam_x[i] * row;
  }
  return q;
}

}  // namespace

double rel_err(double got, double want) { return std::abs(got - want) / (1.0 + std::abs(want)); }

double stability_jitter_floor(const Kernel& kernel, std::size_t d) {
  if (kernel.family() == KernelFamily::squared_exponential && d == 1) return 1e-4;
  return 0.0;
}

Instance make_instance(const InstanceConfig& config) {
  const bool brownian = config.kernel.family() == KernelFamily::brownian;
  if (brownian && config.d != 1)
    throw std::invalid_argument("brownian kernel requires d = 1");
  if (config.k == 0) throw std::invalid_argument("instance needs k >= 1");
  if (config.d == 0) throw std::invalid_argument("instance needs d >= 1");

  std::mt19937_64 rng(config.seed);
  const double lo = brownian ? 0.05 : 0.0;
  const std::size_t total = config.n + config.k;

  Instance inst{config.kernel, config.jitter, {}, {}, {}, {}, {}};
  std::vector<Point> design = separated_design(total, config.d, lo, sep_for(config.d, total), rng);
  inst.x_old.assign(design.begin(), design.begin() + static_cast<std::ptrdiff_t>(config.n));
  inst.x_new.assign(design.begin() + static_cast<std::ptrdiff_t>(config.n), design.end());

  // Draw observations from the prior: z = L xi with L L^T ~ gram(design).
  const CholeskyFactor draw =
      cholesky(gram(config.kernel, design), std::max(config.jitter, 1e-12));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> xi(total);
  for (double& v : xi) v = normal(rng);
  std::vector<double> z(total, 0.0);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j <= i; ++j) z[i] += draw.lower()(i, j) * xi[j];
  inst.z_old.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(config.n));
  inst.z_new.assign(z.begin() + static_cast<std::ptrdiff_t>(config.n), z.end());

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  inst.queries.resize(config.n_queries);
  for (Point& q : inst.queries) {
    q.coords.resize(config.d);
    for (double& c : q.coords) c = unif(rng);
  }
  return inst;
}

std::vector<Instance> make_grid(const Kernel& kernel, const std::vector<std::size_t>& ns,
                                const std::vector<std::size_t>& ks,
                                const std::vector<std::size_t>& ds, std::size_t trials,
                                double base_jitter, std::uint64_t seed) {
  std::vector<Instance> out;
  std::uint64_t counter = 0;
  for (std::size_t d : ds)
    for (std::size_t n : ns)
      for (std::size_t k : ks)
        for (std::size_t t = 0; t < trials; ++t) {
          InstanceConfig cfg{kernel, n, k, d,
                             std::max(base_jitter, stability_jitter_floor(kernel, d)), 20,
                             seed + 1000003ULL * (++counter)};
          out.push_back(make_instance(cfg));
        }
  return out;
}

SuiteResult suite_oracle_equivalence(const std::vector<Instance>& instances, double tol) {
  SuiteResult r;
  r.name = "oracle-equivalence";
  r.tolerance = tol;
  for (const Instance& in : instances) {
    const Fitted f = prepare(in);
    r.instances += 1;
    const std::size_t q_count = in.queries.size();
    for (std::size_t qi = 0; qi < q_count; ++qi) {
      const Point& x = in.queries[qi];
      const Point& y = in.queries[(qi + 1) % q_count];
      const oracle::RefitPrediction ref =
          oracle::refit_predict(in.kernel, f.x_all, f.z_all, x, &y, in.jitter);
      record(r, rel_err(update_mean(f.state, f.block, f.batch, x), ref.mean));
      record(r, rel_err(update_variance_corrected(f.state, f.block, x), ref.variance));
      record(r, rel_err(update_cov_corrected(f.state, f.block, x, y), *ref.covariance));
      record(r, rel_err(predict_mean(f.updated, x), ref.mean));
      record(r, rel_err(predict_variance(f.updated, x), ref.variance));
      record(r, rel_err(predict_cov(f.updated, x, y), *ref.covariance));
    }
  }
  r.pass = r.max_err <= tol;
  return r;
}

SuiteResult suite_prop2(const std::vector<Instance>& instances, double tol) {
  SuiteResult r;
  r.name = "prop2-weights";
  r.tolerance = tol;
  for (const Instance& in : instances) {
    const Fitted f = prepare(in);
    r.instances += 1;
    const std::size_t k = f.block.batch_size();
    for (const Point& x : in.queries) {
      const std::vector<double> u = f.block.cross_old(x);
      const std::vector<double> lam = weights_new(f.block, x).lambda_new;

      double u_max = 0.0;
      for (double v : u) u_max = std::max(u_max, std::abs(v));
      for (std::size_t i = 0; i < k; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < k; ++j)
          row += (f.block.sigma_new()(i, j) + (i == j ? in.jitter : 0.0)) * lam[j];
        record(r, std::abs(row - u[i]) / (1.0 + u_max));
      }

      const oracle::FullWeights fw =
          oracle::full_weights(in.kernel, f.x_all, in.x_old.size(), x, in.jitter);
      for (std::size_t i = 0; i < k; ++i) record(r, rel_err(lam[i], fw.lambda_new[i]));
    }
  }
  r.pass = r.max_err <= tol;
  return r;
}

SuiteResult suite_total_variance(const std::vector<Instance>& instances, double tol) {
  SuiteResult r;
  r.name = "total-variance";
  r.tolerance = tol;
  for (const Instance& in : instances) {
    const Fitted f = prepare(in);
    r.instances += 1;
    for (const Point& x : in.queries) {
      const double var_old = predict_variance(f.state, x);
      const double var_new = update_variance_corrected(f.state, f.block, x);
      const std::vector<double> lam = weights_new(f.block, x).lambda_new;
      const double quad = regularized_quad_form(f.block, lam, lam);
      record(r, std::abs(var_old - var_new - quad) / (1.0 + std::abs(var_old)));
      record(r, std::max(0.0, var_new - var_old));  // posterior never exceeds prior
    }
  }
  r.pass = r.max_err <= tol;
  return r;
}

SuiteResult suite_emery_gap(const std::vector<Instance>& instances, double tol) {
  SuiteResult r;
  r.name = "emery-gap";
  r.tolerance = tol;
  for (const Instance& in : instances) {
    const Fitted f = prepare(in);
    r.instances += 1;
    const std::size_t k = f.block.batch_size();
    for (const Point& x : in.queries) {
      const double gap = update_variance_emery(f.state, f.block, x) -
                         update_variance_corrected(f.state, f.block, x);
      const std::vector<double> lam = weights_new(f.block, x).lambda_new;
      double off = 0.0;
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
          if (i != j) off += lam[i] * lam[j] * f.block.sigma_new()(i, j);
      record(r, std::abs(gap - off) / (1.0 + std::abs(gap)));
    }
  }
  r.pass = r.max_err <= tol;
  return r;
}

SuiteResult suite_diagonal_coincidence(const std::vector<Instance>& instances, double tol) {
  SuiteResult r;
  r.name = "diagonal-coincidence";
  r.tolerance = tol;
  for (const Instance& in : instances) {
    const Fitted f = prepare(in);
    r.instances += 1;
    const std::size_t k = f.block.batch_size();
    CovMatrix diag(k, k);
    for (std::size_t i = 0; i < k; ++i) diag(i, i) = f.block.sigma_new()(i, i);
    const ConditionalBlock diag_block(in.kernel, in.x_old, in.x_new, f.block.old_weights(),
                                      std::move(diag), in.jitter);
    for (const Point& x : in.queries) {
      const double emery = update_variance_emery(f.state, diag_block, x);
      const double corrected = update_variance_corrected(f.state, diag_block, x);
      record(r, rel_err(emery, corrected));
    }
  }
  r.pass = r.max_err <= tol;
  return r;
}

SuiteResult suite_k1_collapse(const std::vector<Instance>& instances, double tol) {
  SuiteResult r;
  r.name = "k1-collapse";
  r.tolerance = tol;
  for (const Instance& in : instances) {
    if (in.x_new.size() != 1) continue;
    const Fitted f = prepare(in);
    r.instances += 1;
    const std::size_t q_count = in.queries.size();
    for (std::size_t qi = 0; qi < q_count; ++qi) {
      const Point& x = in.queries[qi];
      const Point& y = in.queries[(qi + 1) % q_count];
      record(r, rel_err(update_variance_emery(f.state, f.block, x),
                        update_variance_corrected(f.state, f.block, x)));
      record(r, rel_err(update_cov_emery(f.state, f.block, x, y),
                        update_cov_corrected(f.state, f.block, x, y)));
    }
  }
  if (r.instances == 0) r.note = "no k = 1 instances in the grid";
  r.pass = r.max_err <= tol;
  return r;
}

}  // namespace krig::verify
