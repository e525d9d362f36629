#include "krig/kriging.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

#include "krig/errors.hpp"

namespace krig {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<double> cross_vector(const Kernel& kernel, const std::vector<Point>& pts,
                                 const Point& x) {
  std::vector<double> c(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) c[i] = kernel(pts[i], x);
  return c;
}

void check_finite(const std::vector<Point>& points, const std::vector<double>& values) {
  for (const Point& p : points) {
    if (p.dim() == 0) throw std::invalid_argument("point has dimension 0");
    for (double c : p.coords)
      if (!std::isfinite(c)) throw std::invalid_argument("point coordinate is not finite");
  }
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("observation value is not finite");
}

// Unclamped posterior covariance; the building block for everything below.
double predict_cov_raw(const KrigingState& state, const Point& x, const Point& y) {
  const double prior = state.kernel()(x, y);
  if (state.size() == 0) return prior;
  std::vector<double> wx = forward_solve(state.factor(), cross_vector(state.kernel(), state.points(), x));
  if (same_point(x, y)) return prior - dot(wx, wx);
  std::vector<double> wy = forward_solve(state.factor(), cross_vector(state.kernel(), state.points(), y));
  return prior - dot(wx, wy);
}

std::atomic<std::uint64_t> g_clamp_count{0};

// Per-message-class print budget so a long run cannot flood stderr.
void log_limited(std::atomic<std::uint64_t>& printed, const char* message) {
  const std::uint64_t seen = printed.fetch_add(1, std::memory_order_relaxed);
  if (seen < 5)
    std::fprintf(stderr, "%s", message);
  else if (seen == 5)
    std::fprintf(stderr, "krig: (further warnings of this kind suppressed)\n");
}

}  // namespace

namespace detail {

double clamp_variance(double raw, double scale) {
  if (raw >= 0.0) return raw;
  char buf[192];
  if (raw > -1e-9 * scale) {
    g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    static std::atomic<std::uint64_t> printed{0};
    std::snprintf(buf, sizeof(buf),
                  "krig: clamping negative posterior variance %.3e to 0 (roundoff)\n", raw);
    log_limited(printed, buf);
    return 0.0;
  }
  // Outside the roundoff window: return it as computed. A value this
  // negative means the covariance inputs were inconsistent (for instance the
  // deliberately-wrong diagonal-only update), and hiding it would be worse.
  static std::atomic<std::uint64_t> printed{0};
  std::snprintf(buf, sizeof(buf),
                "krig: posterior variance %.3e at scale %.3e is beyond the roundoff window; "
                "returning it unclamped (inconsistent covariance or jitter too small)\n",
                raw, scale);
  log_limited(printed, buf);
  return raw;
}

std::uint64_t variance_clamp_count() { return g_clamp_count.load(std::memory_order_relaxed); }

}  // namespace detail

KrigingState::KrigingState(Kernel kernel, std::vector<Point> points, std::vector<double> values,
                           double jitter, CholeskyFactor factor, std::vector<double> alpha)
    : kernel_(std::move(kernel)),
      points_(std::move(points)),
      values_(std::move(values)),
      jitter_(jitter),
      factor_(std::move(factor)),
      alpha_(std::move(alpha)) {}

KrigingState fit(Kernel kernel, std::vector<Point> points, std::vector<double> values,
                 double jitter) {
  if (points.size() != values.size())
    throw std::invalid_argument("fit: " + std::to_string(points.size()) + " points vs " +
                                std::to_string(values.size()) + " values");
  if (jitter < 0.0) throw std::invalid_argument("fit: jitter must be nonnegative");
  check_finite(points, values);

  CholeskyFactor factor;
  std::vector<double> alpha;
  if (!points.empty()) {
    factor = cholesky(gram(kernel, points), jitter);
    alpha = solve(factor, values);
  }
  return KrigingState(std::move(kernel), std::move(points), std::move(values), jitter,
                      std::move(factor), std::move(alpha));
}

double predict_mean(const KrigingState& state, const Point& x) {
  if (state.size() == 0) return 0.0;  // centered prior
  return dot(cross_vector(state.kernel(), state.points(), x), state.alpha());
}

double predict_variance(const KrigingState& state, const Point& x) {
  return detail::clamp_variance(predict_cov_raw(state, x, x), state.kernel()(x, x));
}

double predict_cov(const KrigingState& state, const Point& x, const Point& y) {
  if (same_point(x, y)) return predict_variance(state, x);
  return predict_cov_raw(state, x, y);
}

ConditionalBlock::ConditionalBlock(Kernel kernel, std::vector<Point> x_old,
                                   std::vector<Point> x_new, Matrix old_weights,
                                   CovMatrix sigma_new, double jitter)
    : kernel_(std::move(kernel)),
      x_old_(std::move(x_old)),
      x_new_(std::move(x_new)),
      old_weights_(std::move(old_weights)),
      sigma_new_(std::move(sigma_new)),
      jitter_(jitter) {
  const std::size_t k = x_new_.size();
  if (k == 0) throw std::invalid_argument("conditional block: empty batch");
  if (sigma_new_.rows() != k || sigma_new_.cols() != k)
    throw std::invalid_argument("conditional block: sigma_new must be k x k");
  if (!x_old_.empty() && (old_weights_.rows() != x_old_.size() || old_weights_.cols() != k))
    throw std::invalid_argument("conditional block: old_weights must be n x k");
  factor_ = cholesky(sigma_new_, jitter_);
}

std::vector<double> ConditionalBlock::cross_old(const Point& x) const {
  std::vector<double> u(x_new_.size());
  for (std::size_t i = 0; i < x_new_.size(); ++i) u[i] = kernel_(x_new_[i], x);
  if (x_old_.empty()) return u;
  const std::vector<double> c_old = cross_vector(kernel_, x_old_, x);
  for (std::size_t i = 0; i < u.size(); ++i) {
    double s = 0.0;
    for (std::size_t l = 0; l < c_old.size(); ++l) s += old_weights_(l, i) * c_old[l];
    u[i] -= s;
  }
  return u;
}

ConditionalBlock conditional_block(const KrigingState& state, std::vector<Point> x_new) {
  if (x_new.empty()) throw std::invalid_argument("conditional_block: empty batch");
  const std::size_t k = x_new.size();
  const std::size_t n = state.size();

  Matrix w;
  CovMatrix sigma(k, k);
  if (n == 0) {
    sigma = gram(state.kernel(), x_new);
  } else {
    const Matrix b = cross(state.kernel(), state.points(), x_new);
    w = solve(state.factor(), b);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        double s = state.kernel()(x_new[i], x_new[j]);
        for (std::size_t l = 0; l < n; ++l) s -= b(l, i) * w(l, j);
        sigma(i, j) = s;
        sigma(j, i) = s;
      }
    // New points whose conditional variance collapses relative to their
    // prior variance duplicate existing observations.
    for (std::size_t i = 0; i < k; ++i) {
      const double prior = state.kernel()(x_new[i], x_new[i]);
      if (!(sigma(i, i) + state.jitter() > 1e-14 * std::abs(prior + state.jitter())))
        throw NotPositiveDefinite(i, sigma(i, i) + state.jitter());
    }
  }
  return ConditionalBlock(state.kernel(), state.points(), std::move(x_new), std::move(w),
                          std::move(sigma), state.jitter());
}

KrigingWeights weights_new(const ConditionalBlock& block, const Point& x) {
  return KrigingWeights{solve(block.factor(), block.cross_old(x))};
}

double update_mean(const KrigingState& state, const ConditionalBlock& block,
                   const UpdateBatch& batch, const Point& x) {
  if (batch.points.size() != block.batch_size() || batch.values.size() != block.batch_size())
    throw std::invalid_argument("update_mean: batch size does not match block");
  std::vector<double> innovation(batch.values);
  for (std::size_t i = 0; i < innovation.size(); ++i)
    innovation[i] -= predict_mean(state, block.new_points()[i]);
  const std::vector<double> gamma = solve(block.factor(), std::move(innovation));
  return predict_mean(state, x) + dot(block.cross_old(x), gamma);
}

double update_cov_corrected(const KrigingState& state, const ConditionalBlock& block,
                            const Point& x, const Point& y) {
  const double prior = predict_cov_raw(state, x, y);
  const std::vector<double> wx = forward_solve(block.factor(), block.cross_old(x));
  if (same_point(x, y))
    return detail::clamp_variance(prior - dot(wx, wx), state.kernel()(x, x));
  const std::vector<double> wy = forward_solve(block.factor(), block.cross_old(y));
  return prior - dot(wx, wy);
}

double update_variance_corrected(const KrigingState& state, const ConditionalBlock& block,
                                 const Point& x) {
  return update_cov_corrected(state, block, x, x);
}

double update_cov_emery(const KrigingState& state, const ConditionalBlock& block,
                        const Point& x, const Point& y) {
  const std::vector<double> lx = solve(block.factor(), block.cross_old(x));
  const std::vector<double> ly =
      same_point(x, y) ? lx : solve(block.factor(), block.cross_old(y));
  double drop = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i)
    drop += lx[i] * ly[i] * (block.sigma_new()(i, i) + block.jitter());
  return predict_cov_raw(state, x, y) - drop;
}

double update_variance_emery(const KrigingState& state, const ConditionalBlock& block,
                             const Point& x) {
  return update_cov_emery(state, block, x, x);
}

KrigingState assimilate(const KrigingState& state, const UpdateBatch& batch) {
  if (batch.points.empty()) throw std::invalid_argument("assimilate: empty batch");
  if (batch.points.size() != batch.values.size())
    throw std::invalid_argument("assimilate: batch points and values differ in length");
  check_finite(batch.points, batch.values);

  if (state.size() == 0)
    return fit(state.kernel(), batch.points, batch.values, state.jitter());

  const Matrix b = cross(state.kernel(), state.points(), batch.points);
  const CovMatrix c = gram(state.kernel(), batch.points);
  CholeskyFactor extended = block_extend(state.factor(), b, c, state.jitter());

  std::vector<Point> points = state.points();
  points.insert(points.end(), batch.points.begin(), batch.points.end());
  std::vector<double> values = state.values();
  values.insert(values.end(), batch.values.begin(), batch.values.end());
  std::vector<double> alpha = solve(extended, values);

  return KrigingState(state.kernel(), std::move(points), std::move(values), state.jitter(),
                      std::move(extended), std::move(alpha));
}

Prediction single_point_update(const KrigingState& state, const Point& x_new, double z_new,
                               const Point& x) {
  const double prior_var_new = predict_cov_raw(state, x_new, x_new);
  const double denom = prior_var_new + state.jitter();
  const double scale = state.kernel()(x_new, x_new);
  if (denom <= 1e-12 * std::max(1.0, scale))
    throw DegenerateNewPoint("single_point_update: new point has prior variance " +
                             std::to_string(prior_var_new) +
                             "; it duplicates existing information");

  const double lambda = predict_cov_raw(state, x_new, x) / denom;
  Prediction p;
  p.mean = predict_mean(state, x) + lambda * (z_new - predict_mean(state, x_new));
  const double raw = predict_cov_raw(state, x, x) - lambda * lambda * denom;
  p.variance = detail::clamp_variance(raw, state.kernel()(x, x));
  return p;
}

}  // namespace krig
