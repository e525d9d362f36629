#include "krig/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "krig/errors.hpp"

namespace krig::oracle {

namespace {

using Grid = std::vector<std::vector<double>>;

Grid build_gram(const Kernel& kernel, std::span<const Point> pts, double jitter) {
  const std::size_t n = pts.size();
  Grid g(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = kernel(pts[i], pts[j]);
  for (std::size_t i = 0; i < n; ++i) g[i][i] += jitter;
  return g;
}

// Column-by-column Cholesky, in place in the lower triangle. Pivots far
// below their diagonal scale count as singular, matching the main path.
void naive_cholesky(Grid& a) {
  const std::size_t n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j][j];
    for (std::size_t t = 0; t < j; ++t) d -= a[j][t] * a[j][t];
    if (!(d > 1e-14 * std::abs(a[j][j]))) throw NotPositiveDefinite(j, d);
    a[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i][j];
      for (std::size_t t = 0; t < j; ++t) s -= a[i][t] * a[j][t];
      a[i][j] = s / a[j][j];
    }
  }
}

std::vector<double> solve_spd(const Grid& chol, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= chol[i][j] * b[j];
    b[i] = s / chol[i][i];
  }
  for (std::size_t ip = n; ip-- > 0;) {
    double s = b[ip];
    for (std::size_t j = ip + 1; j < n; ++j) s -= chol[j][ip] * b[j];
    b[ip] = s / chol[ip][ip];
  }
  return b;
}

std::vector<double> cross_vector(const Kernel& kernel, std::span<const Point> pts,
                                 const Point& x) {
  std::vector<double> c(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) c[i] = kernel(pts[i], x);
  return c;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

RefitPrediction refit_predict(const Kernel& kernel, std::span<const Point> x_all,
                              std::span<const double> z_all, const Point& x,
                              const Point* y, double jitter) {
  if (x_all.size() != z_all.size())
    throw std::invalid_argument("refit_predict: points and values differ in length");

  RefitPrediction out;
  if (x_all.empty()) {
    out.mean = 0.0;
    out.variance = kernel(x, x);
    if (y != nullptr) out.covariance = kernel(x, *y);
    return out;
  }

  Grid g = build_gram(kernel, x_all, jitter);
  naive_cholesky(g);

  const std::vector<double> alpha = solve_spd(g, std::vector<double>(z_all.begin(), z_all.end()));
  const std::vector<double> cx = cross_vector(kernel, x_all, x);
  const std::vector<double> beta = solve_spd(g, cx);

  out.mean = dot(cx, alpha);
  out.variance = kernel(x, x) - dot(cx, beta);
  if (y != nullptr) {
    const std::vector<double> cy = cross_vector(kernel, x_all, *y);
    out.covariance = kernel(x, *y) - dot(cy, beta);
  }
  return out;
}

FullWeights full_weights(const Kernel& kernel, std::span<const Point> x_all,
                         std::size_t n_old, const Point& x, double jitter) {
  if (x_all.empty()) throw std::invalid_argument("full_weights: empty point set");
  if (n_old > x_all.size())
    throw std::invalid_argument("full_weights: split index exceeds point count");

  Grid g = build_gram(kernel, x_all, jitter);
  naive_cholesky(g);
  const std::vector<double> lambda = solve_spd(g, cross_vector(kernel, x_all, x));

  FullWeights w;
  w.lambda_old.assign(lambda.begin(), lambda.begin() + static_cast<std::ptrdiff_t>(n_old));
  w.lambda_new.assign(lambda.begin() + static_cast<std::ptrdiff_t>(n_old), lambda.end());
  return w;
}

}  // namespace krig::oracle
