#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "krig/kernels.hpp"
#include "krig/linalg.hpp"

namespace krig {

// Simple Kriging (zero prior mean) with batch-sequential assimilation.
//
// A fitted state holds the Cholesky factor of the Gram matrix of the current
// design. Adding k observations goes through the conditional covariance of
// the new values given the old ones (Sigma_new, a k x k Schur complement):
//
//   m_new(x)       = m_old(x) + lambda_new(x)^T (z_new - m_old(X_new))
//   var_new(x)     = var_old(x) - lambda_new(x)^T Sigma_new lambda_new(x)
//   cov_new(x, y)  = cov_old(x, y) - lambda_new(x)^T Sigma_new lambda_new(y)
//
// with Sigma_new lambda_new(x) = cov_old(X_new, x). The quadratic forms are
// evaluated through one triangular solve against Sigma_new's factor, so a
// single k x k factorization serves all queries. The diagonal-only variants
// (update_*_emery) drop the off-diagonal of Sigma_new; they are wrong for
// k > 1 and kept only as a flagged reference mode.
//
// All types are immutable after construction and safe to share across
// threads; assimilate() returns a new state.

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
};

// k new observations to assimilate. Points must be distinct from the current
// design and from each other; duplicates surface as NotPositiveDefinite at
// factorization time.
struct UpdateBatch {
  std::vector<Point> points;
  std::vector<double> values;
};

struct KrigingWeights {
  std::vector<double> lambda_new;
};

class KrigingState;
KrigingState fit(Kernel kernel, std::vector<Point> points, std::vector<double> values,
                 double jitter = 0.0);
KrigingState assimilate(const KrigingState& state, const UpdateBatch& batch);

class KrigingState {
 public:
  const Kernel& kernel() const { return kernel_; }
  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  double jitter() const { return jitter_; }
  std::size_t size() const { return points_.size(); }

  // Factor of gram(points) + jitter*I. Size 0 when unconditioned (n = 0).
  const CholeskyFactor& factor() const { return factor_; }

  // (gram + jitter*I)^{-1} z, cached at fit time.
  const std::vector<double>& alpha() const { return alpha_; }

 private:
  KrigingState(Kernel kernel, std::vector<Point> points, std::vector<double> values,
               double jitter, CholeskyFactor factor, std::vector<double> alpha);
  friend KrigingState fit(Kernel, std::vector<Point>, std::vector<double>, double);
  friend KrigingState assimilate(const KrigingState&, const UpdateBatch&);

  Kernel kernel_;
  std::vector<Point> points_;
  std::vector<double> values_;
  double jitter_;
  CholeskyFactor factor_;
  std::vector<double> alpha_;
};

double predict_mean(const KrigingState& state, const Point& x);
double predict_variance(const KrigingState& state, const Point& x);
double predict_cov(const KrigingState& state, const Point& x, const Point& y);

// Conditional covariance block of a prospective batch X_new given the
// state's observations: Sigma_new(i, j) = cov_old(X_new[i], X_new[j]),
// factored with the state's jitter. Self-contained: it keeps what it needs
// to evaluate cov_old(X_new, x) for any later query x.
class ConditionalBlock {
 public:
  // old_weights = (gram_old + jitter*I)^{-1} cross(X_old, X_new); pass an
  // empty matrix when the state is unconditioned. The sigma_new argument is
  // factored here with the given jitter.
  ConditionalBlock(Kernel kernel, std::vector<Point> x_old, std::vector<Point> x_new,
                   Matrix old_weights, CovMatrix sigma_new, double jitter);

  std::size_t batch_size() const { return x_new_.size(); }
  const std::vector<Point>& new_points() const { return x_new_; }
  const CovMatrix& sigma_new() const { return sigma_new_; }
  const CholeskyFactor& factor() const { return factor_; }
  const Matrix& old_weights() const { return old_weights_; }
  double jitter() const { return jitter_; }

  // cov_old(X_new, x), the conditional cross-covariance vector of the batch
  // with a query point.
  std::vector<double> cross_old(const Point& x) const;

 private:
  Kernel kernel_;
  std::vector<Point> x_old_;
  std::vector<Point> x_new_;
  Matrix old_weights_;
  CovMatrix sigma_new_;
  CholeskyFactor factor_;
  double jitter_;
};

ConditionalBlock conditional_block(const KrigingState& state, std::vector<Point> x_new);

// lambda_new(x): the weights the k new observations get in the full
// (n+k)-point predictor, from the k x k system Sigma_new lambda = cov_old(X_new, x).
KrigingWeights weights_new(const ConditionalBlock& block, const Point& x);

double update_mean(const KrigingState& state, const ConditionalBlock& block,
                   const UpdateBatch& batch, const Point& x);
double update_variance_corrected(const KrigingState& state, const ConditionalBlock& block,
                                 const Point& x);
double update_cov_corrected(const KrigingState& state, const ConditionalBlock& block,
                            const Point& x, const Point& y);

// Reference-incorrect mode: the diagonal-only update. Keeps only the
// conditional variances of the new points and neglects their conditional
// covariances, so for k > 1 it generally disagrees with the refit value
// (it coincides when Sigma_new is diagonal, and always at k = 1). Returned
// values are non-authoritative and never clamped.
double update_variance_emery(const KrigingState& state, const ConditionalBlock& block,
                             const Point& x);
double update_cov_emery(const KrigingState& state, const ConditionalBlock& block,
                        const Point& x, const Point& y);

// Classic single-observation update. Throws DegenerateNewPoint when the new
// point carries no information (prior variance zero up to tolerance).
Prediction single_point_update(const KrigingState& state, const Point& x_new, double z_new,
                               const Point& x);

namespace detail {

// Clamp tiny negative posterior variances (roundoff near interpolation
// points) to zero. Values at or below -1e-9*scale are clamped too but
// reported loudly: they indicate an unreliable factorization. Every clamp is
// counted and logged to stderr.
double clamp_variance(double raw, double scale);
std::uint64_t variance_clamp_count();

}  // namespace detail

}  // namespace krig
