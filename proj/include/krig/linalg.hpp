#pragma once

#include <cstddef>
#include <vector>

#include "krig/errors.hpp"
#include "krig/matrix.hpp"

namespace krig {

// Lower-triangular Cholesky factor L of A + jitter*I. Immutable once built;
// obtain one from cholesky() or block_extend().
class CholeskyFactor {
 public:
  CholeskyFactor() = default;  // size-0 factor (empty prefix)

  std::size_t size() const { return lower_.rows(); }
  const Matrix& lower() const { return lower_; }

 private:
  explicit CholeskyFactor(Matrix lower) : lower_(std::move(lower)) {}
  friend CholeskyFactor cholesky(const Matrix&, double);
  friend CholeskyFactor block_extend(const CholeskyFactor&, const Matrix&, const Matrix&, double);

  Matrix lower_;
};

// Unblocked Cholesky of A + jitter*I. Reads the lower triangle of A; throws
// NotPositiveDefinite when a pivot fails to be strictly positive.
CholeskyFactor cholesky(const Matrix& a, double jitter = 0.0);

// y with L y = b.
std::vector<double> forward_solve(const CholeskyFactor& f, std::vector<double> b);
Matrix forward_solve(const CholeskyFactor& f, Matrix b);

// x with (L L^T) x = b, i.e. x = (A + jitter*I)^{-1} b.
std::vector<double> solve(const CholeskyFactor& f, std::vector<double> b);
Matrix solve(const CholeskyFactor& f, Matrix b);

// Factor of [[A, B], [B^T, C]] reusing the factor of A: the new rows come
// from one triangular solve and the trailing block from the Cholesky of the
// Schur complement C - B^T A^{-1} B, with jitter*I applied to that block
// only. Costs O(n^2 k + n k^2 + k^3) instead of the O((n+k)^3) refactor.
// With an empty prefix this is exactly cholesky(C, jitter).
CholeskyFactor block_extend(const CholeskyFactor& f, const Matrix& cross_block,
                            const Matrix& new_block, double jitter = 0.0);

}  // namespace krig
