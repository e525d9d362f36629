#include "krig/linalg.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

namespace krig {

namespace {

void check_rhs_rows(const CholeskyFactor& f, std::size_t rows, const char* what) {
  if (rows != f.size())
    throw std::invalid_argument(std::string(what) + ": right-hand side has " +
                                std::to_string(rows) + " rows, factor has " +
                                std::to_string(f.size()));
}

}  // namespace

// A pivot this far below its diagonal scale means the matrix is singular at
// working precision (e.g. a duplicated design point), even if roundoff left
// the computed value barely positive.
static constexpr double kRelPivotTol = 1e-14;

CholeskyFactor cholesky(const Matrix& a, double jitter) {
  if (a.rows() != a.cols())
    throw std::invalid_argument("cholesky: matrix is " + std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()) + ", expected square");
  if (jitter < 0.0) throw std::invalid_argument("cholesky: jitter must be nonnegative");

  const std::size_t n = a.rows();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a.row(i);
    double* lrow = l.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      double s = arow[j];
      const double* ljrow = l.row(j);
      for (std::size_t t = 0; t < j; ++t) s -= lrow[t] * ljrow[t];
      if (j < i) {
        lrow[j] = s / ljrow[j];
      } else {
        s += jitter;
        if (!(s > kRelPivotTol * std::abs(arow[i] + jitter))) throw NotPositiveDefinite(i, s);
        lrow[i] = std::sqrt(s);
      }
    }
  }
  return CholeskyFactor(std::move(l));
}

std::vector<double> forward_solve(const CholeskyFactor& f, std::vector<double> b) {
  check_rhs_rows(f, b.size(), "forward_solve");
  const Matrix& l = f.lower();
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double* lrow = l.row(i);
    double s = b[i];
    for (std::size_t j = 0; j < i; ++j) s -= lrow[j] * b[j];
    b[i] = s / lrow[i];
  }
  return b;
}

Matrix forward_solve(const CholeskyFactor& f, Matrix b) {
  check_rhs_rows(f, b.rows(), "forward_solve");
  const Matrix& l = f.lower();
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    const double* lrow = l.row(i);
    double* bi = b.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double lij = lrow[j];
      if (lij == 0.0) continue;
      const double* bj = b.row(j);
      for (std::size_t c = 0; c < m; ++c) bi[c] -= lij * bj[c];
    }
    const double inv = 1.0 / lrow[i];
    for (std::size_t c = 0; c < m; ++c) bi[c] *= inv;
  }
  return b;
}

std::vector<double> solve(const CholeskyFactor& f, std::vector<double> b) {
  b = forward_solve(f, std::move(b));
  const Matrix& l = f.lower();
  const std::size_t n = b.size();
  for (std::size_t ip = n; ip-- > 0;) {
    double s = b[ip];
    for (std::size_t j = ip + 1; j < n; ++j) s -= l(j, ip) * b[j];
    b[ip] = s / l(ip, ip);
  }
  return b;
}

Matrix solve(const CholeskyFactor& f, Matrix b) {
  b = forward_solve(f, std::move(b));
  const Matrix& l = f.lower();
  const std::size_t n = b.rows();
  const std::size_t m = b.cols();
  for (std::size_t ip = n; ip-- > 0;) {
    double* bi = b.row(ip);
    for (std::size_t j = ip + 1; j < n; ++j) {
      const double lji = l(j, ip);
      if (lji == 0.0) continue;
      const double* bj = b.row(j);
      for (std::size_t c = 0; c < m; ++c) bi[c] -= lji * bj[c];
    }
    const double inv = 1.0 / l(ip, ip);
    for (std::size_t c = 0; c < m; ++c) bi[c] *= inv;
  }
  return b;
}

CholeskyFactor block_extend(const CholeskyFactor& f, const Matrix& cross_block,
                            const Matrix& new_block, double jitter) {
  const std::size_t n = f.size();
  const std::size_t k = new_block.rows();
  if (new_block.cols() != k)
    throw std::invalid_argument("block_extend: new block must be square");
  if (k == 0) throw std::invalid_argument("block_extend: new block is empty");
  if (n == 0) return cholesky(new_block, jitter);
  if (cross_block.rows() != n || cross_block.cols() != k)
    throw std::invalid_argument("block_extend: cross block must be n x k");

  const Matrix y = forward_solve(f, cross_block);  // L Y = B

  // Schur complement C - Y^T Y, upper triangle mirrored.
  Matrix schur(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i; j < k; ++j) {
      double s = new_block(i, j);
      for (std::size_t t = 0; t < n; ++t) s -= y(t, i) * y(t, j);
      schur(i, j) = s;
      schur(j, i) = s;
    }

  // A conditional variance this far below the prior one means the new row
  // duplicates existing information; the trailing Cholesky alone cannot see
  // that because it only knows the already-tiny Schur diagonal.
  for (std::size_t i = 0; i < k; ++i)
    if (!(schur(i, i) + jitter > kRelPivotTol * std::abs(new_block(i, i) + jitter)))
      throw NotPositiveDefinite(n + i, schur(i, i) + jitter);

  CholeskyFactor trailing;
  try {
    trailing = cholesky(schur, jitter);
  } catch (const NotPositiveDefinite& e) {
    throw NotPositiveDefinite(n + e.pivot(), e.pivot_value());
  }

  Matrix ext(n + k, n + k);
  const Matrix& l = f.lower();
  for (std::size_t i = 0; i < n; ++i)
    std::memcpy(ext.row(i), l.row(i), (i + 1) * sizeof(double));
  for (std::size_t i = 0; i < k; ++i) {
    double* row = ext.row(n + i);
    for (std::size_t t = 0; t < n; ++t) row[t] = y(t, i);
    const double* trow = trailing.lower().row(i);
    for (std::size_t j = 0; j <= i; ++j) row[n + j] = trow[j];
  }
  return CholeskyFactor(std::move(ext));
}

}  // namespace krig
