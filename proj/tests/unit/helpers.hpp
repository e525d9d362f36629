#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "krig/kernels.hpp"
#include "krig/linalg.hpp"
#include "krig/matrix.hpp"

namespace krig::test {

inline Point p1(double x) { return Point{{x}}; }

inline std::vector<Point> pts1(std::initializer_list<double> xs) {
  std::vector<Point> out;
  for (double x : xs) out.push_back(p1(x));
  return out;
}

inline std::vector<Point> random_points(std::size_t count, std::size_t d, std::mt19937_64& rng,
                                        double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  std::vector<Point> pts(count);
  for (Point& p : pts) {
    p.coords.resize(d);
    for (double& c : p.coords) c = unif(rng);
  }
  return pts;
}

// Random SPD matrix G G^T + ridge*I.
inline Matrix random_spd(std::size_t n, std::mt19937_64& rng, double ridge = 0.5) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = unif(rng);
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = (i == j) ? ridge : 0.0;
      for (std::size_t t = 0; t < n; ++t) s += g(i, t) * g(j, t);
      a(i, j) = s;
      a(j, i) = s;
    }
  return a;
}

// max |(L L^T - (A + jitter I))_ij|
inline double reconstruction_error(const CholeskyFactor& f, const Matrix& a, double jitter) {
  const Matrix& l = f.lower();
  const std::size_t n = a.rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t <= std::min(i, j); ++t) s += l(i, t) * l(j, t);
      const double want = a(i, j) + (i == j ? jitter : 0.0);
      worst = std::max(worst, std::abs(s - want));
    }
  return worst;
}

inline std::vector<double> matvec(const Matrix& a, const std::vector<double>& x) {
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

}  // namespace krig::test
