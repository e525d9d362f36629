#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "krig/matrix.hpp"

namespace krig {

// A location in R^d.
struct Point {
  std::vector<double> coords;
  std::size_t dim() const { return coords.size(); }
};

inline bool same_point(const Point& a, const Point& b) { return a.coords == b.coords; }

enum class KernelFamily { brownian, squared_exponential, matern52 };

// Positive-definite covariance function sigma0(x, y).
//
// brownian             min(x, y) scaled by the variance; defined for d = 1
//                      with nonnegative coordinates, lengthscale unused.
// squared_exponential  variance * exp(-r^2 / (2 l^2))
// matern52             variance * (1 + a + a^2/3) * exp(-a), a = sqrt(5) r / l
class Kernel {
 public:
  static Kernel brownian(double variance = 1.0);
  static Kernel squared_exponential(double variance, double lengthscale);
  static Kernel matern52(double variance, double lengthscale);

  double operator()(const Point& x, const Point& y) const;

  KernelFamily family() const { return family_; }
  double variance() const { return variance_; }
  double lengthscale() const { return lengthscale_; }
  std::string name() const;

 private:
  Kernel(KernelFamily family, double variance, double lengthscale);

  KernelFamily family_;
  double variance_;
  double lengthscale_;
};

double eval(const Kernel& k, const Point& x, const Point& y);

// Gram matrix over xs. The upper triangle is computed and mirrored, so the
// result is symmetric to the bit.
CovMatrix gram(const Kernel& k, std::span<const Point> xs);

// Cross-covariance: entry (i, j) = k(xs[i], ys[j]).
CovMatrix cross(const Kernel& k, std::span<const Point> xs, std::span<const Point> ys);

}  // namespace krig
