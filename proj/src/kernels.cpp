#include "krig/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace krig {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873;

double squared_distance(const Point& x, const Point& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.coords.size(); ++i) {
    const double d = x.coords[i] - y.coords[i];
    s += d * d;
  }
  return s;
}

}  // namespace

Kernel::Kernel(KernelFamily family, double variance, double lengthscale)
    : family_(family), variance_(variance), lengthscale_(lengthscale) {
  if (!(variance > 0.0)) throw std::invalid_argument("kernel variance must be positive");
  if (family != KernelFamily::brownian && !(lengthscale > 0.0))
    throw std::invalid_argument("kernel lengthscale must be positive");
}

Kernel Kernel::brownian(double variance) {
  return Kernel(KernelFamily::brownian, variance, 1.0);
}

Kernel Kernel::squared_exponential(double variance, double lengthscale) {
  return Kernel(KernelFamily::squared_exponential, variance, lengthscale);
}

Kernel Kernel::matern52(double variance, double lengthscale) {
  return Kernel(KernelFamily::matern52, variance, lengthscale);
}

std::string Kernel::name() const {
  switch (family_) {
    case KernelFamily::brownian: return "brownian";
    case KernelFamily::squared_exponential: return "squared-exponential";
    case KernelFamily::matern52: return "matern52";
  }
  return "unknown";
}

double Kernel::operator()(const Point& x, const Point& y) const {
  if (x.dim() != y.dim())
    throw std::invalid_argument("kernel eval: point dimensions differ (" +
                                std::to_string(x.dim()) + " vs " + std::to_string(y.dim()) + ")");
  switch (family_) {
    case KernelFamily::brownian: {
      if (x.dim() != 1)
        throw std::invalid_argument("brownian kernel is defined for d = 1 only");
      const double a = x.coords[0];
      const double b = y.coords[0];
      if (a < 0.0 || b < 0.0)
        throw std::invalid_argument("brownian kernel requires nonnegative coordinates");
      return variance_ * std::min(a, b);
    }
    case KernelFamily::squared_exponential: {
      const double r2 = squared_distance(x, y);
      return variance_ * std::exp(-r2 / (2.0 * lengthscale_ * lengthscale_));
    }
    case KernelFamily::matern52: {
      const double r = std::sqrt(squared_distance(x, y));
      const double a = kSqrt5 * r / lengthscale_;
      return variance_ * (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
  }
  throw std::logic_error("unreachable kernel family");
}

double eval(const Kernel& k, const Point& x, const Point& y) { return k(x, y); }

CovMatrix gram(const Kernel& k, std::span<const Point> xs) {
  const std::size_t n = xs.size();
  if (n == 0) throw std::invalid_argument("gram: empty point set");
  CovMatrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = k(xs[i], xs[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

CovMatrix cross(const Kernel& k, std::span<const Point> xs, std::span<const Point> ys) {
  if (xs.empty() || ys.empty()) throw std::invalid_argument("cross: empty point set");
  CovMatrix c(xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j) c(i, j) = k(xs[i], ys[j]);
  return c;
}

}  // namespace krig
