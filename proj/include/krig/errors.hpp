#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace krig {

// A (possibly jittered) covariance matrix turned out singular or indefinite
// during factorization. Typical causes: duplicate design points under a
// noiseless kernel, or a jitter too small for the conditioning at hand.
class NotPositiveDefinite : public std::runtime_error {
 public:
  NotPositiveDefinite(std::size_t pivot, double value)
      : std::runtime_error("matrix not positive definite: pivot " + std::to_string(pivot) +
                           " is " + std::to_string(value) + " (<= 0); increase jitter or remove duplicate points"),
        pivot_(pivot),
        value_(value) {}

  std::size_t pivot() const { return pivot_; }
  double pivot_value() const { return value_; }

 private:
  std::size_t pivot_;
  double value_;
};

// Single-point update was asked to assimilate an observation whose prior
// variance is zero up to tolerance: the point carries no new information
// (it duplicates an existing observation, or sits where the kernel
// degenerates).
class DegenerateNewPoint : public std::runtime_error {
 public:
  explicit DegenerateNewPoint(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace krig
