#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "krig/kernels.hpp"

namespace krig::oracle {

// Brute-force reference results. Everything here is recomputed from scratch
// on every call with its own naive factorization; the only code shared with
// the production path is kernel evaluation. Deliberately slow and simple:
// this module is the arbiter the update equations are tested against.

struct RefitPrediction {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> covariance;  // set when a second query point was given
};

// Simple-Kriging prediction at x (and pairwise covariance with y when given)
// by fresh factorization of the full Gram of x_all. No update shortcuts.
RefitPrediction refit_predict(const Kernel& kernel, std::span<const Point> x_all,
                              std::span<const double> z_all, const Point& x,
                              const Point* y = nullptr, double jitter = 0.0);

// Kriging weights of the full system, split at the old/new boundary.
struct FullWeights {
  std::vector<double> lambda_old;
  std::vector<double> lambda_new;
};

FullWeights full_weights(const Kernel& kernel, std::span<const Point> x_all,
                         std::size_t n_old, const Point& x, double jitter = 0.0);

}  // namespace krig::oracle
