/**
 * @file stats.hpp
 * @brief Replicate reduction: moments, batch standard errors and log-log fits.
 */
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "greyvar/lattice.hpp"

namespace greyvar {

/// Welford running mean / variance.
class RunningStats {
 public:
  void push(double x);
  std::int64_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance (0 for fewer than two values).
  double variance() const noexcept;

 private:
  std::int64_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct SampleSummary {
  std::int64_t n = 0;
  double mean = 0.0;
  double variance = 0.0;
  double se_mean = 0.0;      // sqrt(variance / n)
  double se_variance = 0.0;  // spread of per-batch variances / sqrt(batches)
  int batches = 0;
};

/// Summarizes values in index order; `batches` contiguous batches (>= 2) give se_variance.
SampleSummary summarize(std::span<const double> values, int batches = 20);

/// Evaluates `replicate(i, rng_i)` for i in [0, n) with rng_i = replicate_rng(seed, i),
/// spread over `workers` threads. Values come back in index order, so the result does
/// not depend on the worker count.
std::vector<double> run_replicates(std::int64_t n, std::uint64_t seed, int workers,
                                   const std::function<double(std::int64_t, Rng&)>& replicate);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
};

/// Least-squares fit of log(y) against log(x). Requires positive data and >= 2 points.
LineFit loglog_fit(std::span<const double> x, std::span<const double> y);

}  // namespace greyvar
