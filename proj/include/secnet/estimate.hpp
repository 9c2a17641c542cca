#pragma once

#include <cstdint>

namespace secnet {

/// Monte Carlo estimate of a probability with a Wilson score interval.
struct MetricEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double confidence_level = 0.95;

  double half_width() const { return 0.5 * (ci_high - ci_low); }
  bool covers(double x) const { return ci_low <= x && x <= ci_high; }
};

struct Interval {
  double low;
  double high;
};

/// Wilson score interval for `successes` out of `trials` (trials > 0).
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence_level);

/// Builds an estimate from integer counters; throws DegenerateEstimateError on zero trials.
MetricEstimate make_proportion_estimate(std::uint64_t successes, std::uint64_t trials,
                                        double confidence_level, std::uint64_t seed);

}  // namespace secnet
