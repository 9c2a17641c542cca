#include "secnet/estimate.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "secnet/errors.hpp"

namespace secnet {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double confidence_level) {
  if (trials == 0) throw DegenerateEstimateError("wilson_interval: zero trials");
  if (!(confidence_level > 0.0 && confidence_level < 1.0)) {
    throw ParameterError("confidence_level must lie in (0,1)");
  }
  const boost::math::normal_distribution<double> std_normal;
  const double z = boost::math::quantile(std_normal, 0.5 + 0.5 * confidence_level);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Pin the degenerate ends so that p = 0 or 1 is always inside.
  double lo = std::max(0.0, center - half);
  double hi = std::min(1.0, center + half);
  if (successes == 0) lo = 0.0;
  if (successes == trials) hi = 1.0;
  return {std::min(lo, p), std::max(hi, p)};
}

MetricEstimate make_proportion_estimate(std::uint64_t successes, std::uint64_t trials,
                                        double confidence_level, std::uint64_t seed) {
  if (trials == 0) throw DegenerateEstimateError("estimate has zero conditioning events");
  const Interval ci = wilson_interval(successes, trials, confidence_level);
  MetricEstimate e;
  e.value = static_cast<double>(successes) / static_cast<double>(trials);
  e.ci_low = ci.low;
  e.ci_high = ci.high;
  e.successes = successes;
  e.trials = trials;
  e.seed = seed;
  e.confidence_level = confidence_level;
  return e;
}

}  // namespace secnet
