#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "secnet/mimo.hpp"

namespace secnet::analytic {

/// Which closed form applies for a given power split.
enum class PowerBranch {
  kSignalBelowNoise,  ///< phi < N/M, P_s < P_n
  kSignalAboveNoise,  ///< phi > N/M, P_s > P_n
  kEqualPower,        ///< phi = N/M (within the regularisation band)
};

/// Relative band around phi = N/M treated as the equal-power case.
inline constexpr double kEqualPowerBand = 1e-6;

/// A partial-fraction series whose largest term exceeds its sum by more than
/// this factor is considered to have lost too much precision.
inline constexpr double kSeriesConditionLimit = 1e6;

PowerBranch power_branch(const mimo::PowerSplit& split);

/// Neumaier-compensated accumulator that also tracks sum |terms| so callers
/// can detect cancellation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    mass_ += std::abs(x);
  }
  double value() const { return sum_ + comp_; }
  /// sum |terms| / |sum|; 1 for a same-sign sum.
  double condition() const {
    const double v = std::abs(value());
    if (v > 0.0) return mass_ / v;
    return mass_ > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double mass_ = 0.0;
};

/// Laplace transform E[exp(-t P_i)] of one interferer's radiated power
/// P_i = P_s Gamma(N,1) + P_n Gamma(M-N,1), and its derivatives in t.
///
/// The primary representation is the partial-fraction series per branch
/// (sums over n and m with binomial and falling-factorial coefficients in
/// tau_1 = 1/P_s + t, tau_2 = 1/P_n + t and zeta = (P_n - P_s)/(P_s P_n)).
/// Those series cancel catastrophically as zeta -> 0, so when the largest
/// term dwarfs the sum the kernel switches to the equivalent product
/// (1 + t P_s)^-N (1 + t P_n)^-(M-N), whose derivatives are all one sign.
///
/// Not thread-safe: the fallback counter is mutable state.
class ThetaKernel {
 public:
  explicit ThetaKernel(const mimo::PowerSplit& split);

  PowerBranch branch() const { return branch_; }
  const mimo::PowerSplit& split() const { return split_; }

  double value(double t) const;

  /// 1 - value(t), accurate for small t.
  double complement(double t) const;

  /// out[k] = u^k d^k/dt^k value(t), k = 0..out.size()-1. With u = s L and
  /// t = s L this is s^k times the k-th derivative with respect to s.
  void scaled_derivatives(double t, double u, std::span<double> out) const;

  /// Like scaled_derivatives, but out[0] receives 1 - value(t) computed
  /// without cancellation.
  void complement_and_derivatives(double t, double u, std::span<double> out) const;

  /// Series representation only. `condition` receives sum|terms| / |sum|.
  double series_scaled_derivative(int k, double t, double u, double* condition = nullptr) const;
  /// Series for orders 0..out.size()-1; returns the worst condition number.
  double series_scaled_derivatives(double t, double u, std::span<double> out) const;
  /// Product representation only.
  double factored_scaled_derivative(int k, double t, double u) const;

  std::uint64_t fallbacks() const { return fallbacks_; }

 private:
  mimo::PowerSplit split_;
  PowerBranch branch_;
  std::vector<double> outer_coef_;  // per-n prefactor of the partial-fraction series
  std::vector<double> zeta_terms_;  // (+-zeta)^m / m!
  mutable std::uint64_t fallbacks_ = 0;
};

/// Density of P_i = P_s Gamma(N,1) + P_n Gamma(M-N,1) at p >= 0, via the
/// incomplete-gamma series for unequal powers and the Gamma(M, P_s) law when
/// they are equal. Falls back to direct convolution if the series is ill-conditioned.
double interference_power_pdf(double p, const mimo::PowerSplit& split);

/// n! / (n-k)!  (0 if k > n).
double falling_factorial(int n, int k);
/// n choose k as a double.
double binomial(int n, int k);

}  // namespace secnet::analytic
