#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <tuple>
#include <vector>

#include "secnet/channel.hpp"
#include "secnet/params.hpp"
#include "secnet/theta_kernel.hpp"

namespace secnet::analytic {

/// Counters collected while evaluating; useful when a result looks off.
struct Diagnostics {
  std::uint64_t kernel_fallbacks = 0;   ///< series replaced by the product form
  std::uint64_t unconverged = 0;        ///< inner integrals that hit the subdivision cap
  std::uint64_t ill_conditioned = 0;    ///< conditional coverage sums with heavy cancellation
  std::uint64_t integrand_calls = 0;
  double min_conditional_coverage = 1.0;
};

/// Omega and its derivatives for both interferer link types at one s.
/// omega[q][k] = c^k d^k Omega_q / ds^k and laplace[q][k] = c^k d^k L_q / ds^k,
/// where c is the caller's derivative scale (1 for plain derivatives).
struct LaplaceProfile {
  double s = 0.0;
  double scale = 1.0;
  std::vector<double> omega[2];
  std::vector<double> laplace[2];
};

/// Closed-form network metrics for one parameter set. Holds a per-instance
/// cache, so give each thread its own evaluator.
class Evaluator {
 public:
  Evaluator(const SystemParams& params, const QuadratureSpec& quad);

  const SystemParams& params() const { return params_; }
  const Diagnostics& diagnostics() const;

  /// E[exp(-s P_i L_q(l_i0))] for an interferer at (r, beta) around the
  /// serving UAV, with the typical user at distance l00 from it.
  double theta(double r, double beta, double s, channel::LinkType q, double l00) const;

  /// Omega and LT derivatives up to `order` for both link types.
  LaplaceProfile profile(double s, double l00, int order, double scale);

  double laplace_interference(double s, channel::LinkType q, double l00);
  double omega_derivative(int k, double s, channel::LinkType q, double l00);
  double laplace_derivative(int order, double s, channel::LinkType q, double l00);

  /// Coverage given a serving link of type q at horizontal distance l.
  double conditional_coverage(double l, channel::LinkType q);
  double coverage_probability();

  /// Interference-free probability factor for an eavesdropper at distance l0e,
  /// for both serving-link types: out = {Psi_L, Psi_N}.
  void psi(double l0e, std::span<double, 2> out);
  double secrecy_probability();

 private:
  // Integrates f(r, beta, out) * r over the plane outside the hard-core disc,
  // using beta-symmetry. f must be even in beta.
  template <class F>
  std::vector<double> integrate_plane(F&& f, std::size_t dim, double feature);

  SystemParams params_;
  QuadratureSpec quad_;
  ThetaKernel kernel_;
  mutable Diagnostics diag_;
  std::map<std::tuple<double, double, double, int>, LaplaceProfile> cache_;
};

double theta(double r, double beta, double s, channel::LinkType q, const SystemParams& params, double l00);
double laplace_interference(double s, channel::LinkType q, double l00, const SystemParams& params,
                            const QuadratureSpec& quad);
double omega_derivative(int k, double s, channel::LinkType q, double l00, const SystemParams& params,
                        const QuadratureSpec& quad);
double laplace_derivative(int order, double s, channel::LinkType q, double l00, const SystemParams& params,
                          const QuadratureSpec& quad);
double coverage_probability(const SystemParams& params, const QuadratureSpec& quad);
double secrecy_probability(const SystemParams& params, const QuadratureSpec& quad);

/// lambda_p N CP SP R_s (1 - e^-K) / K, evaluating CP and SP.
double secrecy_throughput(const SystemParams& params, const QuadratureSpec& quad);
/// Same combination for given CP and SP.
double secrecy_throughput(const SystemParams& params, double cp, double sp);

/// All three metrics from one evaluator.
struct Metrics {
  double cp = 0.0;
  double sp = 0.0;
  double st = 0.0;
  Diagnostics diagnostics;
};
Metrics evaluate_all(const SystemParams& params, const QuadratureSpec& quad);

}  // namespace secnet::analytic
