#pragma once

#include <cstdint>
#include <vector>

#include "secnet/estimate.hpp"
#include "secnet/params.hpp"

namespace secnet::simulator {

/// Result of one network snapshot.
struct TrialOutcome {
  bool covered = false;
  bool secret = false;
  double sinr_user = 0.0;
  /// Largest eavesdropper SINR on the protected stream; 0 without eavesdroppers.
  /// Exact whenever it reaches beta_e. Eavesdroppers provably below beta_e
  /// (their SNR bound or a partial interference sum already clears it) are
  /// cut short and contribute the bound reached at that point.
  double max_sinr_eve = 0.0;

  std::uint64_t uavs = 0;
  std::uint64_t eavesdroppers = 0;
  std::uint64_t palm_rejections = 0;
  std::uint64_t degenerate_resamples = 0;
  /// Intra-cluster interference plus own AN at the typical user over its serving signal.
  double zf_residual_ratio = 0.0;
};

/// Mean path gain from the plane outside the simulation window:
/// T(rho) = integral over |y| > R of E_Q[L_Q(|y - e|)] dy for a receiver e at
/// distance rho < R from the centre, with the link type averaged by its
/// elevation probability. Tabulated once and interpolated.
class FarField {
 public:
  /// Identically zero (no correction).
  FarField() = default;
  FarField(const channel::ChannelParams& channel, double window_radius);

  double path_gain(double rho) const;
  double window_radius() const { return window_; }

 private:
  double window_ = 0.0;
  std::vector<double> rho_;
  std::vector<double> gain_;
};

/// Table matching cfg: zero when cfg.far_field is off.
FarField make_far_field(const SystemParams& params, const SimConfig& cfg);

/// One snapshot: Palm MHCPP with the serving UAV at the origin, the typical
/// user drawn from its cluster, per-link LoS states, per-UAV Rayleigh fading
/// and ZF/AN precoders, and a PPP of eavesdroppers on the same window.
/// Deterministic in (cfg.master_seed, trial_index).
/// UAVs beyond the window contribute their mean interference and AN through `far`.
TrialOutcome run_trial(const SystemParams& params, const SimConfig& cfg, std::uint64_t trial_index,
                       const FarField& far);
/// Builds the far-field table itself; prefer the overload above in loops.
TrialOutcome run_trial(const SystemParams& params, const SimConfig& cfg, std::uint64_t trial_index);

struct SimulationSummary {
  MetricEstimate cp;
  MetricEstimate sp;
  MetricEstimate joint;        ///< covered and secret in the same trial
  double st_product = 0.0;     ///< lambda_u N R_s CP SP
  double st_joint = 0.0;       ///< lambda_u N R_s P{covered and secret}
  std::uint64_t palm_rejections = 0;
  std::uint64_t degenerate_resamples = 0;
  double max_zf_residual_ratio = 0.0;
};

/// Runs cfg.trials snapshots in parallel. Counters are integers, so the
/// result does not depend on the thread count.
SimulationSummary simulate(const SystemParams& params, const SimConfig& cfg);

MetricEstimate estimate_cp(const SystemParams& params, const SimConfig& cfg);
MetricEstimate estimate_sp(const SystemParams& params, const SimConfig& cfg);

struct ThroughputEstimate {
  double product_form = 0.0;
  double joint_form = 0.0;
};
ThroughputEstimate estimate_st(const SystemParams& params, const SimConfig& cfg);

}  // namespace secnet::simulator
