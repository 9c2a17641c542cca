#pragma once

#include <cstdint>

#include "secnet/channel.hpp"
#include "secnet/mimo.hpp"
#include "secnet/point_process.hpp"

namespace secnet {

/// Every scalar of the network model. Derived quantities are computed on
/// demand so they can never drift from the primitives.
struct SystemParams {
  int M = 8;                  ///< antennas per UAV
  int N = 4;                  ///< users served per UAV
  double P = 5.0;             ///< transmit power (W)
  double phi = 0.5;           ///< share of power on information streams
  double d = 50.0;            ///< minimum UAV separation (m)
  double lambda_p = 0.0;      ///< parent PPP intensity (1/m^2)
  double lambda_e = 8e-6;     ///< eavesdropper intensity (1/m^2)
  double sigma = 20.0;        ///< user scatter (m)
  channel::ChannelParams channel = channel::default_channel_params();
  double sigma_x2 = 1e-13;    ///< user noise power (W)
  double sigma_e2 = 1e-13;    ///< eavesdropper noise power (W)
  double R_t = 0.8;           ///< transmission rate (bit/s/Hz)
  double R_e = 0.4;           ///< redundancy rate (bit/s/Hz)

  /// Throws ParameterError naming the first violated constraint. Rates only
  /// need 0 <= R_e <= R_t here; stricter file-level checks live in the config loader.
  void validate() const;

  point_process::HardCoreParams hard_core() const { return {lambda_p, d}; }
  double k_bar() const { return hard_core().k_bar(); }
  double lambda_u() const { return point_process::mhcpp_intensity(hard_core()); }
  double beta_t() const;
  double beta_e() const;
  double R_s() const { return R_t - R_e; }
  mimo::PowerSplit power_split() const { return {P, phi, M, N}; }
  double P_s() const { return power_split().signal_power(); }
  double P_n() const { return power_split().noise_power(); }

  /// Sets lambda_p so that the retained intensity equals lambda_u at the current d.
  void set_target_intensity(double lambda_u);
};

/// Fig. 2 configuration at phi = 0.5, H = 100 m: d = 50 m, lambda_u = 8e-6,
/// sigma = 20 m, M = 8, N = 4, with the shared channel and rate constants.
SystemParams default_system_params();

/// Numerical controls for the analytic backend.
struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  /// Radial split point; beyond it the integral runs to infinity through a
  /// change of variables. <= 0 selects max(2d, 20/sqrt(pi lambda_p)).
  double r_max = 0.0;
  double l_max_factor = 8.0;  ///< outer user-distance integral runs to l_max_factor * sigma
  std::size_t max_subdivisions = 400;

  void validate(double d) const;
  double radial_split(double d, double lambda_p) const;
};

/// Monte Carlo controls.
struct SimConfig {
  std::uint64_t trials = 10000;
  double window_radius = 0.0;  ///< <= 0 selects max(20d, 10/sqrt(pi lambda_p), 3000 m)
  std::uint64_t master_seed = 20210207;
  double confidence_level = 0.95;
  int threads = 0;             ///< 0 = OpenMP default
  /// Add the mean interference and AN of UAVs beyond the window.
  bool far_field = true;

  void validate(double d) const;
  double effective_window(double d, double lambda_p) const;
};

}  // namespace secnet
