#pragma once

#include "secnet/rng.hpp"

namespace secnet::channel {

enum class LinkType { kLoS, kNLoS };

/// Air-to-ground channel constants. Gains are stored linear; the config
/// layer converts from dB.
struct ChannelParams {
  double a = 11.95;        ///< environment constant (degrees)
  double b = 0.136;        ///< environment constant (per degree)
  double alpha_L = 2.5;
  double alpha_N = 2.8;
  double eta_L = 0.0;      ///< linear excess-loss factor, LoS
  double eta_N = 0.0;      ///< linear excess-loss factor, NLoS
  double xi = 0.0;         ///< linear path gain at 1 m
  double H = 100.0;        ///< UAV altitude (m)

  void validate() const;

  double alpha(LinkType q) const { return q == LinkType::kLoS ? alpha_L : alpha_N; }
  double eta(LinkType q) const { return q == LinkType::kLoS ? eta_L : eta_N; }
};

inline constexpr LinkType kLinkTypes[] = {LinkType::kLoS, LinkType::kNLoS};

const char* to_string(LinkType q);

double db_to_linear(double db);
double linear_to_db(double linear);
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

/// sqrt(H^2 + l^2).
double link_distance(double l, double H);

/// Elevation angle in degrees seen from a ground point at horizontal distance
/// l; 90 at l = 0.
double elevation_deg(double l, double H);

double los_probability(double l, const ChannelParams& params);

inline double link_probability(double l, LinkType q, const ChannelParams& params) {
  const double pl = los_probability(l, params);
  return q == LinkType::kLoS ? pl : 1.0 - pl;
}

/// eta_Q * xi * R(l)^(-alpha_Q).
double path_loss(double l, LinkType q, const ChannelParams& params);

LinkType sample_link_type(double l, const ChannelParams& params, Engine& rng);

/// Rayleigh density of the horizontal user-to-UAV distance.
double typical_user_distance_pdf(double l, double sigma);

/// Urban constants used throughout the evaluation, in linear units.
ChannelParams default_channel_params();

}  // namespace secnet::channel
