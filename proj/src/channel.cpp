#include "secnet/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "secnet/errors.hpp"

namespace secnet::channel {

namespace {
void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) throw ParameterError(std::string(name) + " must be positive");
}
}  // namespace

void ChannelParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("LoS constants a, b must be finite");
  require_positive(alpha_L, "alpha_L");
  require_positive(alpha_N, "alpha_N");
  require_positive(eta_L, "eta_L");
  require_positive(eta_N, "eta_N");
  require_positive(xi, "xi");
  require_positive(H, "H");
}

const char* to_string(LinkType q) { return q == LinkType::kLoS ? "LoS" : "NLoS"; }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

double link_distance(double l, double H) { return std::hypot(H, l); }

double elevation_deg(double l, double H) {
  if (l <= 0.0) return 90.0;
  return (180.0 / std::numbers::pi) * std::atan(H / l);
}

double los_probability(double l, const ChannelParams& params) {
  const double theta = elevation_deg(l, params.H);
  return 1.0 / (1.0 + params.a * std::exp(-params.b * (theta - params.a)));
}

double path_loss(double l, LinkType q, const ChannelParams& params) {
  const double r2 = params.H * params.H + l * l;
  return params.eta(q) * params.xi * std::pow(r2, -0.5 * params.alpha(q));
}

LinkType sample_link_type(double l, const ChannelParams& params, Engine& rng) {
  return uniform01(rng) < los_probability(l, params) ? LinkType::kLoS : LinkType::kNLoS;
}

double typical_user_distance_pdf(double l, double sigma) {
  if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");
  if (l < 0.0) return 0.0;
  const double s2 = sigma * sigma;
  return l / s2 * std::exp(-l * l / (2.0 * s2));
}

ChannelParams default_channel_params() {
  ChannelParams p;
  p.eta_L = db_to_linear(-1.6);
  p.eta_N = db_to_linear(-23.0);
  p.xi = db_to_linear(-40.0);
  return p;
}

}  // namespace secnet::channel
