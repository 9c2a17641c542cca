#include "secnet/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>
#include <vector>

#include <omp.h>

#include "secnet/channel.hpp"
#include "secnet/errors.hpp"
#include "secnet/mimo.hpp"
#include "secnet/point_process.hpp"
#include "secnet/quadrature.hpp"
#include "secnet/rng.hpp"

namespace secnet::simulator {

namespace {

using channel::LinkType;
using point_process::Point2D;

constexpr int kMaxChannelRedraws = 100;

struct UavState {
  std::vector<mimo::FadingVector> served;
  mimo::PrecoderSet precoders;
};

UavState draw_uav(int M, int N, Engine& rng, std::uint64_t& resamples) {
  UavState u;
  for (int attempt = 0; attempt < kMaxChannelRedraws; ++attempt) {
    u.served.clear();
    for (int j = 0; j < N; ++j) u.served.push_back(mimo::sample_fading(M, rng));
    try {
      u.precoders = mimo::zf_precoder(u.served);
      return u;
    } catch (const DegenerateChannelError&) {
      ++resamples;
    }
  }
  throw SamplingError("could not draw a well-conditioned channel set");
}

constexpr int kFarFieldNodes = 160;

}  // namespace

FarField::FarField(const channel::ChannelParams& ch, double window_radius) : window_(window_radius) {
  if (!(window_radius > 0.0)) throw ParameterError("far-field window radius must be positive");
  const double H = ch.H;
  const quadrature::Tolerance tol{1e-7, 0.0, 2000};
  auto mean_gain = [&](double l) {
    const double pl = channel::los_probability(l, ch);
    return pl * channel::path_loss(l, LinkType::kLoS, ch) + (1.0 - pl) * channel::path_loss(l, LinkType::kNLoS, ch);
  };
  rho_.reserve(kFarFieldNodes + 1);
  gain_.reserve(kFarFieldNodes + 1);
  for (int k = 0; k <= kFarFieldNodes; ++k) {
    // Nodes cluster towards the edge, where the gain changes fastest.
    const double u = static_cast<double>(k) / kFarFieldNodes;
    const double rho = window_radius * (1.0 - (1.0 - u) * (1.0 - u));
    auto radial = [&](double r) {
      auto angular = [&](double beta) {
        return mean_gain(std::sqrt(std::max(0.0, r * r + rho * rho - 2.0 * r * rho * std::cos(beta))));
      };
      std::vector<double> breaks{0.0};
      const double near = (H + r - rho) / r;
      if (near < 0.5 * std::numbers::pi) breaks.push_back(near);
      breaks.push_back(std::numbers::pi);
      return 2.0 * r * quadrature::integrate(angular, breaks, tol);
    };
    std::vector<double> breaks{window_radius};
    if (rho > 0.0) breaks.push_back(window_radius + std::max(H, window_radius - rho) * 4.0);
    breaks.push_back(INFINITY);
    rho_.push_back(rho);
    gain_.push_back(quadrature::integrate(radial, breaks, tol));
  }
}

double FarField::path_gain(double rho) const {
  if (rho_.empty()) return 0.0;
  if (rho >= rho_.back()) return gain_.back();
  const auto it = std::upper_bound(rho_.begin(), rho_.end(), rho);
  const std::size_t i = static_cast<std::size_t>(it - rho_.begin());
  const double w = (rho - rho_[i - 1]) / (rho_[i] - rho_[i - 1]);
  return gain_[i - 1] + w * (gain_[i] - gain_[i - 1]);
}

FarField make_far_field(const SystemParams& params, const SimConfig& cfg) {
  if (!cfg.far_field) return FarField{};
  return FarField(params.channel, cfg.effective_window(params.d, params.lambda_p));
}

TrialOutcome run_trial(const SystemParams& params, const SimConfig& cfg, std::uint64_t trial_index) {
  return run_trial(params, cfg, trial_index, make_far_field(params, cfg));
}

TrialOutcome run_trial(const SystemParams& params, const SimConfig& cfg, std::uint64_t trial_index,
                       const FarField& far) {
  params.validate();
  cfg.validate(params.d);
  const std::uint64_t seed = cfg.master_seed;
  Engine pos_rng = trial_engine(seed, trial_index, StreamClass::kParents);
  Engine mark_rng = trial_engine(seed, trial_index, StreamClass::kMarks);
  Engine user_rng = trial_engine(seed, trial_index, StreamClass::kUsers);
  Engine eve_rng = trial_engine(seed, trial_index, StreamClass::kEves);
  Engine fade_rng = trial_engine(seed, trial_index, StreamClass::kFading);
  Engine link_rng = trial_engine(seed, trial_index, StreamClass::kLinks);

  const int M = params.M;
  const int N = params.N;
  const double Ps = params.P_s();
  const double Pn = params.P_n();
  const auto& ch = params.channel;
  const double window = cfg.effective_window(params.d, params.lambda_p);

  TrialOutcome out;
  const point_process::PalmSample palm =
      point_process::sample_palm_mhcpp(params.hard_core(), window, pos_rng, mark_rng);
  const std::vector<Point2D>& uavs = palm.pattern.points;
  out.palm_rejections = palm.rejections;
  out.uavs = uavs.size();

  // Only the typical user's position enters the metrics; the other users of
  // u_0 are still drawn so that user 0 is one member of a full cluster.
  const std::vector<Point2D> users =
      point_process::sample_cluster_users(Point2D{0.0, 0.0}, params.sigma, static_cast<std::size_t>(N), user_rng);
  const Point2D x = users[0];

  // Serving link.
  std::vector<UavState> state;
  state.reserve(uavs.size());
  for (std::size_t i = 0; i < uavs.size(); ++i) state.push_back(draw_uav(M, N, fade_rng, out.degenerate_resamples));

  const double l00 = point_process::distance(uavs[0], x);
  const LinkType q00 = channel::sample_link_type(l00, ch, link_rng);
  const double gain00 = channel::path_loss(l00, q00, ch);
  const UavState& own = state[0];
  const mimo::FadingVector& h00 = own.served[0];
  const double signal = Ps * std::norm(own.precoders.W.col(0).dot(h00)) * gain00;
  double leak = 0.0;
  for (int k = 1; k < N; ++k) leak += Ps * std::norm(own.precoders.W.col(k).dot(h00));
  leak += Pn * (own.precoders.G.adjoint() * h00).squaredNorm();
  leak *= gain00;
  out.zf_residual_ratio = signal > 0.0 ? leak / signal : 0.0;

  const double lambda_u = params.lambda_u();
  double interference = leak + lambda_u * params.P * far.path_gain(x.norm());
  for (std::size_t i = 1; i < uavs.size(); ++i) {
    const double l = point_process::distance(uavs[i], x);
    const LinkType q = channel::sample_link_type(l, ch, link_rng);
    const mimo::FadingVector g = mimo::sample_fading(M, fade_rng);
    const double gI = (state[i].precoders.W.adjoint() * g).squaredNorm();
    const double gN = (state[i].precoders.G.adjoint() * g).squaredNorm();
    interference += (Ps * gI + Pn * gN) * channel::path_loss(l, q, ch);
  }
  out.sinr_user = signal / (interference + params.sigma_x2);
  out.covered = out.sinr_user >= params.beta_t();

  // Eavesdroppers: AN from every UAV, own AN computed from the actual
  // precoder; for the other UAVs ||g^H G_i||^2 is drawn from its exact
  // Gamma(M-N, 1) law since G_i is orthonormal and g independent of it.
  const point_process::PointPattern eves = point_process::sample_ppp(params.lambda_e, window, eve_rng);
  out.eavesdroppers = eves.size();
  const double be = params.beta_e();
  std::gamma_distribution<double> an_gain(static_cast<double>(M - N), 1.0);
  const double far_an = lambda_u * Pn * (M - N);
  double max_sinr = 0.0;
  for (const Point2D& e : eves.points) {
    const double l0e = e.norm();
    const LinkType q0 = channel::sample_link_type(l0e, ch, link_rng);
    const double g0 = channel::path_loss(l0e, q0, ch);
    const mimo::FadingVector ge = mimo::sample_fading(M, fade_rng);
    const double tap = Ps * std::norm(own.precoders.W.col(0).dot(ge)) * g0;
    double denom = params.sigma_e2 + Pn * (own.precoders.G.adjoint() * ge).squaredNorm() * g0 +
                   far_an * far.path_gain(l0e);
    bool cleared = tap < be * denom;
    for (std::size_t i = 1; i < uavs.size() && !cleared; ++i) {
      const double l = point_process::distance(uavs[i], e);
      const LinkType q = channel::sample_link_type(l, ch, link_rng);
      denom += Pn * an_gain(fade_rng) * channel::path_loss(l, q, ch);
      cleared = tap < be * denom;
    }
    max_sinr = std::max(max_sinr, denom > 0.0 ? tap / denom : INFINITY);
  }
  out.max_sinr_eve = max_sinr;
  out.secret = eves.empty() || max_sinr < be;
  return out;
}

SimulationSummary simulate(const SystemParams& params, const SimConfig& cfg) {
  params.validate();
  cfg.validate(params.d);
  const auto trials = static_cast<std::int64_t>(cfg.trials);
  std::uint64_t covered = 0;
  std::uint64_t secret = 0;
  std::uint64_t joint = 0;
  std::uint64_t rejections = 0;
  std::uint64_t resamples = 0;
  double max_ratio = 0.0;
  std::exception_ptr failure;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
  const FarField far = make_far_field(params, cfg);

#pragma omp parallel for schedule(dynamic, 16) num_threads(threads) \
    reduction(+ : covered, secret, joint, rejections, resamples) reduction(max : max_ratio)
  for (std::int64_t t = 0; t < trials; ++t) {
    try {
      const TrialOutcome o = run_trial(params, cfg, static_cast<std::uint64_t>(t), far);
      covered += o.covered;
      secret += o.secret;
      joint += o.covered && o.secret;
      rejections += o.palm_rejections;
      resamples += o.degenerate_resamples;
      max_ratio = std::max(max_ratio, o.zf_residual_ratio);
    } catch (...) {
#pragma omp critical(secnet_sim_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  SimulationSummary s;
  const double cl = cfg.confidence_level;
  s.cp = make_proportion_estimate(covered, cfg.trials, cl, cfg.master_seed);
  s.sp = make_proportion_estimate(secret, cfg.trials, cl, cfg.master_seed);
  s.joint = make_proportion_estimate(joint, cfg.trials, cl, cfg.master_seed);
  const double scale = params.lambda_u() * params.N * params.R_s();
  s.st_product = scale * s.cp.value * s.sp.value;
  s.st_joint = scale * s.joint.value;
  s.palm_rejections = rejections;
  s.degenerate_resamples = resamples;
  s.max_zf_residual_ratio = max_ratio;
  return s;
}

MetricEstimate estimate_cp(const SystemParams& params, const SimConfig& cfg) { return simulate(params, cfg).cp; }

MetricEstimate estimate_sp(const SystemParams& params, const SimConfig& cfg) { return simulate(params, cfg).sp; }

ThroughputEstimate estimate_st(const SystemParams& params, const SimConfig& cfg) {
  const SimulationSummary s = simulate(params, cfg);
  return {s.st_product, s.st_joint};
}

}  // namespace secnet::simulator
