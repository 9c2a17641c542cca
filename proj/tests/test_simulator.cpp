#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "secnet/errors.hpp"
#include "secnet/simulator.hpp"

using namespace secnet;
using namespace secnet::simulator;

namespace {
SimConfig small_run(std::uint64_t trials, int threads = 1) {
  SimConfig cfg;
  cfg.trials = trials;
  cfg.threads = threads;
  cfg.master_seed = 424242;
  return cfg;
}
}  // namespace

TEST_CASE("single trials are reproducible") {
  const SystemParams p = default_system_params();
  const SimConfig cfg = small_run(1);
  for (std::uint64_t i : {0u, 7u, 123u}) {
    const TrialOutcome a = run_trial(p, cfg, i);
    const TrialOutcome b = run_trial(p, cfg, i);
    CHECK(a.covered == b.covered);
    CHECK(a.secret == b.secret);
    CHECK(a.sinr_user == b.sinr_user);
    CHECK(a.max_sinr_eve == b.max_sinr_eve);
    CHECK(a.uavs == b.uavs);
    CHECK(a.eavesdroppers == b.eavesdroppers);
    CHECK(a.covered == (a.sinr_user >= p.beta_t()));
    CHECK(a.uavs >= 1);
  }
  CHECK(run_trial(p, cfg, 1).sinr_user != run_trial(p, cfg, 2).sinr_user);
}

TEST_CASE("summary does not depend on the thread count") {
  const SystemParams p = default_system_params();
  const SimulationSummary one = simulate(p, small_run(200, 1));
  const SimulationSummary two = simulate(p, small_run(200, 2));
  CHECK(one.cp.successes == two.cp.successes);
  CHECK(one.sp.successes == two.sp.successes);
  CHECK(one.joint.successes == two.joint.successes);
  CHECK(one.palm_rejections == two.palm_rejections);
  CHECK(one.max_zf_residual_ratio == two.max_zf_residual_ratio);
  CHECK(one.cp.trials == 200);
}

TEST_CASE("zero-forcing leaves no intra-cluster leakage") {
  const SimulationSummary s = simulate(default_system_params(), small_run(200));
  CHECK(s.max_zf_residual_ratio < 1e-9);
}

TEST_CASE("degenerate limits") {
  SystemParams p = default_system_params();
  SUBCASE("no eavesdroppers") {
    p.lambda_e = 0.0;
    const SimulationSummary s = simulate(p, small_run(300));
    CHECK(s.sp.successes == s.sp.trials);
    CHECK(s.sp.value == 1.0);
  }
  SUBCASE("zero threshold") {
    p.R_t = 0.0;
    p.R_e = 0.0;
    const SimulationSummary s = simulate(p, small_run(300));
    CHECK(s.cp.value == 1.0);
    CHECK(s.st_product == 0.0);
  }
}

TEST_CASE("throughput forms") {
  const SystemParams p = default_system_params();
  const SimulationSummary s = simulate(p, small_run(300));
  const double scale = p.lambda_u() * p.N * p.R_s();
  CHECK(s.st_product == doctest::Approx(scale * s.cp.value * s.sp.value).epsilon(1e-12));
  CHECK(s.st_joint == doctest::Approx(scale * s.joint.value).epsilon(1e-12));
  CHECK(s.joint.successes <= std::min(s.cp.successes, s.sp.successes));
}

TEST_CASE("estimates are plausible at the reference point") {
  const SystemParams p = default_system_params();
  const SimulationSummary s = simulate(p, small_run(1000));
  CHECK(s.cp.value > 0.7);
  CHECK(s.cp.value < 0.98);
  CHECK(s.sp.value > 0.6);
  CHECK(s.sp.value < 0.98);
  CHECK(s.cp.ci_low <= s.cp.value);
  CHECK(s.cp.ci_high >= s.cp.value);
}

TEST_CASE("invalid inputs are rejected") {
  SystemParams p = default_system_params();
  p.phi = 1.0;
  CHECK_THROWS_AS(simulate(p, small_run(10)), ParameterError);
  CHECK_THROWS_AS(simulate(default_system_params(), small_run(0)), ParameterError);
}

TEST_CASE("far-field table") {
  const channel::ChannelParams ch = default_system_params().channel;
  const FarField far(ch, 3000.0);
  // At the centre the angular integral is trivial, so a 1-D integral checks it.
  auto ring = [&](double r) {
    const double l = std::hypot(r, ch.H);
    const double pl = channel::los_probability(l, ch);
    return 2.0 * std::numbers::pi * r *
           (pl * channel::path_loss(l, channel::LinkType::kLoS, ch) + (1.0 - pl) * channel::path_loss(l, channel::LinkType::kNLoS, ch));
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double expected = GK::integrate(ring, 3000.0, std::numeric_limits<double>::infinity(), 15u, 1e-10);
  CHECK(far.path_gain(0.0) == doctest::Approx(expected).epsilon(1e-5));

  double prev = 0.0;
  for (double rho : {0.0, 1000.0, 2000.0, 2800.0, 2990.0}) {
    const double g = far.path_gain(rho);
    CHECK(std::isfinite(g));
    CHECK(g > prev);
    prev = g;
  }
  CHECK(FarField(ch, 6000.0).path_gain(0.0) < far.path_gain(0.0));
  CHECK(FarField{}.path_gain(100.0) == 0.0);
  CHECK_THROWS_AS(FarField(ch, 0.0), ParameterError);
}

TEST_CASE("far-field term is switchable") {
  SystemParams p = default_system_params();
  SimConfig on = small_run(1);
  SimConfig off = on;
  off.far_field = false;
  const TrialOutcome a = run_trial(p, on, 3);
  const TrialOutcome b = run_trial(p, off, 3);
  CHECK(a.sinr_user < b.sinr_user);
  CHECK(a.uavs == b.uavs);
}
