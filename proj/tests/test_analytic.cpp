#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "secnet/analytic.hpp"
#include "secnet/errors.hpp"

using namespace secnet;
using namespace secnet::analytic;
using channel::LinkType;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Laplace variable of the coverage event for a user at l00 served over a LoS link.
double coverage_s(const SystemParams& p, double l00) {
  return p.beta_t() / (p.P_s() * channel::path_loss(l00, LinkType::kLoS, p.channel));
}

}  // namespace

TEST_CASE("retention reference matches the library") {
  const SystemParams p = default_system_params();
  for (double r : {40.0, 50.0, 60.0, 75.0, 99.0, 100.0, 150.0}) {
    CHECK(std::abs(point_process::retention_probability(r, p.hard_core()) -
                   testing::retention_reference(r, p.lambda_p, p.d)) < 1e-12);
  }
}

TEST_CASE("Laplace transform at the origin and without interferers") {
  const SystemParams p = default_system_params();
  const QuadratureSpec quad;
  CHECK(laplace_interference(0.0, LinkType::kLoS, 20.0, p, quad) == 1.0);
  SystemParams sparse = p;
  sparse.lambda_p = 1e-16;
  const double s = coverage_s(p, 20.0);
  CHECK(std::abs(laplace_interference(s, LinkType::kLoS, 20.0, sparse, quad) - 1.0) < 1e-9);
  CHECK_THROWS_AS(laplace_interference(-1.0, LinkType::kLoS, 20.0, p, quad), ParameterError);
}

TEST_CASE("log Laplace transform matches a fixed-grid sum") {
  for (double phi : {0.3, 0.5, 0.8}) {
    SystemParams p = default_system_params();
    p.phi = phi;
    const double l00 = p.sigma;
    const testing::PlaneGrid grid(p, l00);
    Evaluator ev(p, QuadratureSpec{});
    for (double scale : {0.1, 1.0, 10.0}) {
      const double s = scale * coverage_s(p, l00);
      for (int q = 0; q < 2; ++q) {
        const LinkType type = q == 0 ? LinkType::kLoS : LinkType::kNLoS;
        const double got = std::log(ev.laplace_interference(s, type, l00));
        INFO("phi=" << phi << " s=" << s << " q=" << q);
        CHECK(rel_err(got, grid.log_laplace(s, q)) < 1e-4);
      }
    }
  }
}

TEST_CASE("Omega derivatives match finite differences") {
  const SystemParams p = default_system_params();
  const double l00 = p.sigma;
  const testing::PlaneGrid grid(p, l00);
  Evaluator ev(p, QuadratureSpec{});
  const double s = coverage_s(p, l00);
  for (int q = 0; q < 2; ++q) {
    const LinkType type = q == 0 ? LinkType::kLoS : LinkType::kNLoS;
    // g(x) = log L(s (1 + x)) so that g^(k)(0) = s^k Omega^(k)(s).
    auto g = [&](double x) { return grid.log_laplace_change(s, s * (1.0 + x), q); };
    for (int k = 1; k <= 3; ++k) {
      const double fd = testing::richardson_derivative(g, 0.0, 0.4, k);
      const double got = std::pow(s, k) * ev.omega_derivative(k, s, type, l00);
      INFO("q=" << q << " k=" << k);
      CHECK(rel_err(got, fd) < 1e-3);
      CHECK((k % 2 ? got < 0.0 : got > 0.0));
    }
  }
}

TEST_CASE("Laplace transform derivatives match finite differences") {
  for (double phi : {0.3, 0.7}) {
    SystemParams p = default_system_params();
    p.phi = phi;
    const double l00 = 35.0;
    const testing::PlaneGrid grid(p, l00);
    Evaluator ev(p, QuadratureSpec{});
    const double s = coverage_s(p, l00);
    for (int q = 0; q < 2; ++q) {
      const LinkType type = q == 0 ? LinkType::kLoS : LinkType::kNLoS;
      // L(s(1+x)) - L(s) = L(s) expm1(log L(s(1+x)) - log L(s)); the constant drops out of every stencil.
      auto g = [&](double x) { return std::expm1(grid.log_laplace_change(s, s * (1.0 + x), q)); };
      const double base = grid.laplace(s, q);
      for (int k = 1; k <= 4; ++k) {
        const double fd = base * testing::richardson_derivative(g, 0.0, 0.4, k);
        const double got = std::pow(s, k) * ev.laplace_derivative(k, s, type, l00);
        INFO("phi=" << phi << " q=" << q << " k=" << k);
        CHECK(rel_err(got, fd) < 1e-3);
        CHECK((k % 2 ? got < 0.0 : got > 0.0));
      }
    }
  }
}

TEST_CASE("derivative order is validated") {
  const SystemParams p = default_system_params();
  Evaluator ev(p, QuadratureSpec{});
  CHECK_THROWS_AS(ev.omega_derivative(0, 1e9, LinkType::kLoS, 20.0), ParameterError);
  CHECK_THROWS_AS(ev.laplace_derivative(-1, 1e9, LinkType::kLoS, 20.0), ParameterError);
}

TEST_CASE("degenerate limits") {
  const QuadratureSpec quad;
  SystemParams p = default_system_params();

  SUBCASE("zero threshold gives certain coverage") {
    p.R_t = 0.0;
    p.R_e = 0.0;
    CHECK(coverage_probability(p, quad) == 1.0);
  }
  SUBCASE("vanishing power gives no coverage") {
    p.P = 1e-12;
    CHECK(coverage_probability(p, quad) < 1e-6);
  }
  SUBCASE("no eavesdroppers gives certain secrecy") {
    p.lambda_e = 0.0;
    CHECK(secrecy_probability(p, quad) == 1.0);
  }
  SUBCASE("zero secrecy rate gives zero throughput") {
    p.R_e = p.R_t;
    CHECK(secrecy_throughput(p, quad) == 0.0);
  }
  SUBCASE("a huge redundancy rate gives near certain secrecy") {
    p.R_t = 30.0;
    p.R_e = 25.0;
    CHECK(secrecy_probability(p, quad) > 1.0 - 1e-6);
  }
}

TEST_CASE("throughput identity") {
  const SystemParams p = default_system_params();
  const QuadratureSpec quad;
  const Metrics m = evaluate_all(p, quad);
  const double expect = p.lambda_u() * p.N * m.cp * m.sp * p.R_s();
  CHECK(rel_err(m.st, expect) < 1e-12);
  CHECK(rel_err(secrecy_throughput(p, 1.0, 1.0), 8e-6 * 4 * 0.4) < 1e-9);
  CHECK(m.cp > 0.0);
  CHECK(m.cp < 1.0);
  CHECK(m.sp > 0.0);
  CHECK(m.sp < 1.0);
}

TEST_CASE("probabilities stay in the unit interval and follow the power split") {
  const QuadratureSpec quad;
  double prev_cp = -1.0, prev_sp = 2.0;
  for (double phi : {0.2, 0.5, 0.8}) {
    SystemParams p = default_system_params();
    p.phi = phi;
    const Metrics m = evaluate_all(p, quad);
    INFO("phi=" << phi << " cp=" << m.cp << " sp=" << m.sp);
    CHECK(m.cp >= 0.0);
    CHECK(m.cp <= 1.0);
    CHECK(m.sp >= 0.0);
    CHECK(m.sp <= 1.0);
    CHECK(m.cp > prev_cp);
    CHECK(m.sp < prev_sp);
    prev_cp = m.cp;
    prev_sp = m.sp;
  }
}
