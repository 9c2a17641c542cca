#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "oracles.hpp"
#include "secnet/analytic.hpp"
#include "secnet/theta_kernel.hpp"
#include "stats.hpp"

using namespace secnet;
using namespace secnet::analytic;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double pdf_integral(double a, double b, const mimo::PowerSplit& split) {
  auto f = [&](double p) { return interference_power_pdf(p, split); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
}

double pdf_total(const mimo::PowerSplit& split) {
  const double scale = std::max(split.signal_power(), split.noise_power());
  double total = 0.0, a = 0.0;
  for (double k : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    total += pdf_integral(a, k * scale, split);
    a = k * scale;
  }
  auto f = [&](double p) { return interference_power_pdf(p, split); };
  total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, a, std::numeric_limits<double>::infinity(), 15, 1e-13);
  return total;
}

const std::vector<double> kTs{1e-4, 1e-2, 0.5, 3.0, 50.0, 1e4};

}  // namespace

TEST_CASE("combinatorial helpers") {
  CHECK(falling_factorial(5, 0) == 1.0);
  CHECK(falling_factorial(5, 2) == 20.0);
  CHECK(falling_factorial(3, 4) == 0.0);
  CHECK(binomial(8, 3) == 56.0);
  CHECK(binomial(4, 0) == 1.0);
  CHECK(binomial(4, 5) == 0.0);
}

TEST_CASE("branch selection") {
  CHECK(ThetaKernel(mimo::power_split(5.0, 0.3, 8, 4)).branch() == PowerBranch::kSignalBelowNoise);
  CHECK(ThetaKernel(mimo::power_split(5.0, 0.7, 8, 4)).branch() == PowerBranch::kSignalAboveNoise);
  CHECK(ThetaKernel(mimo::power_split(5.0, 0.5, 8, 4)).branch() == PowerBranch::kEqualPower);
  CHECK(ThetaKernel(mimo::power_split(5.0, 0.5 * (1 + 1e-8), 8, 4)).branch() == PowerBranch::kEqualPower);
}

TEST_CASE("equal-power closed form") {
  const auto split = mimo::power_split(5.0, 0.5, 8, 4);
  const ThetaKernel k(split);
  for (double t : kTs) {
    const double expect = std::pow(1.0 + t * split.signal_power(), -8.0);
    CHECK(rel_err(k.value(t), expect) < 1e-13);
    std::vector<double> out(5);
    k.scaled_derivatives(t, 1.0, out);
    // d/dt (1 + t P)^-8 = -8 P (1 + t P)^-9
    CHECK(rel_err(out[1], -8.0 * split.signal_power() * std::pow(1.0 + t * split.signal_power(), -9.0)) < 1e-12);
  }
}

TEST_CASE("series and product forms agree") {
  for (auto [M, N] : {std::pair{8, 4}, std::pair{4, 2}, std::pair{8, 6}, std::pair{10, 3}}) {
    for (double phi : {0.1, 0.3, 0.45, 0.6, 0.7, 0.9}) {
      const auto split = mimo::power_split(5.0, phi, M, N);
      const ThetaKernel k(split);
      if (k.branch() == PowerBranch::kEqualPower) continue;
      for (double t : kTs) {
        for (int order = 0; order <= 4; ++order) {
          double cond = 0.0;
          const double series = k.series_scaled_derivative(order, t, t, &cond);
          const double product = k.factored_scaled_derivative(order, t, t);
          if (cond > kSeriesConditionLimit) continue;
          INFO("M=" << M << " N=" << N << " phi=" << phi << " t=" << t << " k=" << order);
          CHECK(rel_err(series, product) < 1e-9 * std::max(1.0, cond));
        }
      }
    }
  }
}

TEST_CASE("value matches independent quadrature of the gamma mixture") {
  for (double phi : {0.2, 0.3, 0.5, 0.7, 0.9}) {
    const auto split = mimo::power_split(5.0, phi, 8, 4);
    const ThetaKernel k(split);
    for (double t : kTs) {
      INFO("phi=" << phi << " t=" << t);
      CHECK(rel_err(k.value(t), testing::mixture_laplace_by_quadrature(t, split)) < 1e-9);
      CHECK(rel_err(k.complement(t), 1.0 - testing::mixture_laplace_by_quadrature(t, split)) < 1e-6);
    }
  }
}

TEST_CASE("complement is accurate for tiny arguments") {
  const auto split = mimo::power_split(5.0, 0.3, 8, 4);
  const ThetaKernel k(split);
  // 1 - E[exp(-tP)] ~ t E[P] = t * total power.
  CHECK(rel_err(k.complement(1e-12), 5e-12) < 1e-6);
  std::vector<double> out(3);
  k.complement_and_derivatives(1e-12, 1.0, out);
  CHECK(rel_err(out[0], 5e-12) < 1e-6);
  CHECK(rel_err(out[1], -5.0) < 1e-6);
}

TEST_CASE("interferer term at a reference geometry") {
  SystemParams p = default_system_params();
  p.phi = 0.3;
  const double r = 200.0, beta = std::numbers::pi / 3.0, s = 1e9, l00 = 20.0;
  const double l = std::sqrt(l00 * l00 + r * r - 2.0 * l00 * r * std::cos(beta));
  const double t = s * channel::path_loss(l, channel::LinkType::kLoS, p.channel);
  const double value = theta(r, beta, s, channel::LinkType::kLoS, p, l00);
  CHECK(rel_err(value, testing::mixture_laplace_by_quadrature(t, p.power_split())) < 1e-6);

  // The same quantity as an integral against the interferer power density.
  auto f = [&](double x) { return std::exp(-t * x) * interference_power_pdf(x, p.power_split()); };
  const double direct = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
  CHECK(rel_err(value, direct) < 1e-6);
}

TEST_CASE("interferer power density is normalised") {
  for (auto [M, N] : {std::pair{8, 4}, std::pair{4, 2}, std::pair{8, 6}}) {
    for (double phi : {0.3, static_cast<double>(N) / M, 0.7}) {
      const auto split = mimo::power_split(5.0, phi, M, N);
      INFO("M=" << M << " N=" << N << " phi=" << phi);
      CHECK(std::abs(pdf_total(split) - 1.0) < 1e-8);
      CHECK(interference_power_pdf(-1.0, split) == 0.0);
    }
  }
}

TEST_CASE("interferer power density fits sampled powers") {
  std::mt19937_64 rng(99);
  for (double phi : {0.3, 0.5, 0.7}) {
    const auto split = mimo::power_split(5.0, phi, 8, 4);
    std::gamma_distribution<double> gs(4.0, 1.0), gn(4.0, 1.0);
    std::vector<double> samples(200000);
    for (double& x : samples) x = split.signal_power() * gs(rng) + split.noise_power() * gn(rng);
    std::vector<double> edges;
    std::vector<double> cum;
    double acc = 0.0, prev = 0.0;
    for (int i = 1; i <= 40; ++i) {
      const double e = 0.3 * i;
      acc += pdf_integral(prev, e, split);
      prev = e;
      edges.push_back(e);
      cum.push_back(acc);
    }
    auto cdf = [&](double x) {
      for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i] == x) return cum[i];
      return 1.0;
    };
    const auto chi = testing::chi_square_edges(samples, edges, cdf);
    INFO("phi=" << phi << " chi2=" << chi.statistic << " p=" << chi.pvalue);
    CHECK(chi.pvalue > 0.01);
  }
}

TEST_CASE("continuity across the equal-power split") {
  const double phi0 = 0.5;
  const ThetaKernel centre(mimo::power_split(5.0, phi0, 8, 4));
  for (double offset : {1e-4, 1e-6, 1e-8}) {
    for (double sign : {-1.0, 1.0}) {
      const ThetaKernel side(mimo::power_split(5.0, phi0 + sign * offset, 8, 4));
      for (double t : kTs) {
        std::vector<double> a(5), b(5);
        centre.scaled_derivatives(t, t, a);
        side.scaled_derivatives(t, t, b);
        for (int k = 0; k < 5; ++k) {
          INFO("offset=" << sign * offset << " t=" << t << " k=" << k);
          CHECK(rel_err(b[k], a[k]) < 1e-3);
        }
      }
    }
  }
}

TEST_CASE("derivatives alternate in sign") {
  for (double phi : {0.2, 0.5, 0.8}) {
    const ThetaKernel k(mimo::power_split(5.0, phi, 8, 4));
    for (double t : kTs) {
      std::vector<double> out(6);
      k.scaled_derivatives(t, t, out);
      for (int j = 0; j < 6; ++j) CHECK((j % 2 ? out[j] < 0.0 : out[j] > 0.0));
    }
  }
}
