#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "secnet/errors.hpp"
#include "secnet/mimo.hpp"
#include "stats.hpp"

using namespace secnet;
using namespace secnet::mimo;

namespace {
std::vector<FadingVector> draw_set(int M, int N, Engine& rng) {
  std::vector<FadingVector> h;
  for (int j = 0; j < N; ++j) h.push_back(sample_fading(M, rng));
  return h;
}
}  // namespace

TEST_CASE("fading vectors") {
  Engine rng(17);
  const int M = 8;
  const int n = 100000;
  std::vector<double> norms;
  double s = 0.0, s2 = 0.0;
  Eigen::MatrixXcd cov = Eigen::MatrixXcd::Zero(M, M);
  for (int i = 0; i < n; ++i) {
    const FadingVector h = sample_fading(M, rng);
    const double q = h.squaredNorm();
    norms.push_back(q);
    s += q;
    s2 += q * q;
    cov += h * h.adjoint();
  }
  const double mean = s / n;
  CHECK(std::abs(mean - M) < 3 * std::sqrt((s2 / n - mean * mean) / n));
  CHECK(testing::ks_test(norms, [&](double x) { return testing::gamma_cdf(x, M, 1.0); }) > 0.01);
  cov /= n;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double target = i == j ? 1.0 : 0.0;
      CHECK(std::abs(cov(i, j) - target) < 5.0 / std::sqrt(double(n)));
    }
  }
}

TEST_CASE("zero-forcing single user") {
  Engine rng(4);
  const FadingVector h = sample_fading(2, rng);
  const std::vector<FadingVector> set{h};
  const PrecoderSet p = zf_precoder(set);
  CHECK((p.W.col(0) - h / h.norm()).norm() < 1e-12);
  CHECK(std::norm(p.W.col(0).dot(h)) == doctest::Approx(h.squaredNorm()).epsilon(1e-12));
  CHECK(p.G.cols() == 1);
}

TEST_CASE("zero-forcing orthogonality") {
  Engine rng(8);
  for (auto [M, N] : {std::pair{8, 4}, std::pair{4, 2}, std::pair{8, 6}, std::pair{10, 9}}) {
    for (int rep = 0; rep < 200; ++rep) {
      const auto set = draw_set(M, N, rng);
      const PrecoderSet p = zf_precoder(set);
      const PrecoderResiduals r = precoder_residuals(set, p);
      CHECK(r.max_cross_talk < 1e-10);
      CHECK(r.max_null_leak < 1e-10);
      CHECK(r.basis_error < 1e-10);
      CHECK(r.max_column_norm_error < 1e-12);
      CHECK(p.W.rows() == M);
      CHECK(p.W.cols() == N);
      CHECK(p.G.cols() == M - N);
    }
  }
}

TEST_CASE("zero-forcing rejects degenerate sets") {
  Engine rng(9);
  const FadingVector h = sample_fading(4, rng);
  const std::vector<FadingVector> same{h, h * std::complex<double>(0.0, 2.0)};
  CHECK_THROWS_AS(zf_precoder(same), DegenerateChannelError);
  const std::vector<FadingVector> zero{FadingVector::Zero(4)};
  CHECK_THROWS_AS(zf_precoder(zero), DegenerateChannelError);
  CHECK_THROWS_AS(zf_precoder(draw_set(4, 4, rng)), ParameterError);
}

TEST_CASE("power split") {
  const PowerSplit eq(5.0, 0.5, 8, 4);
  CHECK(eq.signal_power() == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(eq.noise_power() == doctest::Approx(0.625).epsilon(1e-15));
  CHECK(eq.zeta() == 0.0);
  for (double phi : {0.05, 0.3, 0.5, 0.7, 0.95}) {
    for (auto [M, N] : {std::pair{8, 4}, std::pair{8, 1}, std::pair{10, 7}}) {
      const PowerSplit s(5.0, phi, M, N);
      CHECK(N * s.signal_power() + (M - N) * s.noise_power() == doctest::Approx(5.0).epsilon(1e-14));
      if (std::abs(phi - double(N) / M) > 1e-12) CHECK((s.zeta() > 0) == (phi < double(N) / M));
    }
  }
  CHECK_THROWS_AS(PowerSplit(5.0, 0.0, 8, 4), ParameterError);
  CHECK_THROWS_AS(PowerSplit(5.0, 1.0, 8, 4), ParameterError);
  CHECK_THROWS_AS(PowerSplit(5.0, 0.5, 8, 8), ParameterError);
  CHECK_THROWS_AS(PowerSplit(-1.0, 0.5, 8, 4), ParameterError);
}

TEST_CASE("effective gain laws") {
  Engine rng(21);
  const int M = 8, N = 4, n = 100000;
  std::vector<double> own, artificial, stream;
  double gi_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto set = draw_set(M, N, rng);
    const PrecoderSet p = zf_precoder(set);
    const FadingVector g = sample_fading(M, rng);
    const GainRecord r = effective_gains(set, g, p);
    own.push_back(r.own);
    artificial.push_back(r.artificial);
    stream.push_back(r.stream);
    gi_sum += r.interference;
  }
  CHECK(testing::ks_test(own, [&](double x) { return testing::gamma_cdf(x, M - N + 1, 1.0); }) > 0.01);
  CHECK(testing::ks_test(artificial, [&](double x) { return testing::gamma_cdf(x, M - N, 1.0); }) > 0.01);
  CHECK(testing::ks_test(stream, [&](double x) { return 1.0 - std::exp(-x); }) > 0.01);
  // Unit-norm columns give E||g^H W||^2 = N regardless of their mutual angles.
  CHECK(gi_sum / n == doctest::Approx(N).epsilon(0.01));
}

TEST_CASE("gains are phase invariant") {
  Engine rng(30);
  const auto set = draw_set(8, 4, rng);
  const FadingVector g = sample_fading(8, rng);
  const GainRecord a = effective_gains(set, g, zf_precoder(set));
  const std::complex<double> rot = std::polar(1.0, 0.73);
  std::vector<FadingVector> rotated;
  for (const auto& h : set) rotated.push_back(h * rot);
  const GainRecord b = effective_gains(rotated, g * std::conj(rot), zf_precoder(rotated));
  CHECK(b.own == doctest::Approx(a.own).epsilon(1e-12));
  CHECK(b.interference == doctest::Approx(a.interference).epsilon(1e-12));
  CHECK(b.artificial == doctest::Approx(a.artificial).epsilon(1e-12));
  CHECK(b.stream == doctest::Approx(a.stream).epsilon(1e-12));
}
