#include "secnet/theta_kernel.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "secnet/errors.hpp"
#include "secnet/quadrature.hpp"

namespace secnet::analytic {

namespace {

constexpr int kMaxAntennas = 32;
constexpr int kMaxOrder = 32;
constexpr int kMaxPower = kMaxAntennas + kMaxOrder + 1;

void fill_powers(double base, int count, std::array<double, kMaxPower>& out) {
  out[0] = 1.0;
  for (int j = 1; j < count; ++j) out[j] = out[j - 1] * base;
}

}  // namespace

double falling_factorial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= static_cast<double>(n - i);
  return r;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

PowerBranch power_branch(const mimo::PowerSplit& split) {
  const double balance = split.equal_power_phi();
  if (std::abs(split.phi() - balance) < kEqualPowerBand * balance) return PowerBranch::kEqualPower;
  return split.phi() < balance ? PowerBranch::kSignalBelowNoise : PowerBranch::kSignalAboveNoise;
}

ThetaKernel::ThetaKernel(const mimo::PowerSplit& split) : split_(split), branch_(power_branch(split)) {
  if (split.antennas() > kMaxAntennas) {
    throw ParameterError("analytic kernel supports at most " + std::to_string(kMaxAntennas) + " antennas");
  }
  const int M = split.antennas();
  const int N = split.users();
  const int K = M - N;
  const double Ps = split.signal_power();
  const double Pn = split.noise_power();
  const double zeta = split.zeta();
  if (branch_ == PowerBranch::kSignalBelowNoise) {
    const double base = std::pow(Pn, 2 * N - M) / std::pow(Pn - Ps, N);
    for (int n = 0; n < K; ++n) outer_coef_.push_back(binomial(N + n - 1, n) * base / std::pow(-zeta, n));
    zeta_terms_.push_back(1.0);
    for (int m = 1; m < M; ++m) zeta_terms_.push_back(zeta_terms_.back() * zeta / m);
  } else if (branch_ == PowerBranch::kSignalAboveNoise) {
    const double base = std::pow(Ps, M - 2 * N) / std::pow(Ps - Pn, K);
    for (int n = 0; n < N; ++n) outer_coef_.push_back(binomial(K + n - 1, n) * base / std::pow(zeta, n));
    zeta_terms_.push_back(1.0);
    for (int m = 1; m < M; ++m) zeta_terms_.push_back(zeta_terms_.back() * -zeta / m);
  }
}

double ThetaKernel::series_scaled_derivatives(double t, double u, std::span<double> out) const {
  const int orders = static_cast<int>(out.size());
  if (orders > kMaxOrder) throw ParameterError("derivative order too large for the series kernel");
  const int M = split_.antennas();
  const int N = split_.users();
  const int K = M - N;
  const double Ps = split_.signal_power();
  const double Pn = split_.noise_power();
  const double tau1 = 1.0 / Ps + t;
  const double tau2 = 1.0 / Pn + t;

  if (branch_ == PowerBranch::kEqualPower) {
    const double head = std::pow(Ps * tau1, -M);
    double ratio = 1.0;
    for (int k = 0; k < orders; ++k) {
      out[k] = falling_factorial(M + k - 1, k) * ratio * head;
      ratio *= -u / tau1;
    }
    return 1.0;
  }

  const int count = M + orders;
  std::array<double, kMaxPower> inv1{};
  std::array<double, kMaxPower> inv2{};
  fill_powers(1.0 / tau1, count, inv1);
  fill_powers(1.0 / tau2, count, inv2);
  // In branch 1 the lone term uses tau_2 and the inner sum tau_1; branch 2 swaps them.
  const bool below = branch_ == PowerBranch::kSignalBelowNoise;
  const auto& lone = below ? inv2 : inv1;
  const auto& inner = below ? inv1 : inv2;
  const int outer_dim = below ? K : N;
  const int other_dim = below ? N : K;

  double worst = 1.0;
  double neg_u_k = 1.0;
  for (int k = 0; k < orders; ++k) {
    CompensatedSum sum;
    for (int n = 0; n < outer_dim; ++n) {
      const double rho = outer_coef_[n] * neg_u_k;
      const int e = outer_dim - n;
      sum.add(rho * falling_factorial(e - 1 + k, k) * lone[e + k]);
      for (int m = 0; m < other_dim + n; ++m) {
        sum.add(-rho * falling_factorial(e - 1 + k + m, k + m) * inner[e + k + m] * zeta_terms_[m]);
      }
    }
    out[k] = sum.value();
    worst = std::max(worst, sum.condition());
    neg_u_k *= -u;
  }
  return worst;
}

double ThetaKernel::series_scaled_derivative(int k, double t, double u, double* condition) const {
  std::array<double, kMaxOrder> buf{};
  const double cond = series_scaled_derivatives(t, u, std::span<double>(buf.data(), k + 1));
  if (condition) *condition = cond;
  return buf[k];
}

double ThetaKernel::factored_scaled_derivative(int k, double t, double u) const {
  const int N = split_.users();
  const int K = split_.antennas() - N;
  const double Ps = split_.signal_power();
  const double Pn = split_.noise_power();
  const double head = std::exp(-N * std::log1p(t * Ps) - K * std::log1p(t * Pn));
  const double x = u * Ps / (1.0 + t * Ps);
  const double y = u * Pn / (1.0 + t * Pn);
  double acc = 0.0;
  for (int j = 0; j <= k; ++j) {
    acc += binomial(k, j) * falling_factorial(N + j - 1, j) * std::pow(x, j) *
           falling_factorial(K + k - j - 1, k - j) * std::pow(y, k - j);
  }
  return ((k % 2) ? -1.0 : 1.0) * head * acc;
}

void ThetaKernel::scaled_derivatives(double t, double u, std::span<double> out) const {
  const double cond = series_scaled_derivatives(t, u, out);
  if (!(cond <= kSeriesConditionLimit)) {
    ++fallbacks_;
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = factored_scaled_derivative(static_cast<int>(k), t, u);
  }
}

void ThetaKernel::complement_and_derivatives(double t, double u, std::span<double> out) const {
  const double cond = series_scaled_derivatives(t, u, out);
  const bool fallback = !(cond <= kSeriesConditionLimit);
  if (fallback) {
    ++fallbacks_;
    for (std::size_t k = 1; k < out.size(); ++k) out[k] = factored_scaled_derivative(static_cast<int>(k), t, u);
  }
  if (!fallback && out[0] <= 0.5) {
    out[0] = 1.0 - out[0];
  } else {
    const int N = split_.users();
    const int K = split_.antennas() - N;
    out[0] = -std::expm1(-N * std::log1p(t * split_.signal_power()) - K * std::log1p(t * split_.noise_power()));
  }
}

double ThetaKernel::value(double t) const {
  double v = 0.0;
  scaled_derivatives(t, t, std::span<double>(&v, 1));
  return v;
}

double ThetaKernel::complement(double t) const {
  double v = 0.0;
  const double cond = series_scaled_derivatives(t, t, std::span<double>(&v, 1));
  if (cond <= kSeriesConditionLimit && v <= 0.5) return 1.0 - v;
  const int N = split_.users();
  const int K = split_.antennas() - N;
  return -std::expm1(-N * std::log1p(t * split_.signal_power()) - K * std::log1p(t * split_.noise_power()));
}

namespace {

double gamma_density(double x, double shape, double scale) {
  if (x <= 0.0) return shape == 1.0 ? 1.0 / scale : 0.0;
  return std::exp((shape - 1.0) * std::log(x) - x / scale - std::lgamma(shape) - shape * std::log(scale));
}

double convolution_pdf(double p, const mimo::PowerSplit& split) {
  const int N = split.users();
  const int K = split.antennas() - N;
  const auto f = [&](double x) {
    return gamma_density(x, N, split.signal_power()) * gamma_density(p - x, K, split.noise_power());
  };
  quadrature::Tolerance tol;
  tol.rel = 1e-10;
  tol.abs = 1e-300;
  return quadrature::integrate(f, 0.0, p, tol);
}

// One branch of the unequal-power series, written for the generic pair
// (A ~ Gamma(a, scale_a), B ~ Gamma(b, scale_b)) with rate gap g = 1/scale_a - 1/scale_b > 0.
double unequal_series(double p, int a, double scale_a, int b, double scale_b, double* condition) {
  const double g = 1.0 / scale_a - 1.0 / scale_b;
  const double norm = -a * std::log(scale_a) - b * std::log(scale_b) - std::lgamma(a) - std::lgamma(b);
  CompensatedSum sum;
  for (int n = 0; n < b; ++n) {
    const double lower = boost::math::gamma_p(a + n, g * p);  // regularised lower incomplete gamma
    if (lower <= 0.0) continue;
    const double log_mag = (b - 1 - n) * std::log(p) - p / scale_b + std::lgamma(a + n) + std::log(lower) -
                           (a + n) * std::log(g) + norm;
    sum.add(((n % 2) ? -1.0 : 1.0) * binomial(b - 1, n) * std::exp(log_mag));
  }
  if (condition) *condition = sum.condition();
  return sum.value();
}

}  // namespace

double interference_power_pdf(double p, const mimo::PowerSplit& split) {
  if (!(p > 0.0)) return 0.0;
  const int M = split.antennas();
  const int N = split.users();
  const double Ps = split.signal_power();
  const double Pn = split.noise_power();
  double cond = 1.0;
  double v = 0.0;
  switch (power_branch(split)) {
    case PowerBranch::kEqualPower:
      return gamma_density(p, M, Ps);
    case PowerBranch::kSignalBelowNoise:
      v = unequal_series(p, N, Ps, M - N, Pn, &cond);
      break;
    case PowerBranch::kSignalAboveNoise:
      v = unequal_series(p, M - N, Pn, N, Ps, &cond);
      break;
  }
  if (!(cond <= kSeriesConditionLimit) || !(v >= 0.0)) return convolution_pdf(p, split);
  return v;
}

}  // namespace secnet::analytic
