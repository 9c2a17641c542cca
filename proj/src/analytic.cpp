#include "secnet/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "secnet/errors.hpp"
#include "secnet/point_process.hpp"
#include "secnet/quadrature.hpp"

namespace secnet::analytic {

namespace {

using channel::LinkType;

constexpr double kPi = std::numbers::pi;
constexpr int kApiOrder = 4;
constexpr double kMuCutoff = 1e-12;

int index_of(LinkType q) { return q == LinkType::kLoS ? 0 : 1; }

double horizontal_offset(double l0, double r, double beta) {
  return std::sqrt(std::max(0.0, l0 * l0 + r * r - 2.0 * l0 * r * std::cos(beta)));
}

std::vector<double> sorted_breaks(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double p : pts) {
    if (out.empty() || p > out.back() * (1.0 + 1e-9)) out.push_back(p);
  }
  return out;
}

}  // namespace

Evaluator::Evaluator(const SystemParams& params, const QuadratureSpec& quad)
    : params_(params), quad_(quad), kernel_(params.power_split()) {
  params_.validate();
  quad_.validate(params_.d);
}

const Diagnostics& Evaluator::diagnostics() const {
  diag_.kernel_fallbacks = kernel_.fallbacks();
  return diag_;
}

double Evaluator::theta(double r, double beta, double s, LinkType q, double l00) const {
  const double l = horizontal_offset(l00, r, beta);
  return kernel_.value(s * channel::path_loss(l, q, params_.channel));
}

template <class F>
std::vector<double> Evaluator::integrate_plane(F&& f, std::size_t dim, double feature) {
  const double d = params_.d;
  const double r_split = quad_.radial_split(d, params_.lambda_p);
  std::vector<double> pts{d, 2.0 * d, r_split};
  if (feature > d && feature < r_split) pts.push_back(feature);
  std::vector<double> r_breaks = sorted_breaks(std::move(pts));
  r_breaks.push_back(INFINITY);

  quadrature::Tolerance inner_tol{quad_.rel_tol * 0.1, 0.0, quad_.max_subdivisions};
  quadrature::Tolerance outer_tol{quad_.rel_tol * 0.3, 0.0, quad_.max_subdivisions};
  const double H = params_.channel.H;
  const point_process::HardCoreParams hc = params_.hard_core();

  auto radial = [&](double r, std::span<double> out) {
    const double pr = point_process::retention_probability(r, hc);
    if (pr <= 0.0) {
      std::fill(out.begin(), out.end(), 0.0);
      return;
    }
    std::vector<double> beta_breaks{0.0};
    const double peak = 4.0 * H / r;
    if (peak < 0.5 * kPi) beta_breaks.push_back(peak);
    beta_breaks.push_back(kPi);
    auto angular = [&](double beta, std::span<double> o) {
      ++diag_.integrand_calls;
      f(r, beta, o);
    };
    const quadrature::Result res = quadrature::integrate(angular, dim, beta_breaks, inner_tol);
    if (!res.converged) ++diag_.unconverged;
    for (std::size_t j = 0; j < dim; ++j) out[j] = 2.0 * r * pr * res.value[j];
  };
  const quadrature::Result res = quadrature::integrate(radial, dim, r_breaks, outer_tol);
  if (!res.converged) ++diag_.unconverged;
  return res.value;
}

LaplaceProfile Evaluator::profile(double s, double l00, int order, double scale) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw ParameterError("Laplace variable s must be finite and >= 0");
  if (order < 0) throw ParameterError("derivative order must be >= 0");
  const std::size_t per = static_cast<std::size_t>(order) + 1;
  LaplaceProfile prof;
  prof.s = s;
  prof.scale = scale;

  std::vector<double> raw(2 * per, 0.0);
  const bool trivial = s == 0.0 && (order == 0 || scale == 0.0);
  if (!trivial) {
    const auto& ch = params_.channel;
    auto f = [&](double r, double beta, std::span<double> out) {
      const double l = horizontal_offset(l00, r, beta);
      for (LinkType q : channel::kLinkTypes) {
        const int qi = index_of(q);
        const double pq = channel::link_probability(l, q, ch);
        const double L = channel::path_loss(l, q, ch);
        std::span<double> slot = out.subspan(qi * per, per);
        kernel_.complement_and_derivatives(s * L, scale * L, slot);
        for (double& v : slot) v *= pq;
      }
    };
    raw = integrate_plane(f, 2 * per, l00);
  }

  const double lp = params_.lambda_p;
  for (int qi = 0; qi < 2; ++qi) {
    auto& om = prof.omega[qi];
    auto& lt = prof.laplace[qi];
    om.assign(per, 0.0);
    lt.assign(per, 0.0);
    om[0] = -lp * raw[qi * per];
    for (std::size_t k = 1; k < per; ++k) om[k] = lp * raw[qi * per + k];
    lt[0] = std::exp(om[0]);
    for (std::size_t q = 1; q < per; ++q) {
      double acc = 0.0;
      for (std::size_t p = 0; p < q; ++p) {
        acc += binomial(static_cast<int>(q - 1), static_cast<int>(p)) * lt[p] * om[q - p];
      }
      lt[q] = acc;
    }
  }
  return prof;
}

namespace {
void require_order(int order, int lo) {
  if (order < lo) throw ParameterError("derivative order must be >= " + std::to_string(lo));
}
}  // namespace

double Evaluator::laplace_interference(double s, LinkType q, double l00) {
  if (s == 0.0) return 1.0;
  return laplace_derivative(0, s, q, l00);
}

double Evaluator::omega_derivative(int k, double s, LinkType q, double l00) {
  require_order(k, 1);
  const int order = std::max(k, kApiOrder);
  const auto key = std::make_tuple(s, l00, 1.0, order);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, profile(s, l00, order, 1.0)).first;
  return it->second.omega[index_of(q)][k];
}

double Evaluator::laplace_derivative(int order, double s, LinkType q, double l00) {
  require_order(order, 0);
  const int depth = std::max(order, kApiOrder);
  const auto key = std::make_tuple(s, l00, 1.0, depth);
  auto it = cache_.find(key);
  if (it == cache_.end()) it = cache_.emplace(key, profile(s, l00, depth, 1.0)).first;
  return it->second.laplace[index_of(q)][order];
}

double Evaluator::conditional_coverage(double l, LinkType q) {
  const double bt = params_.beta_t();
  if (bt == 0.0) return 1.0;
  const int K = params_.M - params_.N;
  const double s = bt / (params_.P_s() * channel::path_loss(l, q, params_.channel));
  const double sx = s * params_.sigma_x2;
  // Every term is bounded by e^-sx (1+sx)^K K^K; skip when that underflows.
  if (-sx + K * std::log1p(sx) + K * std::log(std::max(K, 1)) < -745.0) return 0.0;

  const LaplaceProfile prof = profile(s, l, K, s);
  const auto& lL = prof.laplace[0];
  const auto& lN = prof.laplace[1];

  CompensatedSum sum;
  double inv_fact = 1.0;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) inv_fact /= k;
    for (int m = 0; m <= k; ++m) {
      double mixed = 0.0;
      for (int n = 0; n <= m; ++n) mixed += binomial(m, n) * lL[n] * lN[m - n];
      const double sign = (m % 2) ? -1.0 : 1.0;
      sum.add(inv_fact * binomial(k, m) * std::pow(sx, k - m) * sign * mixed);
    }
  }
  const double value = std::exp(-sx) * sum.value();
  if (sum.condition() > kSeriesConditionLimit) ++diag_.ill_conditioned;
  if (value < -1e-9) {
    throw NumericError("conditional coverage lost precision to cancellation (value " + std::to_string(value) +
                       " at l=" + std::to_string(l) + ")");
  }
  diag_.min_conditional_coverage = std::min(diag_.min_conditional_coverage, value);
  return std::clamp(value, 0.0, 1.0);
}

double Evaluator::coverage_probability() {
  if (params_.beta_t() == 0.0) return 1.0;
  const double sigma = params_.sigma;
  const double l_max = quad_.l_max_factor * sigma;
  std::vector<double> pts{0.0, l_max};
  for (double f : {1.0, 2.0, 3.0, 5.0}) {
    if (f * sigma < l_max) pts.push_back(f * sigma);
  }
  const std::vector<double> breaks = sorted_breaks(std::move(pts));
  const auto& ch = params_.channel;
  auto g = [&](double l) {
    const double pl = channel::los_probability(l, ch);
    const double cover = conditional_coverage(l, LinkType::kLoS) * pl +
                         conditional_coverage(l, LinkType::kNLoS) * (1.0 - pl);
    return cover * channel::typical_user_distance_pdf(l, sigma);
  };
  const quadrature::Tolerance tol{quad_.rel_tol, quad_.abs_tol, quad_.max_subdivisions};
  const double cp = quadrature::integrate(g, breaks, tol, nullptr, true);
  return std::clamp(cp, 0.0, 1.0);
}

void Evaluator::psi(double l0e, std::span<double, 2> out) {
  const auto& ch = params_.channel;
  const int K = params_.M - params_.N;
  const double base = params_.beta_e() * params_.P_n() / params_.P_s();
  const std::array<double, 2> c{base / channel::path_loss(l0e, LinkType::kLoS, ch),
                                base / channel::path_loss(l0e, LinkType::kNLoS, ch)};
  auto f = [&](double r, double beta, std::span<double> o) {
    const double l = horizontal_offset(l0e, r, beta);
    const double pl = channel::los_probability(l, ch);
    const double gl = channel::path_loss(l, LinkType::kLoS, ch);
    const double gn = channel::path_loss(l, LinkType::kNLoS, ch);
    for (int qi = 0; qi < 2; ++qi) {
      o[qi] = pl * -std::expm1(-K * std::log1p(c[qi] * gl)) + (1.0 - pl) * -std::expm1(-K * std::log1p(c[qi] * gn));
    }
  };
  const std::vector<double> I = integrate_plane(f, 2, l0e);
  out[0] = std::exp(-params_.lambda_p * I[0]);
  out[1] = std::exp(-params_.lambda_p * I[1]);
}

double Evaluator::secrecy_probability() {
  if (params_.lambda_e == 0.0) return 1.0;
  const double be = params_.beta_e();
  if (be == 0.0) return 0.0;
  const int K = params_.M - params_.N;
  const auto& ch = params_.channel;
  const double Ps = params_.P_s();
  const double own_an = std::pow(1.0 + be * params_.P_n() / Ps, -K);

  auto mu = [&](double l, LinkType q) {
    const double expo = be * params_.sigma_e2 / (Ps * channel::path_loss(l, q, ch));
    return std::exp(-expo) * channel::link_probability(l, q, ch);
  };
  auto h = [&](double l) {
    const double mL = mu(l, LinkType::kLoS);
    const double mN = mu(l, LinkType::kNLoS);
    if (mL < 1e-300 && mN < 1e-300) return 0.0;
    std::array<double, 2> ps{};
    psi(l, ps);
    return (mL * ps[0] + mN * ps[1]) * l;
  };

  const quadrature::Tolerance tol{quad_.rel_tol, quad_.abs_tol, quad_.max_subdivisions};
  double total = 0.0;
  double a = 0.0;
  double b = std::max(ch.H, 2.0 * params_.d);
  for (int seg = 0; seg < 64; ++seg) {
    const double part = quadrature::integrate(h, a, b, tol, nullptr, true);
    total += part;
    const bool negligible = part <= 1e-3 * quad_.rel_tol * total;
    const bool past_cutoff = mu(b, LinkType::kLoS) < kMuCutoff && mu(b, LinkType::kNLoS) < kMuCutoff;
    if ((negligible && seg >= 2) || past_cutoff) break;
    a = b;
    b *= 2.0;
  }
  const double sp = std::exp(-2.0 * kPi * params_.lambda_e * own_an * total);
  return std::clamp(sp, 0.0, 1.0);
}

double theta(double r, double beta, double s, LinkType q, const SystemParams& params, double l00) {
  return Evaluator(params, QuadratureSpec{}).theta(r, beta, s, q, l00);
}

double laplace_interference(double s, LinkType q, double l00, const SystemParams& params,
                            const QuadratureSpec& quad) {
  return Evaluator(params, quad).laplace_interference(s, q, l00);
}

double omega_derivative(int k, double s, LinkType q, double l00, const SystemParams& params,
                        const QuadratureSpec& quad) {
  return Evaluator(params, quad).omega_derivative(k, s, q, l00);
}

double laplace_derivative(int order, double s, LinkType q, double l00, const SystemParams& params,
                          const QuadratureSpec& quad) {
  return Evaluator(params, quad).laplace_derivative(order, s, q, l00);
}

double coverage_probability(const SystemParams& params, const QuadratureSpec& quad) {
  return Evaluator(params, quad).coverage_probability();
}

double secrecy_probability(const SystemParams& params, const QuadratureSpec& quad) {
  return Evaluator(params, quad).secrecy_probability();
}

double secrecy_throughput(const SystemParams& params, double cp, double sp) {
  const double kb = params.k_bar();
  return params.lambda_p * params.N * cp * sp * params.R_s() * (-std::expm1(-kb) / kb);
}

double secrecy_throughput(const SystemParams& params, const QuadratureSpec& quad) {
  Evaluator ev(params, quad);
  return secrecy_throughput(params, ev.coverage_probability(), ev.secrecy_probability());
}

Metrics evaluate_all(const SystemParams& params, const QuadratureSpec& quad) {
  Evaluator ev(params, quad);
  Metrics m;
  m.cp = ev.coverage_probability();
  m.sp = ev.secrecy_probability();
  m.st = secrecy_throughput(params, m.cp, m.sp);
  m.diagnostics = ev.diagnostics();
  return m;
}

}  // namespace secnet::analytic
