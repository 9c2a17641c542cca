#include "secnet/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "secnet/errors.hpp"

namespace secnet::quadrature {

namespace {

// QUADPACK qk21 nodes (descending) and weights; the Gauss-10 nodes are the
// odd-indexed Kronrod nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525563586, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  bool mapped;  // coordinates are u in (0,1], x = origin / u^2
  std::vector<double> value;
  std::vector<double> error;
};

class PanelRule {
 public:
  PanelRule(const VectorIntegrand& f, std::size_t dim) : f_(f), dim_(dim), buf_(dim), kron_(dim), gauss_(dim) {}

  void eval(Panel& p, double tail_origin) {
    p.value.assign(dim_, 0.0);
    p.error.assign(dim_, 0.0);
    const double half = 0.5 * (p.b - p.a);
    const double mid = 0.5 * (p.a + p.b);
    std::fill(kron_.begin(), kron_.end(), 0.0);
    std::fill(gauss_.begin(), gauss_.end(), 0.0);
    for (std::size_t i = 0; i < kXgk.size(); ++i) {
      const int sides = (i + 1 == kXgk.size()) ? 1 : 2;
      for (int s = 0; s < sides; ++s) {
        const double node = mid + (s == 0 ? half : -half) * kXgk[i];
        sample(node, p.mapped, tail_origin);
        for (std::size_t j = 0; j < dim_; ++j) {
          kron_[j] += kWgk[i] * buf_[j];
          if (i % 2 == 1) gauss_[j] += kWg[i / 2] * buf_[j];
        }
      }
    }
    for (std::size_t j = 0; j < dim_; ++j) {
      p.value[j] = half * kron_[j];
      const double diff = std::abs(half * (kron_[j] - gauss_[j]));
      p.error[j] = std::max(diff, 50.0 * std::numeric_limits<double>::epsilon() * std::abs(p.value[j]));
    }
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  void sample(double node, bool mapped, double tail_origin) {
    ++evaluations_;
    if (!mapped) {
      f_(node, buf_);
      return;
    }
    const double x = tail_origin / (node * node);
    const double jac = 2.0 * tail_origin / (node * node * node);
    f_(x, buf_);
    for (auto& v : buf_) v *= jac;
  }

  const VectorIntegrand& f_;
  std::size_t dim_;
  std::vector<double> buf_;
  std::vector<double> kron_;
  std::vector<double> gauss_;
  std::size_t evaluations_ = 0;
};

}  // namespace

void gauss_kronrod21(const VectorIntegrand& f, std::size_t dim, double a, double b, std::span<double> value,
                     std::span<double> error) {
  PanelRule rule(f, dim);
  Panel p{a, b, false, {}, {}};
  rule.eval(p, 0.0);
  std::copy(p.value.begin(), p.value.end(), value.begin());
  std::copy(p.error.begin(), p.error.end(), error.begin());
}

Result integrate(const VectorIntegrand& f, std::size_t dim, std::span<const double> breakpoints,
                 const Tolerance& tol) {
  if (breakpoints.size() < 2) throw ParameterError("integrate needs at least two breakpoints");
  if (dim == 0) throw ParameterError("integrand dimension must be positive");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1])) throw ParameterError("breakpoints must be strictly increasing");
  }
  if (!std::isfinite(breakpoints.front())) throw ParameterError("lower limit must be finite");

  PanelRule rule(f, dim);
  std::vector<Panel> panels;
  double tail_origin = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (std::isinf(b)) {
      if (i + 2 != breakpoints.size()) throw ParameterError("+inf may only be the last breakpoint");
      if (!(a > 0.0)) throw ParameterError("an infinite segment needs a positive lower limit");
      tail_origin = a;
      panels.push_back({0.0, 1.0, true, {}, {}});
    } else {
      panels.push_back({a, b, false, {}, {}});
    }
    rule.eval(panels.back(), tail_origin);
  }

  Result res;
  res.value.assign(dim, 0.0);
  res.error.assign(dim, 0.0);
  std::vector<double> scale(dim);
  while (true) {
    std::fill(res.value.begin(), res.value.end(), 0.0);
    std::fill(res.error.begin(), res.error.end(), 0.0);
    for (const auto& p : panels) {
      for (std::size_t j = 0; j < dim; ++j) {
        res.value[j] += p.value[j];
        res.error[j] += p.error[j];
      }
    }
    bool done = true;
    for (std::size_t j = 0; j < dim; ++j) {
      scale[j] = std::max(tol.abs, tol.rel * std::abs(res.value[j]));
      if (!(res.error[j] <= scale[j])) done = false;
    }
    if (done) {
      res.converged = true;
      break;
    }
    if (panels.size() >= tol.max_subdivisions) break;

    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t k = 0; k < panels.size(); ++k) {
      double score = 0.0;
      for (std::size_t j = 0; j < dim; ++j) score = std::max(score, panels[k].error[j] / scale[j]);
      if (!std::isfinite(score)) score = std::numeric_limits<double>::max();
      if (score > worst_score) {
        worst_score = score;
        worst = k;
      }
    }
    Panel left = panels[worst];
    Panel right = panels[worst];
    const double mid = 0.5 * (left.a + left.b);
    if (!(mid > left.a && mid < left.b)) break;  // cannot split further
    left.b = mid;
    right.a = mid;
    rule.eval(left, tail_origin);
    rule.eval(right, tail_origin);
    panels[worst] = std::move(left);
    panels.push_back(std::move(right));
  }
  res.evaluations = rule.evaluations();
  res.panels = panels.size();
  return res;
}

double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints, const Tolerance& tol,
                 double* error, bool require_convergence) {
  const VectorIntegrand vf = [&f](double x, std::span<double> out) { out[0] = f(x); };
  const Result r = integrate(vf, 1, breakpoints, tol);
  if (error) *error = r.error[0];
  if (require_convergence && !r.converged) {
    throw NumericError("quadrature did not converge: estimate " + std::to_string(r.value[0]) + ", error " +
                       std::to_string(r.error[0]) + " after " + std::to_string(r.panels) + " panels");
  }
  return r.value[0];
}

double integrate(const std::function<double(double)>& f, double a, double b, const Tolerance& tol, double* error,
                 bool require_convergence) {
  const double bp[2] = {a, b};
  return integrate(f, bp, tol, error, require_convergence);
}

}  // namespace secnet::quadrature
