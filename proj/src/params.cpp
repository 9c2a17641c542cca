#include "secnet/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "secnet/errors.hpp"

namespace secnet {

namespace {
void require(bool ok, const std::string& msg) {
  if (!ok) throw ParameterError(msg);
}
bool positive(double v) { return std::isfinite(v) && v > 0.0; }
}  // namespace

void SystemParams::validate() const {
  require(M >= 2, "antenna count M must be at least 2, got " + std::to_string(M));
  require(N >= 1 && N <= M - 1, "users per UAV must satisfy 1 <= N <= M-1, got M=" + std::to_string(M) +
                                    " N=" + std::to_string(N));
  require(positive(P), "transmit power P must be positive");
  require(phi > 0.0 && phi < 1.0, "power ratio phi must lie in (0,1), got " + std::to_string(phi));
  require(positive(d), "hard-core distance d must be positive");
  require(positive(lambda_p), "parent intensity lambda_p must be positive");
  require(std::isfinite(lambda_e) && lambda_e >= 0.0, "eavesdropper intensity lambda_e must be >= 0");
  require(positive(sigma), "user scatter sigma must be positive");
  require(std::isfinite(sigma_x2) && sigma_x2 >= 0.0, "user noise power must be >= 0");
  require(std::isfinite(sigma_e2) && sigma_e2 >= 0.0, "eavesdropper noise power must be >= 0");
  require(std::isfinite(R_t) && std::isfinite(R_e) && R_e >= 0.0 && R_e <= R_t,
          "rates must satisfy 0 <= R_e <= R_t");
  channel.validate();
}

double SystemParams::beta_t() const { return std::exp2(R_t) - 1.0; }
double SystemParams::beta_e() const { return std::exp2(R_e) - 1.0; }

void SystemParams::set_target_intensity(double lambda_u) {
  lambda_p = point_process::parent_intensity_from_target(lambda_u, d).lambda_p();
}

SystemParams default_system_params() {
  SystemParams p;
  p.set_target_intensity(8e-6);
  return p;
}

void QuadratureSpec::validate(double d) const {
  require(positive(rel_tol), "quadrature rel_tol must be positive");
  require(positive(abs_tol), "quadrature abs_tol must be positive");
  require(r_max <= 0.0 || r_max >= 2.0 * d, "quadrature r_max must be >= 2d");
  require(positive(l_max_factor), "l_max_factor must be positive");
  require(max_subdivisions >= 1, "max_subdivisions must be positive");
}

double QuadratureSpec::radial_split(double d, double lambda_p) const {
  if (r_max > 0.0) return r_max;
  return std::max(2.0 * d, 20.0 / std::sqrt(std::numbers::pi * lambda_p));
}

void SimConfig::validate(double d) const {
  require(trials >= 1, "trial count must be at least 1");
  require(window_radius <= 0.0 || window_radius >= 2.0 * d, "window radius must be >= 2d");
  require(confidence_level > 0.0 && confidence_level < 1.0, "confidence level must lie in (0,1)");
  require(threads >= 0, "thread count must be >= 0");
}

double SimConfig::effective_window(double d, double lambda_p) const {
  if (window_radius > 0.0) return window_radius;
  return std::max({20.0 * d, 10.0 / std::sqrt(std::numbers::pi * lambda_p), 3000.0});
}

}  // namespace secnet
