#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace secnet::quadrature {

struct Tolerance {
  double rel = 1e-6;
  double abs = 1e-14;
  std::size_t max_subdivisions = 2000;
};

struct Result {
  std::vector<double> value;
  std::vector<double> error;
  std::size_t evaluations = 0;
  std::size_t panels = 0;
  bool converged = false;
};

/// f(x, out) writes `dim` components at x.
using VectorIntegrand = std::function<void(double, std::span<double>)>;

/// Globally adaptive 21-point Gauss-Kronrod integration of a vector-valued
/// function over the segments defined by consecutive breakpoints. If the last
/// breakpoint is +inf, the final segment [a, inf) is mapped through
/// x = a / u^2 (needs a > 0), which keeps power-law tails r^-p, p > 1, regular.
/// Each component j converges when err_j <= max(abs, rel * |I_j|).
Result integrate(const VectorIntegrand& f, std::size_t dim, std::span<const double> breakpoints,
                 const Tolerance& tol);

/// Scalar convenience overload; throws NumericError if `require_convergence`
/// and the tolerance is not met.
double integrate(const std::function<double(double)>& f, std::span<const double> breakpoints,
                 const Tolerance& tol, double* error = nullptr, bool require_convergence = false);

double integrate(const std::function<double(double)>& f, double a, double b, const Tolerance& tol,
                 double* error = nullptr, bool require_convergence = false);

/// Fixed-order single-panel rule, exposed for tests.
void gauss_kronrod21(const VectorIntegrand& f, std::size_t dim, double a, double b, std::span<double> value,
                     std::span<double> error);

}  // namespace secnet::quadrature
