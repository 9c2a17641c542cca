#pragma once

#include <functional>
#include <vector>

namespace secnet::testing {

/// Two-sided one-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Asymptotic p-value of the KS statistic d for n samples.
double ks_pvalue(double d, std::size_t n);

/// p-value of a one-sample KS test.
double ks_test(const std::vector<double>& samples, const std::function<double(double)>& cdf);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double pvalue = 0.0;
};

/// Pearson goodness of fit on `bins` equiprobable cells of `cdf`, located with
/// `quantile`.
ChiSquare chi_square_test(const std::vector<double>& samples, const std::function<double(double)>& cdf,
                          const std::function<double(double)>& quantile, int bins);

/// Pearson test on explicit cell edges with expected probabilities from `cdf`.
ChiSquare chi_square_edges(const std::vector<double>& samples, const std::vector<double>& edges,
                           const std::function<double(double)>& cdf, int fitted_parameters = 0);

double gamma_cdf(double x, double shape, double scale);
double gamma_quantile(double p, double shape, double scale);

}  // namespace secnet::testing
