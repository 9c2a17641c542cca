#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "secnet/estimate.hpp"
#include "secnet/params.hpp"

namespace secnet::sweep {

struct Backends {
  bool analytic = true;
  bool simulate = true;
};

/// Parses "analytic", "sim" or "both".
Backends parse_backends(const std::string& name);

/// A fixed set of overrides drawn as one curve, e.g. {"H": 140}.
struct Series {
  std::string label;  ///< empty for a single unlabelled curve
  std::map<std::string, double> overrides;
};

struct SweepSpec {
  std::string swept;  ///< phi, H, N, M, d, lambda_e, lambda_u or R_t
  std::vector<double> grid;
  std::vector<Series> series{Series{}};
  SystemParams base = default_system_params();
  double lambda_u = 8e-6;  ///< retained intensity held fixed while d varies
  SimConfig cfg;
  QuadratureSpec quad;
  Backends backends;

  /// Throws ParameterError for an unknown parameter, empty grid, no backend,
  /// or a grid point that does not give valid parameters.
  void validate() const;
};

/// Parameters for one grid point of one series.
SystemParams point_params(const SweepSpec& spec, const Series& series, double value);

/// Sets a named parameter; `lambda_u` is tracked separately because the
/// parent intensity has to be re-solved once d is known.
void apply_parameter(SystemParams& p, double& lambda_u, const std::string& name, double value);

struct SweepRow {
  std::string swept_name;
  double swept_value = 0.0;
  bool has_analytic = false;
  double cp_analytic = 0.0;
  double sp_analytic = 0.0;
  double st_analytic = 0.0;
  bool has_sim = false;
  MetricEstimate cp_sim;
  MetricEstimate sp_sim;
  double st_sim_product = 0.0;
  double st_sim_joint = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  std::string error;  ///< non-empty if a backend failed on this row
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

struct RunOptions {
  bool timing = false;  ///< record wall time; off keeps output byte-reproducible
};

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options = {});

/// Fixed column order; unselected backends leave their columns empty and
/// failed values are written as nan.
void write_csv(const SweepResult& result, std::ostream& out);
SweepResult read_csv(std::istream& in);

inline const char* kCsvHeader =
    "swept_name,swept_value,cp_analytic,sp_analytic,st_analytic,cp_sim,cp_ci_lo,cp_ci_hi,sp_sim,sp_ci_lo,"
    "sp_ci_hi,st_sim_product,st_sim_joint,trials,seed,wall_ms";

/// Largest |analytic - simulated| per metric over rows with both backends.
struct GapSummary {
  double cp = 0.0;
  double sp = 0.0;
  double st = 0.0;
  std::size_t rows = 0;
};
GapSummary summarize(const SweepResult& result);

/// Named presets reproducing the evaluation figures: fig2, fig3, fig4, fig5.
SweepSpec preset(const std::string& name);

/// Single-point comparison of both backends.
struct CompareReport {
  double cp_analytic = 0.0;
  double sp_analytic = 0.0;
  double st_analytic = 0.0;
  MetricEstimate cp_sim;
  MetricEstimate sp_sim;
  MetricEstimate joint_sim;
  double st_sim_product = 0.0;
  double st_sim_joint = 0.0;
  double tolerance = 0.05;

  double cp_gap() const;
  double sp_gap() const;
  double st_gap() const;  ///< relative
  bool cp_pass() const;
  bool sp_pass() const;
  bool passed() const { return cp_pass() && sp_pass(); }
};

CompareReport compare(const SystemParams& params, const SimConfig& cfg, const QuadratureSpec& quad,
                      double tolerance);
/// Plain-text report with fixed formatting and no timing.
std::string format_report(const CompareReport& r, const SystemParams& params, const SimConfig& cfg);

/// Shortest decimal text that parses back to the same double (17 significant digits).
std::string format_double(double x);

}  // namespace secnet::sweep
