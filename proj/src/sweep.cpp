#include "secnet/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "secnet/analytic.hpp"
#include "secnet/errors.hpp"
#include "secnet/simulator.hpp"

namespace secnet::sweep {

namespace {

const std::vector<std::string> kSweepable = {"phi", "H", "N", "M", "d", "lambda_e", "lambda_u", "R_t"};

bool is_sweepable(const std::string& name) {
  for (const auto& s : kSweepable) {
    if (s == name) return true;
  }
  return false;
}

int as_count(const std::string& name, double v) {
  if (v != std::round(v) || v < 1 || v > 64) throw ParameterError(name + " must be a positive integer");
  return static_cast<int>(v);
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  std::vector<double> g;
  const int n = static_cast<int>(std::round((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(std::round((lo + i * step) * 1e12) / 1e12);
  return g;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_field(const std::string& s) {
  if (s == "nan") return NAN;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw ParameterError("malformed CSV number '" + s + "'");
  return v;
}

std::string opt(bool present, double v) { return present ? format_double(v) : std::string(); }

}  // namespace

Backends parse_backends(const std::string& name) {
  if (name == "analytic") return {true, false};
  if (name == "sim") return {false, true};
  if (name == "both") return {true, true};
  throw ParameterError("backend must be analytic, sim or both, got '" + name + "'");
}

void apply_parameter(SystemParams& p, double& lambda_u, const std::string& name, double value) {
  if (name == "phi") {
    p.phi = value;
  } else if (name == "H") {
    p.channel.H = value;
  } else if (name == "N") {
    p.N = as_count("N", value);
  } else if (name == "M") {
    p.M = as_count("M", value);
  } else if (name == "d") {
    p.d = value;
  } else if (name == "lambda_e") {
    p.lambda_e = value;
  } else if (name == "lambda_u") {
    lambda_u = value;
  } else if (name == "R_t") {
    const double ratio = p.R_t > 0.0 ? p.R_e / p.R_t : 0.5;
    p.R_t = value;
    p.R_e = ratio * value;
  } else if (name == "R_e") {
    p.R_e = value;
  } else if (name == "sigma") {
    p.sigma = value;
  } else if (name == "P") {
    p.P = value;
  } else {
    throw ParameterError("unknown sweep parameter '" + name + "'");
  }
}

SystemParams point_params(const SweepSpec& spec, const Series& series, double value) {
  SystemParams p = spec.base;
  double lambda_u = spec.lambda_u;
  for (const auto& [k, v] : series.overrides) apply_parameter(p, lambda_u, k, v);
  apply_parameter(p, lambda_u, spec.swept, value);
  p.set_target_intensity(lambda_u);
  if (p.N >= p.M) throw AntennaError("antenna error: N must be below M");
  if (!(p.R_e < p.R_t)) throw RateError("rate error: R_e must be below R_t");
  p.validate();
  return p;
}

void SweepSpec::validate() const {
  if (!is_sweepable(swept)) throw ParameterError("cannot sweep '" + swept + "'");
  if (grid.empty()) throw ParameterError("sweep grid is empty");
  if (!backends.analytic && !backends.simulate) throw ParameterError("no backend selected");
  if (series.empty()) throw ParameterError("sweep needs at least one series");
  cfg.validate(base.d);
  for (const Series& s : series) {
    for (double v : grid) {
      const SystemParams p = point_params(*this, s, v);
      cfg.validate(p.d);
      quad.validate(p.d);
    }
  }
}

SweepResult run_sweep(const SweepSpec& spec, const RunOptions& options) {
  spec.validate();
  SweepResult result;
  std::vector<SystemParams> points;
  for (const Series& s : spec.series) {
    for (double v : spec.grid) {
      SweepRow row;
      row.swept_name = s.label.empty() ? spec.swept : spec.swept + "|" + s.label;
      row.swept_value = v;
      result.rows.push_back(row);
      points.push_back(point_params(spec, s, v));
    }
  }
  const auto n = static_cast<std::int64_t>(result.rows.size());
  using Clock = std::chrono::steady_clock;
  std::vector<double> analytic_ms(result.rows.size(), 0.0);

  if (spec.backends.analytic) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
      SweepRow& row = result.rows[i];
      const auto t0 = Clock::now();
      try {
        const analytic::Metrics m = analytic::evaluate_all(points[i], spec.quad);
        row.cp_analytic = m.cp;
        row.sp_analytic = m.sp;
        row.st_analytic = m.st;
      } catch (const std::exception& e) {
        row.cp_analytic = row.sp_analytic = row.st_analytic = NAN;
        row.error = std::string("analytic: ") + e.what();
      }
      row.has_analytic = true;
      analytic_ms[i] = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
  }
  for (std::int64_t i = 0; i < n; ++i) {
    SweepRow& row = result.rows[i];
    const auto t0 = Clock::now();
    if (spec.backends.simulate) {
      try {
        const simulator::SimulationSummary s = simulator::simulate(points[i], spec.cfg);
        row.cp_sim = s.cp;
        row.sp_sim = s.sp;
        row.st_sim_product = s.st_product;
        row.st_sim_joint = s.st_joint;
      } catch (const std::exception& e) {
        row.cp_sim.value = row.cp_sim.ci_low = row.cp_sim.ci_high = NAN;
        row.sp_sim.value = row.sp_sim.ci_low = row.sp_sim.ci_high = NAN;
        row.st_sim_product = row.st_sim_joint = NAN;
        if (!row.error.empty()) row.error += "; ";
        row.error += std::string("simulation: ") + e.what();
      }
      row.has_sim = true;
    }
    row.trials = spec.backends.simulate ? spec.cfg.trials : 0;
    row.seed = spec.cfg.master_seed;
    const double sim_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    row.wall_ms = options.timing ? std::round(analytic_ms[i] + sim_ms) : 0.0;
  }
  return result;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const SweepRow& r : result.rows) {
    out << r.swept_name << ',' << format_double(r.swept_value) << ',' << opt(r.has_analytic, r.cp_analytic) << ','
        << opt(r.has_analytic, r.sp_analytic) << ',' << opt(r.has_analytic, r.st_analytic) << ','
        << opt(r.has_sim, r.cp_sim.value) << ',' << opt(r.has_sim, r.cp_sim.ci_low) << ','
        << opt(r.has_sim, r.cp_sim.ci_high) << ',' << opt(r.has_sim, r.sp_sim.value) << ','
        << opt(r.has_sim, r.sp_sim.ci_low) << ',' << opt(r.has_sim, r.sp_sim.ci_high) << ','
        << opt(r.has_sim, r.st_sim_product) << ',' << opt(r.has_sim, r.st_sim_joint) << ',' << r.trials << ','
        << r.seed << ',' << format_double(r.wall_ms) << '\n';
  }
}

SweepResult read_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ParameterError("CSV header mismatch");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 16) throw ParameterError("CSV row has " + std::to_string(f.size()) + " fields, expected 16");
    SweepRow r;
    r.swept_name = f[0];
    r.swept_value = parse_field(f[1]);
    r.has_analytic = !f[2].empty();
    if (r.has_analytic) {
      r.cp_analytic = parse_field(f[2]);
      r.sp_analytic = parse_field(f[3]);
      r.st_analytic = parse_field(f[4]);
    }
    r.has_sim = !f[5].empty();
    if (r.has_sim) {
      r.cp_sim.value = parse_field(f[5]);
      r.cp_sim.ci_low = parse_field(f[6]);
      r.cp_sim.ci_high = parse_field(f[7]);
      r.sp_sim.value = parse_field(f[8]);
      r.sp_sim.ci_low = parse_field(f[9]);
      r.sp_sim.ci_high = parse_field(f[10]);
      r.st_sim_product = parse_field(f[11]);
      r.st_sim_joint = parse_field(f[12]);
    }
    r.trials = std::stoull(f[13]);
    r.seed = std::stoull(f[14]);
    r.wall_ms = parse_field(f[15]);
    result.rows.push_back(r);
  }
  return result;
}

GapSummary summarize(const SweepResult& result) {
  GapSummary g;
  for (const SweepRow& r : result.rows) {
    if (!r.has_analytic || !r.has_sim || !r.error.empty()) continue;
    g.cp = std::max(g.cp, std::abs(r.cp_analytic - r.cp_sim.value));
    g.sp = std::max(g.sp, std::abs(r.sp_analytic - r.sp_sim.value));
    g.st = std::max(g.st, std::abs(r.st_analytic - r.st_sim_product));
    ++g.rows;
  }
  return g;
}

SweepSpec preset(const std::string& name) {
  SweepSpec s;
  if (name == "fig2" || name == "fig3") {
    s.swept = "phi";
    s.grid = name == "fig2" ? linspace_step(0.1, 0.9, 0.1) : linspace_step(0.05, 0.95, 0.05);
    s.series = {Series{"H=100", {{"H", 100.0}}}, Series{"H=140", {{"H", 140.0}}}};
    s.lambda_u = 8e-6;
    s.base.d = 50.0;
    s.base.sigma = 20.0;
    s.base.M = 8;
    s.base.N = 4;
  } else if (name == "fig4" || name == "fig5") {
    s.swept = "N";
    s.grid = {1, 2, 3, 4, 5, 6, 7};
    s.series = {Series{"M=8,d=30", {{"M", 8.0}, {"d", 30.0}}}, Series{"M=8,d=50", {{"M", 8.0}, {"d", 50.0}}},
                Series{"M=10,d=50", {{"M", 10.0}, {"d", 50.0}}}};
    s.lambda_u = 4e-6;
    s.base.channel.H = 100.0;
    s.base.sigma = 10.0;
    s.base.phi = 0.5;
  } else {
    throw ParameterError("unknown preset '" + name + "' (expected fig2, fig3, fig4 or fig5)");
  }
  s.base.set_target_intensity(s.lambda_u);
  return s;
}

double CompareReport::cp_gap() const { return std::abs(cp_analytic - cp_sim.value); }
double CompareReport::sp_gap() const { return std::abs(sp_analytic - sp_sim.value); }
double CompareReport::st_gap() const {
  return st_analytic != 0.0 ? std::abs(st_analytic - st_sim_product) / st_analytic : std::abs(st_sim_product);
}
bool CompareReport::cp_pass() const { return cp_gap() <= tolerance; }
bool CompareReport::sp_pass() const { return sp_gap() <= tolerance; }

CompareReport compare(const SystemParams& params, const SimConfig& cfg, const QuadratureSpec& quad,
                      double tolerance) {
  if (!(tolerance >= 0.0)) throw ParameterError("tolerance must be >= 0");
  CompareReport r;
  r.tolerance = tolerance;
  const analytic::Metrics m = analytic::evaluate_all(params, quad);
  r.cp_analytic = m.cp;
  r.sp_analytic = m.sp;
  r.st_analytic = m.st;
  const simulator::SimulationSummary s = simulator::simulate(params, cfg);
  r.cp_sim = s.cp;
  r.sp_sim = s.sp;
  r.joint_sim = s.joint;
  r.st_sim_product = s.st_product;
  r.st_sim_joint = s.st_joint;
  return r;
}

std::string format_report(const CompareReport& r, const SystemParams& params, const SimConfig& cfg) {
  std::ostringstream o;
  char line[256];
  auto put = [&](const char* fmt, auto... args) {
    std::snprintf(line, sizeof line, fmt, args...);
    o << line;
  };
  put("point: M=%d N=%d phi=%.6g H=%.6g d=%.6g lambda_u=%.6g lambda_e=%.6g sigma=%.6g\n", params.M, params.N,
      params.phi, params.channel.H, params.d, params.lambda_u(), params.lambda_e, params.sigma);
  put("trials=%llu seed=%llu confidence=%.4g\n", static_cast<unsigned long long>(cfg.trials),
      static_cast<unsigned long long>(cfg.master_seed), cfg.confidence_level);
  o << "metric  analytic        simulated       ci_low          ci_high         gap\n";
  put("CP      %-15.10f %-15.10f %-15.10f %-15.10f %.3e %s\n", r.cp_analytic, r.cp_sim.value, r.cp_sim.ci_low,
      r.cp_sim.ci_high, r.cp_gap(), r.cp_pass() ? "PASS" : "FAIL");
  put("SP      %-15.10f %-15.10f %-15.10f %-15.10f %.3e %s\n", r.sp_analytic, r.sp_sim.value, r.sp_sim.ci_low,
      r.sp_sim.ci_high, r.sp_gap(), r.sp_pass() ? "PASS" : "FAIL");
  put("ST      %-15.6e %-15.6e (joint %.6e)  rel_gap %.3e\n", r.st_analytic, r.st_sim_product, r.st_sim_joint,
      r.st_gap());
  put("joint covered-and-secret frequency %.10f vs product %.10f\n", r.joint_sim.value,
      r.cp_sim.value * r.sp_sim.value);
  put("tolerance %.4g: %s\n", r.tolerance, r.passed() ? "PASS" : "FAIL");
  return o.str();
}

}  // namespace secnet::sweep
