#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "secnet/analytic.hpp"
#include "secnet/config.hpp"
#include "secnet/errors.hpp"
#include "secnet/simulator.hpp"
#include "secnet/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitOutsideTolerance = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string config_path;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
};

secnet::config::RunConfig load(const Common& c) {
  secnet::config::RunConfig cfg =
      c.config_path.empty() ? secnet::config::default_config() : secnet::config::load_config(c.config_path);
  if (c.trials) cfg.sim.trials = *c.trials;
  if (c.seed) cfg.sim.master_seed = *c.seed;
  if (c.threads) cfg.sim.threads = *c.threads;
  cfg.sim.validate(cfg.params.d);
  if (cfg.sim.threads > 0) omp_set_num_threads(cfg.sim.threads);
  return cfg;
}

void add_common(CLI::App* app, Common& c, bool sim_flags) {
  app->add_option("--config", c.config_path, "INI configuration file")->check(CLI::ExistingFile);
  if (sim_flags) {
    app->add_option("--trials", c.trials, "Monte Carlo trials");
    app->add_option("--seed", c.seed, "master seed");
  }
  app->add_option("--threads", c.threads, "worker threads (0 = all)")->check(CLI::NonNegativeNumber);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int cmd_analytic(const Common& c) {
  const auto cfg = load(c);
  const secnet::analytic::Metrics m = secnet::analytic::evaluate_all(cfg.params, cfg.quad);
  std::cout << "CP " << fmt("%.10f", m.cp) << "\nSP " << fmt("%.10f", m.sp) << "\nST " << fmt("%.10e", m.st)
            << "\n";
  return kExitOk;
}

int cmd_simulate(const Common& c) {
  const auto cfg = load(c);
  const secnet::simulator::SimulationSummary s = secnet::simulator::simulate(cfg.params, cfg.sim);
  auto line = [](const char* name, const secnet::MetricEstimate& e) {
    std::cout << name << ' ' << fmt("%.10f", e.value) << " [" << fmt("%.10f", e.ci_low) << ", "
              << fmt("%.10f", e.ci_high) << "]\n";
  };
  line("CP", s.cp);
  line("SP", s.sp);
  line("CP&SP", s.joint);
  std::cout << "ST_product " << fmt("%.10e", s.st_product) << "\nST_joint " << fmt("%.10e", s.st_joint)
            << "\ntrials " << s.cp.trials << "\nseed " << s.cp.seed << "\npalm_rejections " << s.palm_rejections
            << "\ndegenerate_resamples " << s.degenerate_resamples << "\nmax_zf_residual_ratio "
            << fmt("%.3e", s.max_zf_residual_ratio) << "\n";
  return kExitOk;
}

int cmd_compare(const Common& c, double tolerance) {
  const auto cfg = load(c);
  const auto r = secnet::sweep::compare(cfg.params, cfg.sim, cfg.quad, tolerance);
  std::cout << secnet::sweep::format_report(r, cfg.params, cfg.sim);
  return r.passed() ? kExitOk : kExitOutsideTolerance;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> g;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      g.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw secnet::ParameterError("malformed grid value '" + item + "'");
    }
  }
  return g;
}

struct SweepArgs {
  std::string preset;
  std::string param;
  std::string grid;
  std::string backend = "both";
  std::string out;
  bool timing = false;
};

int cmd_sweep(const Common& c, const SweepArgs& a) {
  secnet::sweep::SweepSpec spec;
  if (!a.preset.empty()) {
    spec = secnet::sweep::preset(a.preset);
    if (!c.config_path.empty()) {
      const auto cfg = secnet::config::load_config(c.config_path);
      spec.cfg = cfg.sim;
      spec.quad = cfg.quad;
    }
  } else {
    if (a.param.empty() || a.grid.empty()) throw secnet::ParameterError("sweep needs --preset or --param with --grid");
    const auto cfg = c.config_path.empty() ? secnet::config::default_config()
                                           : secnet::config::load_config(c.config_path);
    spec.base = cfg.params;
    spec.lambda_u = cfg.lambda_u;
    spec.cfg = cfg.sim;
    spec.quad = cfg.quad;
    spec.swept = a.param;
    spec.grid = parse_grid(a.grid);
  }
  if (c.trials) spec.cfg.trials = *c.trials;
  if (c.seed) spec.cfg.master_seed = *c.seed;
  if (c.threads) spec.cfg.threads = *c.threads;
  if (spec.cfg.threads > 0) omp_set_num_threads(spec.cfg.threads);
  spec.backends = secnet::sweep::parse_backends(a.backend);

  const auto result = secnet::sweep::run_sweep(spec, {a.timing});
  std::ostream* summary = &std::cout;
  if (a.out.empty()) {
    secnet::sweep::write_csv(result, std::cout);
    summary = &std::cerr;
  } else {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw secnet::ParameterError("cannot write '" + a.out + "'");
    secnet::sweep::write_csv(result, f);
  }
  for (const auto& row : result.rows) {
    if (!row.error.empty()) {
      std::cerr << "row " << row.swept_name << "=" << secnet::sweep::format_double(row.swept_value) << " failed: "
                << row.error << "\n";
    }
  }
  const auto gap = secnet::sweep::summarize(result);
  *summary << "rows " << result.rows.size();
  if (gap.rows > 0) {
    *summary << "; max |analytic - sim|: CP " << fmt("%.4g", gap.cp) << ", SP " << fmt("%.4g", gap.sp) << ", ST "
             << fmt("%.4g", gap.st);
  }
  *summary << "\n";
  return kExitOk;
}

int cmd_validate(const Common& c) {
  const auto cfg = load(c);
  std::cout << secnet::config::describe(cfg) << "valid\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secure UAV network analysis: closed-form evaluation and Monte Carlo simulation"};
  app.require_subcommand(1);

  Common common;
  double tolerance = 0.05;
  SweepArgs sweep_args;

  auto* analytic = app.add_subcommand("analytic", "closed-form CP, SP and ST");
  add_common(analytic, common, false);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo CP, SP and ST");
  add_common(simulate, common, true);
  auto* compare = app.add_subcommand("compare", "both backends at one point");
  add_common(compare, common, true);
  compare->add_option("--tolerance", tolerance, "absolute CP/SP tolerance")->check(CLI::NonNegativeNumber);
  auto* sweep = app.add_subcommand("sweep", "parameter sweep written as CSV");
  add_common(sweep, common, true);
  sweep->add_option("--preset", sweep_args.preset, "fig2, fig3, fig4 or fig5");
  sweep->add_option("--param", sweep_args.param, "swept parameter for a custom sweep");
  sweep->add_option("--grid", sweep_args.grid, "comma-separated grid for --param");
  sweep->add_option("--backend", sweep_args.backend, "analytic, sim or both");
  sweep->add_option("--out", sweep_args.out, "CSV output path (default stdout)");
  sweep->add_flag("--timing", sweep_args.timing, "record wall time per row");
  auto* validate = app.add_subcommand("validate-config", "check a configuration and print derived values");
  add_common(validate, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*analytic) return cmd_analytic(common);
    if (*simulate) return cmd_simulate(common);
    if (*compare) return cmd_compare(common, tolerance);
    if (*sweep) return cmd_sweep(common, sweep_args);
    if (*validate) return cmd_validate(common);
  } catch (const secnet::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
