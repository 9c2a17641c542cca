#include "secnet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "secnet/errors.hpp"

namespace secnet::config {

namespace {

namespace pt = boost::property_tree;

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || !std::isfinite(out)) {
    throw ConfigError("config key '" + key + "': expected a finite number, got '" + v + "'");
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError("config key '" + key + "': expected an unsigned integer, got '" + v + "'");
  }
  return out;
}

// Raw values collected from file and environment before interpretation.
struct Staging {
  std::optional<double> lambda_u;
  std::optional<double> lambda_p;
  std::optional<double> sigma_x2_dbm;
  std::optional<double> sigma_e2_dbm;
  std::optional<double> eta_L_db;
  std::optional<double> eta_N_db;
  std::optional<double> xi_db;
};

using Setter = std::function<void(RunConfig&, Staging&, const std::string&)>;

struct KeySpec {
  const char* section;
  const char* name;
  Setter set;
};

int as_int(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < -1000000 || x > 1000000) throw ConfigError("config key '" + key + "' out of range");
  return static_cast<int>(x);
}

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"system", "M", [](RunConfig& c, Staging&, const std::string& v) { c.params.M = as_int("M", v); }},
      {"system", "N", [](RunConfig& c, Staging&, const std::string& v) { c.params.N = as_int("N", v); }},
      {"system", "P", [](RunConfig& c, Staging&, const std::string& v) { c.params.P = parse_double("P", v); }},
      {"system", "phi", [](RunConfig& c, Staging&, const std::string& v) { c.params.phi = parse_double("phi", v); }},
      {"system", "H", [](RunConfig& c, Staging&, const std::string& v) { c.params.channel.H = parse_double("H", v); }},
      {"system", "d", [](RunConfig& c, Staging&, const std::string& v) { c.params.d = parse_double("d", v); }},
      {"system", "lambda_u", [](RunConfig&, Staging& s, const std::string& v) { s.lambda_u = parse_double("lambda_u", v); }},
      {"system", "lambda_p", [](RunConfig&, Staging& s, const std::string& v) { s.lambda_p = parse_double("lambda_p", v); }},
      {"system", "lambda_e", [](RunConfig& c, Staging&, const std::string& v) { c.params.lambda_e = parse_double("lambda_e", v); }},
      {"system", "sigma", [](RunConfig& c, Staging&, const std::string& v) { c.params.sigma = parse_double("sigma", v); }},
      {"system", "R_t", [](RunConfig& c, Staging&, const std::string& v) { c.params.R_t = parse_double("R_t", v); }},
      {"system", "R_e", [](RunConfig& c, Staging&, const std::string& v) { c.params.R_e = parse_double("R_e", v); }},
      {"system", "sigma_x2_dbm", [](RunConfig&, Staging& s, const std::string& v) { s.sigma_x2_dbm = parse_double("sigma_x2_dbm", v); }},
      {"system", "sigma_e2_dbm", [](RunConfig&, Staging& s, const std::string& v) { s.sigma_e2_dbm = parse_double("sigma_e2_dbm", v); }},
      {"channel", "a", [](RunConfig& c, Staging&, const std::string& v) { c.params.channel.a = parse_double("a", v); }},
      {"channel", "b", [](RunConfig& c, Staging&, const std::string& v) { c.params.channel.b = parse_double("b", v); }},
      {"channel", "alpha_L", [](RunConfig& c, Staging&, const std::string& v) { c.params.channel.alpha_L = parse_double("alpha_L", v); }},
      {"channel", "alpha_N", [](RunConfig& c, Staging&, const std::string& v) { c.params.channel.alpha_N = parse_double("alpha_N", v); }},
      {"channel", "eta_L_db", [](RunConfig&, Staging& s, const std::string& v) { s.eta_L_db = parse_double("eta_L_db", v); }},
      {"channel", "eta_N_db", [](RunConfig&, Staging& s, const std::string& v) { s.eta_N_db = parse_double("eta_N_db", v); }},
      {"channel", "xi_db", [](RunConfig&, Staging& s, const std::string& v) { s.xi_db = parse_double("xi_db", v); }},
      {"sim", "trials", [](RunConfig& c, Staging&, const std::string& v) { c.sim.trials = parse_u64("trials", v); }},
      {"sim", "window_radius", [](RunConfig& c, Staging&, const std::string& v) { c.sim.window_radius = parse_double("window_radius", v); }},
      {"sim", "seed", [](RunConfig& c, Staging&, const std::string& v) { c.sim.master_seed = parse_u64("seed", v); }},
      {"sim", "confidence_level", [](RunConfig& c, Staging&, const std::string& v) { c.sim.confidence_level = parse_double("confidence_level", v); }},
      {"sim", "threads", [](RunConfig& c, Staging&, const std::string& v) { c.sim.threads = as_int("threads", v); }},
      {"sim", "far_field", [](RunConfig& c, Staging&, const std::string& v) {
         const long long x = parse_int("far_field", v);
         if (x != 0 && x != 1) throw ConfigError("far_field must be 0 or 1");
         c.sim.far_field = x == 1;
       }},
      {"quad", "rel_tol", [](RunConfig& c, Staging&, const std::string& v) { c.quad.rel_tol = parse_double("rel_tol", v); }},
      {"quad", "abs_tol", [](RunConfig& c, Staging&, const std::string& v) { c.quad.abs_tol = parse_double("abs_tol", v); }},
      {"quad", "r_max", [](RunConfig& c, Staging&, const std::string& v) { c.quad.r_max = parse_double("r_max", v); }},
      {"quad", "l_max_factor", [](RunConfig& c, Staging&, const std::string& v) { c.quad.l_max_factor = parse_double("l_max_factor", v); }},
      {"quad", "max_subdivisions", [](RunConfig& c, Staging&, const std::string& v) {
         const long long x = parse_int("max_subdivisions", v);
         if (x < 1) throw ConfigError("config key 'max_subdivisions' must be >= 1");
         c.quad.max_subdivisions = static_cast<std::size_t>(x);
       }},
  };
  return table;
}

const KeySpec* find_key(const std::string& section, const std::string& name) {
  for (const KeySpec& k : key_table()) {
    if (section == k.section && name == k.name) return &k;
  }
  return nullptr;
}

void finalize(RunConfig& c, const Staging& s) {
  auto& p = c.params;
  auto& ch = p.channel;
  if (s.eta_L_db) ch.eta_L = channel::db_to_linear(*s.eta_L_db);
  if (s.eta_N_db) ch.eta_N = channel::db_to_linear(*s.eta_N_db);
  if (s.xi_db) ch.xi = channel::db_to_linear(*s.xi_db);
  if (s.sigma_x2_dbm) p.sigma_x2 = channel::dbm_to_watts(*s.sigma_x2_dbm);
  if (s.sigma_e2_dbm) p.sigma_e2 = channel::dbm_to_watts(*s.sigma_e2_dbm);

  if (p.N >= p.M) {
    throw AntennaError("antenna error: users per UAV N=" + std::to_string(p.N) + " must be below M=" +
                       std::to_string(p.M));
  }
  if (!(p.R_e < p.R_t)) {
    throw RateError("rate error: redundancy rate R_e must be below transmission rate R_t");
  }
  if (s.lambda_u && s.lambda_p) throw ConfigError("config: give either lambda_u or lambda_p, not both");
  if (!(p.d > 0.0)) throw ConfigError("config key 'd' must be positive");
  if (s.lambda_p) {
    p.lambda_p = *s.lambda_p;
    if (!(p.lambda_p > 0.0)) throw ConfigError("config key 'lambda_p' must be positive");
    c.lambda_u = p.lambda_u();
  } else {
    c.lambda_u = s.lambda_u.value_or(c.lambda_u);
    if (!(c.lambda_u > 0.0)) throw ConfigError("config key 'lambda_u' must be positive");
    p.set_target_intensity(c.lambda_u);
  }
  try {
    p.validate();
    c.sim.validate(p.d);
    c.quad.validate(p.d);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config validation failed: ") + e.what());
  }
}

void apply_environment(RunConfig& c, Staging& s) {
  for (const KeySpec& k : key_table()) {
    const std::string var = "SECNET_" + upper(k.name);
    if (const char* v = std::getenv(var.c_str())) k.set(c, s, v);
  }
}

}  // namespace

RunConfig parse_config(std::string_view text, bool use_environment) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  RunConfig c;
  Staging s;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("config: key '" + section + "' must appear inside a section");
    }
    for (const auto& [name, node] : body) {
      const KeySpec* k = find_key(section, name);
      if (!k) throw ConfigError("config: unknown key '" + name + "' in section [" + section + "]");
      k->set(c, s, node.data());
    }
  }
  if (use_environment) apply_environment(c, s);
  finalize(c, s);
  return c;
}

RunConfig load_config(const std::string& path, bool use_environment) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), use_environment);
}

RunConfig default_config(bool use_environment) { return parse_config("", use_environment); }

std::string describe(const RunConfig& c) {
  const auto& p = c.params;
  std::ostringstream o;
  o << std::setprecision(10);
  o << "M = " << p.M << "\nN = " << p.N << "\nP = " << p.P << " W\nphi = " << p.phi << "\nH = " << p.channel.H
    << " m\nd = " << p.d << " m\nlambda_u = " << p.lambda_u() << " /m^2\nlambda_p = " << p.lambda_p
    << " /m^2\nk_bar = " << p.k_bar() << "\nlambda_e = " << p.lambda_e << " /m^2\nsigma = " << p.sigma
    << " m\nR_t = " << p.R_t << "\nR_e = " << p.R_e << "\nR_s = " << p.R_s() << "\nbeta_t = " << p.beta_t()
    << "\nbeta_e = " << p.beta_e() << "\nP_s = " << p.P_s() << " W\nP_n = " << p.P_n()
    << " W\nsigma_x2 = " << p.sigma_x2 << " W\nsigma_e2 = " << p.sigma_e2 << " W\na = " << p.channel.a
    << "\nb = " << p.channel.b << "\nalpha_L = " << p.channel.alpha_L << "\nalpha_N = " << p.channel.alpha_N
    << "\neta_L = " << p.channel.eta_L << "\neta_N = " << p.channel.eta_N << "\nxi = " << p.channel.xi
    << "\ntrials = " << c.sim.trials << "\nseed = " << c.sim.master_seed
    << "\nwindow_radius = " << c.sim.effective_window(p.d, p.lambda_p) << " m\nfar_field = " << (c.sim.far_field ? 1 : 0) << "\nconfidence_level = "
    << c.sim.confidence_level << "\nrel_tol = " << c.quad.rel_tol << "\nabs_tol = " << c.quad.abs_tol
    << "\nr_split = " << c.quad.radial_split(p.d, p.lambda_p) << " m\n";
  return o.str();
}

}  // namespace secnet::config
