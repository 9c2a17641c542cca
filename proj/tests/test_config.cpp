#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "secnet/config.hpp"
#include "secnet/errors.hpp"

using namespace secnet;
using namespace secnet::config;

namespace {

struct ScopedEnv {
  ScopedEnv(const char* name, const char* value) : name_(name) { ::setenv(name, value, 1); }
  ~ScopedEnv() { ::unsetenv(name_); }
  ScopedEnv(const ScopedEnv&) = delete;
  ScopedEnv& operator=(const ScopedEnv&) = delete;

 private:
  const char* name_;
};

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c = parse_config("", false);
  const SystemParams& p = c.params;
  CHECK(p.beta_t() == doctest::Approx(0.741101126592248).epsilon(1e-12));
  CHECK(p.beta_e() == doctest::Approx(0.319507910772894).epsilon(1e-12));
  CHECK(p.channel.xi == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(p.sigma_x2 == doctest::Approx(1e-13).epsilon(1e-12));
  CHECK(p.sigma_e2 == doctest::Approx(1e-13).epsilon(1e-12));
  CHECK(p.lambda_u() == doctest::Approx(8e-6).epsilon(1e-9));
  CHECK(p.M == 8);
  CHECK(p.N == 4);
}

TEST_CASE("file values and unit conversions") {
  const RunConfig c = parse_config(
      "; comment\n[system]\nM = 10\nN = 3\nphi = 0.3\nH = 140\nsigma_x2_dbm = -90\n"
      "[channel]\nxi_db = -30\neta_L_db = 0\n[sim]\ntrials = 77\nseed = 5\n[quad]\nrel_tol = 1e-5\n",
      false);
  CHECK(c.params.M == 10);
  CHECK(c.params.N == 3);
  CHECK(c.params.phi == 0.3);
  CHECK(c.params.channel.H == 140.0);
  CHECK(c.params.sigma_x2 == doctest::Approx(1e-12).epsilon(1e-12));
  CHECK(c.params.channel.xi == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(c.params.channel.eta_L == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.sim.trials == 77);
  CHECK(c.sim.master_seed == 5);
  CHECK(c.quad.rel_tol == 1e-5);
}

TEST_CASE("far-field switch") {
  CHECK(parse_config("", false).sim.far_field);
  CHECK_FALSE(parse_config("[sim]\nfar_field = 0\n", false).sim.far_field);
}

TEST_CASE("parent intensity can be given directly") {
  const RunConfig c = parse_config("[system]\nlambda_p = 1e-5\n", false);
  CHECK(c.params.lambda_p == 1e-5);
  CHECK_THROWS_AS(parse_config("[system]\nlambda_p = 1e-5\nlambda_u = 8e-6\n", false), ConfigError);
}

TEST_CASE("invalid files are rejected") {
  CHECK_THROWS_AS(parse_config("[system]\nphi = 1.0\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nphi = 0\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nbogus = 1\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[nowhere]\nphi = 0.5\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nphi = 0.5x\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nM = 8.5\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[system]\nH = nan\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[sim]\ntrials = 0\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[sim]\nfar_field = 2\n", false), ConfigError);
  CHECK_THROWS_AS(parse_config("[system\nphi = 0.5\n", false), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/secnet.ini", false), ConfigError);
}

TEST_CASE("rate and antenna constraints have their own errors") {
  CHECK_THROWS_AS(parse_config("[system]\nR_t = 0.4\nR_e = 0.4\n", false), RateError);
  CHECK_THROWS_AS(parse_config("[system]\nR_t = 0.3\nR_e = 0.4\n", false), RateError);
  CHECK_THROWS_AS(parse_config("[system]\nM = 4\nN = 4\n", false), AntennaError);
  CHECK_THROWS_AS(parse_config("[system]\nM = 4\nN = 6\n", false), AntennaError);
  CHECK_THROWS_AS(parse_config("[system]\nM = 4\nN = 4\n", false), ParameterError);
}

TEST_CASE("environment overrides file values") {
  const std::string text = "[system]\nphi = 0.6\n";
  {
    ScopedEnv env("SECNET_PHI", "0.25");
    CHECK(parse_config(text).params.phi == 0.25);
    CHECK(parse_config(text, false).params.phi == 0.6);
  }
  {
    ScopedEnv env("SECNET_TRIALS", "123");
    CHECK(default_config().sim.trials == 123);
  }
  {
    ScopedEnv env("SECNET_PHI", "1.5");
    CHECK_THROWS_AS(default_config(), ConfigError);
  }
  CHECK(parse_config(text).params.phi == 0.6);
}

TEST_CASE("description lists derived quantities") {
  const std::string text = describe(parse_config("", false));
  CHECK(text.find("lambda_p") != std::string::npos);
  CHECK(text.find("beta_t") != std::string::npos);
}
