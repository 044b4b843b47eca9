#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>
#include <string>

#include "isacsim/config.hpp"
#include "isacsim/errors.hpp"

using isacsim::ConfigError;
using isacsim::ParseError;
namespace cf = isacsim::config;

TEST_CASE("defaults validate and expose the reference dimensions") {
  cf::SystemConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  CHECK(cfg.dims().n_t == 64);
  CHECK(cfg.dims().n_t_rf() == 8);
  CHECK(cfg.optimizer().r_min == 2.0);
  CHECK(cfg.optimizer().alpha_t == 0.3);
  CHECK(cfg.reflectors().rho[0] == 0.8);
  CHECK(cfg.nlos_profile().min_paths == 2);
  CHECK(cfg.noise_variance_w() ==
        doctest::Approx(4.009497869018173e-12).epsilon(1e-9));
  REQUIRE(cfg.scenarios.size() == 4);
  CHECK(cfg.scenarios[0].label() == "no_blockage");
  CHECK(cfg.scenarios[1].label() == "keep_los_20db");
  CHECK(cfg.scenarios[2].label() == "keep_los_30db");
  CHECK(cfg.scenarios[3].label() == "switch_nlos_20db");
}

TEST_CASE("scenario labels format fractional attenuations") {
  cf::ScenarioSpec s{cf::ScenarioKind::blocked_keep_los, 22.5};
  CHECK(s.label() == "keep_los_22.5db");
}

TEST_CASE("config text parses sections, comments and overrides") {
  std::istringstream in(
      "# reference run\n"
      "[dimensions]\n"
      "n_t = 16\n"
      "k_subcarriers = 4\n"
      "\n"
      "[radio]\n"
      "bandwidth_hz = 400e6\n"
      "[sweep]\n"
      "snr_grid_db = 0, 10, 20\n"
      "rng_seed = 7\n"
      "scenarios = no_blockage, keep_los:25\n");
  const auto cfg = cf::parse_config(in);
  CHECK(cfg.n_t == 16);
  CHECK(cfg.k_subcarriers == 4);
  CHECK(cfg.bandwidth_hz == 400e6);
  REQUIRE(cfg.snr_grid_db.size() == 3);
  CHECK(cfg.snr_grid_db[1] == 10.0);
  CHECK(cfg.rng_seed == 7);
  REQUIRE(cfg.scenarios.size() == 2);
  CHECK(cfg.scenarios[1].kind == cf::ScenarioKind::blocked_keep_los);
  CHECK(cfg.scenarios[1].blockage_db == 25.0);
  // untouched keys keep their defaults
  CHECK(cfg.n_r == 4);
}

TEST_CASE("unknown keys and sections are configuration errors") {
  std::istringstream unknown_key("n_tt = 16\n");
  CHECK_THROWS_AS(cf::parse_config(unknown_key), ConfigError);
  std::istringstream unknown_section("[antenna]\nn_t = 16\n");
  CHECK_THROWS_AS(cf::parse_config(unknown_section), ConfigError);
}

TEST_CASE("duplicate keys are rejected") {
  std::istringstream in("n_t = 16\nn_t = 64\n");
  CHECK_THROWS_AS(cf::parse_config(in), ConfigError);
}

TEST_CASE("malformed lines carry their line number") {
  std::istringstream in("n_t = 16\nthis line has no assignment\n");
  try {
    cf::parse_config(in);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  std::istringstream bad_number("n_t = sixteen\n");
  CHECK_THROWS_AS(cf::parse_config(bad_number), ParseError);
}

TEST_CASE("overrides apply single keys") {
  cf::SystemConfig cfg;
  cf::apply_override(cfg, "gain_user1_db", "-90");
  CHECK(cfg.gain_user1_db == -90.0);
  cf::apply_override(cfg, "echo_hops", "1");
  CHECK(cfg.echo_hops == 1);
  CHECK_THROWS_AS(cf::apply_override(cfg, "no_such_key", "1"), ConfigError);
}

TEST_CASE("scenario list grammar") {
  const auto list =
      cf::parse_scenarios("no_blockage, keep_los:20, switch_nlos:30");
  REQUIRE(list.size() == 3);
  CHECK(list[0].kind == cf::ScenarioKind::no_blockage);
  CHECK(list[1].kind == cf::ScenarioKind::blocked_keep_los);
  CHECK(list[1].blockage_db == 20.0);
  CHECK(list[2].kind == cf::ScenarioKind::blocked_switch_nlos);
  CHECK(list[2].blockage_db == 30.0);
  CHECK_THROWS_AS(cf::parse_scenarios("no_blockage:5"), ConfigError);
  CHECK_THROWS_AS(cf::parse_scenarios("keep_los"), ConfigError);
  CHECK_THROWS_AS(cf::parse_scenarios("tunnel:3"), ConfigError);
  CHECK_THROWS_AS(cf::parse_scenarios(""), ConfigError);
}

TEST_CASE("validation names structural violations") {
  cf::SystemConfig cfg;
  cfg.n_t = 10;  // not a square count
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.echo_hops = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.n_clusters = 3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.n_r_rf = 2;  // must equal n_s
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.scenarios[0].blockage_db = 5.0;  // no_blockage carries no dB
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.scenarios[1].blockage_db = 0.0;  // blocked scenario needs a level
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.rho_user1 = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("parse layers on top of a base configuration") {
  cf::SystemConfig base;
  base.gain_user2_db = -110.0;
  std::istringstream in("n_realizations = 5\n");
  const auto cfg = cf::parse_config(in, base);
  CHECK(cfg.gain_user2_db == -110.0);
  CHECK(cfg.n_realizations == 5);
}
