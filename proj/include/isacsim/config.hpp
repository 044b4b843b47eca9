#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "isacsim/channel.hpp"
#include "isacsim/power.hpp"

namespace isacsim {
namespace config {

enum class ScenarioKind { no_blockage = 0, blocked_keep_los = 1,
                          blocked_switch_nlos = 2 };

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::no_blockage;
  double blockage_db = 0.0;  // attenuation injected into user LOS links

  std::string label() const;
};

const char* scenario_kind_name(ScenarioKind k);

/// Full simulator configuration; defaults reproduce the reference system
/// (64-antenna BS, two NOMA users plus one sensing target at 28 GHz).
struct SystemConfig {
  // transceiver dimensions
  int n_t = 64;
  int n_r = 4;
  int n_r_rf = 4;
  int n_radar = 4;
  int n_s = 4;
  int n_clusters = 2;
  int k_subcarriers = 2;

  // radio parameters
  double p_max_w = 1.0;
  double carrier_freq_hz = 28e9;
  double bandwidth_hz = 800e6;
  double element_spacing = 0.5;

  // link geometry and strengths
  double az_cluster1_deg = 100.0;
  double el_cluster1_deg = 30.0;
  double az_cluster2_deg = 140.0;
  double el_cluster2_deg = 30.0;
  double gain_user1_db = -95.0;
  double gain_user2_db = -103.0;
  double gain_target_db = -103.0;

  // backscatter model
  double rho_user1 = 0.8;
  double rho_user2 = 0.5;
  double rho_target = 0.5;
  int echo_hops = 2;  // blockage crossings of a user echo (1 or 2)

  // NLOS fallback statistics
  double nlos_deficit_db = 3.0;
  double nlos_delay_max_s = 100e-9;
  double nlos_angle_spread_deg = 20.0;
  int nlos_min_paths = 2;
  int nlos_max_paths = 4;

  // power optimizer
  double alpha_t = 0.3;
  double r_min_bps_hz = 2.0;
  bool r_min_per_subcarrier = false;
  double power_delta = 0.01;
  int power_max_iters = 200;

  // blockage detector
  double detector_reference_db = 20.0;  // blocked hypothesis level when the
                                        // scenario injects no attenuation

  // sweep
  std::vector<double> snr_grid_db{0, 5, 10, 15, 20, 25, 30};
  int n_realizations = 100;
  std::uint64_t rng_seed = 28;
  std::vector<ScenarioSpec> scenarios{
      {ScenarioKind::no_blockage, 0.0},
      {ScenarioKind::blocked_keep_los, 20.0},
      {ScenarioKind::blocked_keep_los, 30.0},
      {ScenarioKind::blocked_switch_nlos, 20.0},
  };

  void validate() const;  // ConfigError naming the offending key

  beamforming::BeamformerDims dims() const;
  power::PowerOptimizerConfig optimizer() const;
  rates::ReflectorSet reflectors() const;
  channel::NlosProfile nlos_profile() const;
  double noise_variance_w() const;
};

/// Parses the key = value configuration grammar (see docs/config.md):
/// '#' comments, optional [section] headers from a known set, globally
/// unique keys. Unknown keys or sections raise ConfigError; malformed
/// lines raise ParseError with the line number. An empty file yields the
/// defaults.
SystemConfig parse_config(std::istream& in, const SystemConfig& base = {});
SystemConfig parse_config_file(const std::string& path,
                               const SystemConfig& base = {});

/// Applies one KEY=VALUE override (the --set flag). Unknown keys raise
/// ConfigError listing the key.
void apply_override(SystemConfig& cfg, const std::string& key,
                    const std::string& value);

/// Parses the scenario list grammar used by config and --scenarios:
/// comma-separated entries `no_blockage`, `keep_los:<db>`,
/// `switch_nlos:<db>`.
std::vector<ScenarioSpec> parse_scenarios(const std::string& text);

}  // namespace config
}  // namespace isacsim
