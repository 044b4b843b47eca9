#include "isacsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "isacsim/errors.hpp"
#include "isacsim/rates.hpp"

namespace isacsim {
namespace config {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an unsigned integer: '" + v + "'");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

std::vector<double> to_double_list(const std::string& key,
                                   const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError(key + ": empty list entry");
    out.push_back(to_double(key, t));
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

using Setter = std::function<void(SystemConfig&, const std::string&)>;

const std::map<std::string, Setter>& key_registry() {
  static const std::map<std::string, Setter> reg = [] {
    std::map<std::string, Setter> m;
    auto add_int = [&m](const std::string& k, int SystemConfig::*f) {
      m[k] = [k, f](SystemConfig& c, const std::string& v) {
        c.*f = to_int(k, v);
      };
    };
    auto add_double = [&m](const std::string& k, double SystemConfig::*f) {
      m[k] = [k, f](SystemConfig& c, const std::string& v) {
        c.*f = to_double(k, v);
      };
    };
    add_int("n_t", &SystemConfig::n_t);
    add_int("n_r", &SystemConfig::n_r);
    add_int("n_r_rf", &SystemConfig::n_r_rf);
    add_int("n_radar", &SystemConfig::n_radar);
    add_int("n_s", &SystemConfig::n_s);
    add_int("n_clusters", &SystemConfig::n_clusters);
    add_int("k_subcarriers", &SystemConfig::k_subcarriers);
    add_double("p_max_w", &SystemConfig::p_max_w);
    add_double("carrier_freq_hz", &SystemConfig::carrier_freq_hz);
    add_double("bandwidth_hz", &SystemConfig::bandwidth_hz);
    add_double("element_spacing", &SystemConfig::element_spacing);
    add_double("az_cluster1_deg", &SystemConfig::az_cluster1_deg);
    add_double("el_cluster1_deg", &SystemConfig::el_cluster1_deg);
    add_double("az_cluster2_deg", &SystemConfig::az_cluster2_deg);
    add_double("el_cluster2_deg", &SystemConfig::el_cluster2_deg);
    add_double("gain_user1_db", &SystemConfig::gain_user1_db);
    add_double("gain_user2_db", &SystemConfig::gain_user2_db);
    add_double("gain_target_db", &SystemConfig::gain_target_db);
    add_double("rho_user1", &SystemConfig::rho_user1);
    add_double("rho_user2", &SystemConfig::rho_user2);
    add_double("rho_target", &SystemConfig::rho_target);
    add_int("echo_hops", &SystemConfig::echo_hops);
    add_double("nlos_deficit_db", &SystemConfig::nlos_deficit_db);
    add_double("nlos_delay_max_s", &SystemConfig::nlos_delay_max_s);
    add_double("nlos_angle_spread_deg", &SystemConfig::nlos_angle_spread_deg);
    add_int("nlos_min_paths", &SystemConfig::nlos_min_paths);
    add_int("nlos_max_paths", &SystemConfig::nlos_max_paths);
    add_double("alpha_t", &SystemConfig::alpha_t);
    add_double("r_min_bps_hz", &SystemConfig::r_min_bps_hz);
    add_double("power_delta", &SystemConfig::power_delta);
    add_int("power_max_iters", &SystemConfig::power_max_iters);
    add_double("detector_reference_db", &SystemConfig::detector_reference_db);
    add_int("n_realizations", &SystemConfig::n_realizations);
    m["r_min_per_subcarrier"] = [](SystemConfig& c, const std::string& v) {
      c.r_min_per_subcarrier = to_bool("r_min_per_subcarrier", v);
    };
    m["snr_grid_db"] = [](SystemConfig& c, const std::string& v) {
      c.snr_grid_db = to_double_list("snr_grid_db", v);
    };
    m["rng_seed"] = [](SystemConfig& c, const std::string& v) {
      c.rng_seed = to_u64("rng_seed", v);
    };
    m["scenarios"] = [](SystemConfig& c, const std::string& v) {
      c.scenarios = parse_scenarios(v);
    };
    return m;
  }();
  return reg;
}

const std::set<std::string>& known_sections() {
  static const std::set<std::string> s{"dimensions", "radio",    "geometry",
                                       "backscatter", "nlos",    "power",
                                       "detector",    "sweep"};
  return s;
}

std::string fmt_db(double db) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", db);
  return buf;
}

}  // namespace

std::string ScenarioSpec::label() const {
  if (kind == ScenarioKind::no_blockage) return "no_blockage";
  return std::string(scenario_kind_name(kind)) + "_" + fmt_db(blockage_db) +
         "db";
}

const char* scenario_kind_name(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::no_blockage: return "no_blockage";
    case ScenarioKind::blocked_keep_los: return "keep_los";
    case ScenarioKind::blocked_switch_nlos: return "switch_nlos";
  }
  return "unknown";
}

void SystemConfig::validate() const {
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("config: " + msg);
  };
  const int side = static_cast<int>(std::lround(std::sqrt(double(n_t))));
  require(n_t > 0 && side * side == n_t, "n_t must be a square count");
  const int r_side = static_cast<int>(std::lround(std::sqrt(double(n_r))));
  require(n_r > 0 && r_side * r_side == n_r, "n_r must be a square count");
  const int radar_side =
      static_cast<int>(std::lround(std::sqrt(double(n_radar))));
  require(n_radar > 0 && radar_side * radar_side == n_radar,
          "n_radar must be a square count");
  require(n_r_rf >= 1 && n_r_rf <= n_r, "n_r_rf must lie in [1, n_r]");
  require(n_s >= 1 && n_s <= n_radar, "n_s must lie in [1, n_radar]");
  require(n_r_rf == n_s, "n_r_rf must equal n_s for the stacked design");
  require(n_clusters == 2, "n_clusters: only the two-beam design is supported");
  require(n_clusters * n_s <= n_t, "n_t must cover n_clusters * n_s chains");
  require(k_subcarriers >= 1, "k_subcarriers must be >= 1");
  require(p_max_w > 0.0, "p_max_w must be positive");
  require(carrier_freq_hz > 0.0, "carrier_freq_hz must be positive");
  require(bandwidth_hz > 0.0, "bandwidth_hz must be positive");
  require(element_spacing > 0.0, "element_spacing must be positive");
  require(rho_user1 >= 0.0 && rho_user1 <= 1.0, "rho_user1 outside [0, 1]");
  require(rho_user2 >= 0.0 && rho_user2 <= 1.0, "rho_user2 outside [0, 1]");
  require(rho_target >= 0.0 && rho_target <= 1.0, "rho_target outside [0, 1]");
  require(echo_hops == 1 || echo_hops == 2, "echo_hops must be 1 or 2");
  require(nlos_deficit_db >= 0.0, "nlos_deficit_db must be >= 0");
  require(nlos_delay_max_s >= 0.0, "nlos_delay_max_s must be >= 0");
  require(nlos_angle_spread_deg >= 0.0, "nlos_angle_spread_deg must be >= 0");
  require(nlos_min_paths >= 1, "nlos_min_paths must be >= 1");
  require(nlos_max_paths >= nlos_min_paths,
          "nlos_max_paths must be >= nlos_min_paths");
  require(alpha_t >= 0.0 && alpha_t < 1.0, "alpha_t outside [0, 1)");
  require(r_min_bps_hz >= 0.0, "r_min_bps_hz must be >= 0");
  require(power_delta > 0.0, "power_delta must be positive");
  require(power_max_iters >= 1, "power_max_iters must be >= 1");
  require(detector_reference_db > 0.0,
          "detector_reference_db must be positive");
  require(!snr_grid_db.empty(), "snr_grid_db must not be empty");
  require(n_realizations >= 1, "n_realizations must be >= 1");
  require(!scenarios.empty(), "scenarios must not be empty");
  for (const ScenarioSpec& s : scenarios) {
    if (s.kind == ScenarioKind::no_blockage) {
      require(s.blockage_db == 0.0, "no_blockage scenario carries no dB");
    } else {
      require(s.blockage_db > 0.0,
              "blocked scenario needs a positive blockage_db");
    }
  }
  optimizer().validate();
}

beamforming::BeamformerDims SystemConfig::dims() const {
  beamforming::BeamformerDims d;
  d.n_t = n_t;
  d.n_r = n_r;
  d.n_r_rf = n_r_rf;
  d.n_radar = n_radar;
  d.n_s = n_s;
  d.n_clusters = n_clusters;
  return d;
}

power::PowerOptimizerConfig SystemConfig::optimizer() const {
  power::PowerOptimizerConfig oc;
  oc.r_min = r_min_bps_hz;
  oc.delta = power_delta;
  oc.max_iters = power_max_iters;
  oc.alpha_t = alpha_t;
  oc.alpha_c = 1.0 - alpha_t;
  oc.r_min_per_subcarrier = r_min_per_subcarrier;
  return oc;
}

rates::ReflectorSet SystemConfig::reflectors() const {
  return rates::ReflectorSet{{rho_user1, rho_user2, rho_target}};
}

channel::NlosProfile SystemConfig::nlos_profile() const {
  channel::NlosProfile p;
  p.min_paths = nlos_min_paths;
  p.max_paths = nlos_max_paths;
  p.deficit_db = nlos_deficit_db;
  p.delay_max_s = nlos_delay_max_s;
  p.angle_spread = nlos_angle_spread_deg * M_PI / 180.0;
  return p;
}

double SystemConfig::noise_variance_w() const {
  return rates::noise_variance_w(bandwidth_hz);
}

SystemConfig parse_config(std::istream& in, const SystemConfig& base) {
  SystemConfig cfg = base;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ParseError("config line " + std::to_string(line_no) +
                         ": unterminated section header");
      }
      const std::string section = trim(line.substr(1, line.size() - 2));
      if (!known_sections().count(section)) {
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("config line " + std::to_string(line_no) +
                       ": empty key");
    }
    const auto it = key_registry().find(key);
    if (it == key_registry().end()) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": duplicate key '" + key + "'");
    }
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ParseError("config line " + std::to_string(line_no) + ": " +
                       e.what());
    }
  }
  return cfg;
}

SystemConfig parse_config_file(const std::string& path,
                               const SystemConfig& base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in, base);
}

void apply_override(SystemConfig& cfg, const std::string& key,
                    const std::string& value) {
  const auto it = key_registry().find(trim(key));
  if (it == key_registry().end()) {
    throw ConfigError("unknown config key '" + trim(key) + "'");
  }
  it->second(cfg, trim(value));
}

std::vector<ScenarioSpec> parse_scenarios(const std::string& text) {
  std::vector<ScenarioSpec> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) throw ConfigError("scenarios: empty entry");
    ScenarioSpec spec;
    const auto colon = t.find(':');
    const std::string name = trim(t.substr(0, colon));
    if (name == "no_blockage") {
      if (colon != std::string::npos) {
        throw ConfigError("scenarios: no_blockage takes no dB value");
      }
      spec.kind = ScenarioKind::no_blockage;
    } else if (name == "keep_los" || name == "switch_nlos") {
      spec.kind = name == "keep_los" ? ScenarioKind::blocked_keep_los
                                     : ScenarioKind::blocked_switch_nlos;
      if (colon == std::string::npos) {
        throw ConfigError("scenarios: '" + name + "' needs ':<db>'");
      }
      spec.blockage_db = to_double("scenarios", trim(t.substr(colon + 1)));
    } else {
      throw ConfigError("scenarios: unknown kind '" + name + "'");
    }
    out.push_back(spec);
  }
  if (out.empty()) throw ConfigError("scenarios: empty list");
  return out;
}

}  // namespace config
}  // namespace isacsim
