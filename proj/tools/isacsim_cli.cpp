#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isacsim/errors.hpp"
#include "isacsim/harness.hpp"
#include "isacsim/svgplot.hpp"
#include "isacsim/trace_io.hpp"

namespace {

using isacsim::config::SystemConfig;
using isacsim::harness::SweepResult;
using isacsim::harness::SweepSummary;

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string scenarios;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_config_options(CLI::App* sub, ConfigArgs& args) {
  sub->add_option("--config", args.config_path, "configuration file");
  sub->add_option("--set", args.overrides,
                  "KEY=VALUE override, applied after --config");
  sub->add_option("--scenarios", args.scenarios,
                  "scenario list, e.g. no_blockage,keep_los:20");
  auto* seed = sub->add_option("--seed", args.seed, "root RNG seed")
                   ->envname("ISACSIM_SEED");
  sub->callback([seed, &args] { args.seed_given = seed->count() > 0; });
}

SystemConfig build_config(const ConfigArgs& args) {
  SystemConfig cfg;
  if (!args.config_path.empty()) {
    cfg = isacsim::config::parse_config_file(args.config_path);
  }
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw isacsim::ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    }
    isacsim::config::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.scenarios.empty()) {
    cfg.scenarios = isacsim::config::parse_scenarios(args.scenarios);
  }
  if (args.seed_given) cfg.rng_seed = args.seed;
  cfg.validate();
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw isacsim::ConfigError("cannot open for writing: " + path.string());
  }
  out << data;
  if (!out) throw isacsim::ConfigError("write failed: " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw isacsim::ConfigError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string scenario_chart(const SweepSummary& summary,
                           double SweepRowField(const isacsim::harness::SweepRow&),
                           const std::string& title,
                           const std::string& y_label) {
  std::vector<isacsim::svgplot::Series> series;
  std::map<std::string, size_t> index;
  for (const auto& row : summary.rows) {
    auto it = index.find(row.scenario);
    if (it == index.end()) {
      it = index.emplace(row.scenario, series.size()).first;
      series.push_back({row.scenario, {}, {}});
    }
    series[it->second].x.push_back(row.snr_db);
    series[it->second].y.push_back(SweepRowField(row));
  }
  return isacsim::svgplot::line_chart(title, "transmit SNR factor [dB]",
                                      y_label, series);
}

void write_figures(const std::filesystem::path& dir,
                   const SweepSummary& summary) {
  write_file(dir / "fig_comm_rate.svg",
             scenario_chart(
                 summary,
                 [](const isacsim::harness::SweepRow& r) {
                   return r.r_comm_sum_mean;
                 },
                 "Communication sum rate vs SNR", "rate [bps/Hz]"));
  write_file(dir / "fig_sense_rate.svg",
             scenario_chart(
                 summary,
                 [](const isacsim::harness::SweepRow& r) {
                   return r.r_sense_sum_mean;
                 },
                 "Sensing sum rate vs SNR", "rate [bps/Hz]"));
  write_file(dir / "fig_total_rate.svg",
             scenario_chart(
                 summary,
                 [](const isacsim::harness::SweepRow& r) {
                   return r.r_total_mean;
                 },
                 "Total rate vs SNR", "rate [bps/Hz]"));
}

int cmd_run(const ConfigArgs& cargs, const std::string& out_dir, int jobs,
            bool serial, bool trace, bool strict) {
  const SystemConfig cfg = build_config(cargs);
  isacsim::harness::SweepOptions opts;
  opts.parallel = !serial;
  opts.jobs = jobs;
  opts.keep_trace = trace;
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult result = isacsim::harness::run_sweep(cfg, opts);
  const auto t1 = std::chrono::steady_clock::now();
  const double seconds = std::chrono::duration<double>(t1 - t0).count();

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "sweep.csv",
             isacsim::harness::summary_csv(result.summary));
  write_file(dir / "points.csv",
             isacsim::harness::points_csv(result.points, cfg.k_subcarriers));
  if (trace) {
    write_file(dir / "optimizer_trace.csv",
               isacsim::harness::optimizer_trace_csv(result.points));
  }
  write_figures(dir, result.summary);

  int infeasible_rows = 0;
  for (const auto& row : result.summary.rows) {
    if (row.infeasible_fraction > 0.0) ++infeasible_rows;
  }
  std::cout << "ran " << result.points.size() << " points over "
            << result.summary.rows.size() << " cells in " << seconds
            << " s, output in " << dir.string() << "\n";
  if (infeasible_rows > 0) {
    std::cout << infeasible_rows
              << " cell(s) contain infeasible power allocations\n";
    if (strict) return 2;
  }
  return 0;
}

int cmd_validate(const ConfigArgs& cargs) {
  const SystemConfig cfg = build_config(cargs);
  std::cout << "config ok: " << cfg.n_t << " BS antennas, "
            << cfg.k_subcarriers << " subcarriers, " << cfg.scenarios.size()
            << " scenario(s), " << cfg.snr_grid_db.size() << " SNR point(s), "
            << cfg.n_realizations << " realization(s)\n";
  return 0;
}

int cmd_golden(const std::string& dir_arg) {
  const std::filesystem::path dir(dir_arg);
  const SystemConfig cfg =
      isacsim::config::parse_config_file((dir / "config.cfg").string());
  cfg.validate();
  const SweepResult result = isacsim::harness::run_sweep(cfg);
  const struct {
    const char* name;
    std::string fresh;
  } files[] = {
      {"sweep.csv", isacsim::harness::summary_csv(result.summary)},
      {"points.csv",
       isacsim::harness::points_csv(result.points, cfg.k_subcarriers)},
  };
  bool all_ok = true;
  for (const auto& f : files) {
    const std::string golden = read_file(dir / f.name);
    const bool ok = golden == f.fresh;
    std::cout << (ok ? "match    " : "MISMATCH ") << f.name << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

int cmd_dump(const ConfigArgs& cargs, const std::string& out_path,
             int realization) {
  const SystemConfig cfg = build_config(cargs);
  const auto set =
      isacsim::harness::synthesize_point_channels(cfg, 0, 0, realization);
  isacsim::channel::TraceHeader header;
  header.k_subcarriers = cfg.k_subcarriers;
  header.n_t = cfg.n_t;
  header.n_r = cfg.n_r;
  header.n_radar = cfg.n_radar;
  header.carrier_freq_hz = cfg.carrier_freq_hz;
  header.bandwidth_hz = cfg.bandwidth_hz;
  isacsim::channel::save_trace_file(out_path, set, header);
  std::cout << "wrote pristine channels of realization " << realization
            << " to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blocker-aware multicarrier ISAC-NOMA downlink simulator"};
  app.require_subcommand(1);

  ConfigArgs run_args;
  std::string out_dir = "out";
  int jobs = 0;
  bool serial = false, trace = false, strict = false;
  auto* run = app.add_subcommand("run", "run the Monte-Carlo SNR sweep");
  add_config_options(run, run_args);
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--jobs", jobs, "worker threads, 0 = all available");
  run->add_flag("--serial", serial, "use the serial reference path");
  run->add_flag("--trace", trace, "also write optimizer_trace.csv");
  run->add_flag("--strict", strict,
                "exit 2 when any power allocation is infeasible");

  ConfigArgs validate_args;
  auto* validate =
      app.add_subcommand("validate-config", "parse and check a configuration");
  add_config_options(validate, validate_args);

  std::string golden_dir;
  auto* golden = app.add_subcommand(
      "golden-test", "re-run a recorded sweep and byte-compare the CSVs");
  golden->add_option("--dir", golden_dir, "directory with config.cfg + CSVs")
      ->required();

  ConfigArgs dump_args;
  std::string dump_out = "channels.trace";
  int dump_realization = 0;
  auto* dump = app.add_subcommand("dump-channels",
                                  "write one realization's channel trace");
  add_config_options(dump, dump_args);
  dump->add_option("--out", dump_out, "trace output path");
  dump->add_option("--realization", dump_realization, "realization index");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(run_args, out_dir, jobs, serial, trace, strict);
    }
    if (validate->parsed()) return cmd_validate(validate_args);
    if (golden->parsed()) return cmd_golden(golden_dir);
    if (dump->parsed()) {
      return cmd_dump(dump_args, dump_out, dump_realization);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
