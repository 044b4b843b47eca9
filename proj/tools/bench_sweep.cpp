#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "isacsim/harness.hpp"

namespace {

using isacsim::config::SystemConfig;
using isacsim::harness::SweepResult;

double time_sweep(const SystemConfig& cfg, bool parallel, int jobs,
                  std::string* csv) {
  isacsim::harness::SweepOptions opts;
  opts.parallel = parallel;
  opts.jobs = jobs;
  const auto t0 = std::chrono::steady_clock::now();
  const SweepResult result = isacsim::harness::run_sweep(cfg, opts);
  const auto t1 = std::chrono::steady_clock::now();
  *csv = isacsim::harness::summary_csv(result.summary) +
         isacsim::harness::points_csv(result.points, cfg.k_subcarriers);
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compare the serial and OpenMP sweep implementations"};
  std::string config_path;
  std::vector<std::string> overrides;
  int jobs = 0;
  int realizations = 10;
  int repeat = 1;
  app.add_option("--config", config_path, "configuration file");
  app.add_option("--set", overrides, "KEY=VALUE override");
  app.add_option("--jobs", jobs, "parallel worker threads, 0 = all");
  app.add_option("--realizations", realizations,
                 "realizations per cell (default 10 for a quick run)");
  app.add_option("--repeat", repeat, "timing repetitions, best-of is kept");
  CLI11_PARSE(app, argc, argv);

  try {
    SystemConfig cfg;
    if (!config_path.empty()) {
      cfg = isacsim::config::parse_config_file(config_path);
    }
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        std::cerr << "error: --set expects KEY=VALUE, got '" << kv << "'\n";
        return 1;
      }
      isacsim::config::apply_override(cfg, kv.substr(0, eq),
                                      kv.substr(eq + 1));
    }
    cfg.n_realizations = realizations;
    cfg.validate();

    const int cells = static_cast<int>(cfg.scenarios.size() *
                                       cfg.snr_grid_db.size()) *
                      cfg.n_realizations;
    std::cout << "benchmarking " << cells << " points, best of " << repeat
              << " run(s)\n\n";

    double t_serial = 0.0, t_parallel = 0.0;
    std::string csv_serial, csv_parallel;
    for (int i = 0; i < repeat; ++i) {
      const double t = time_sweep(cfg, false, 0, &csv_serial);
      t_serial = (i == 0) ? t : std::min(t_serial, t);
    }
    for (int i = 0; i < repeat; ++i) {
      const double t = time_sweep(cfg, true, jobs, &csv_parallel);
      t_parallel = (i == 0) ? t : std::min(t_parallel, t);
    }

    const bool identical = csv_serial == csv_parallel;
    std::printf("%-10s %12s %14s\n", "mode", "seconds", "points/sec");
    std::printf("%-10s %12.3f %14.1f\n", "serial", t_serial,
                cells / t_serial);
    std::printf("%-10s %12.3f %14.1f\n", "parallel", t_parallel,
                cells / t_parallel);
    std::printf("\nspeedup: %.2fx, outputs byte-identical: %s\n",
                t_serial / t_parallel, identical ? "yes" : "NO");
    return identical ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
