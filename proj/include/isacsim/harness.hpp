#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "isacsim/blockage.hpp"
#include "isacsim/config.hpp"

namespace isacsim {
namespace harness {

/// One Monte-Carlo cell outcome.
struct PointResult {
  std::string scenario;
  double blockage_db = 0.0;
  double snr_db = 0.0;
  int realization = 0;
  rates::RateReport rates;
  std::array<blockage::BlockageDecision, 3> decisions;
  rates::PowerAllocation allocation;
  bool feasible = false;
  bool noma_order_flagged = false;
  bool any_user_blocked_declared = false;
  std::vector<power::TraceRow> optimizer_trace;  // kept only under --trace
};

/// Aggregate over realizations of one (scenario, snr) cell.
struct SweepRow {
  std::string scenario;
  double blockage_db = 0.0;
  double snr_db = 0.0;
  int n = 0;
  double r_total_mean = 0.0, r_total_std = 0.0;
  double r_comm_sum_mean = 0.0, r_comm_sum_std = 0.0;
  double r_sense_sum_mean = 0.0, r_sense_sum_std = 0.0;
  // per user and subcarrier communication rates (mean/std)
  std::vector<std::array<double, 2>> r_user_mean;  // [k][user]
  std::vector<std::array<double, 2>> r_user_std;
  double r_sense_target_mean = 0.0, r_sense_target_std = 0.0;
  double blockage_detection_rate = 0.0;
  double infeasible_fraction = 0.0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;
  int k_subcarriers = 2;
};

/// Per-cell seed: splitmix64 chain over (root, scenario, snr, realization),
/// so cell streams are independent of sweep order and thread count.
std::uint64_t point_seed(std::uint64_t root, int scenario_index, int snr_index,
                         int realization);

/// Pristine (pre-blockage) channel set of one Monte-Carlo cell, exactly
/// as run_point synthesizes it before scenario injection.
channel::SubcarrierChannelSet synthesize_point_channels(
    const config::SystemConfig& cfg, int scenario_index, int snr_index,
    int realization);

/// Runs one Monte-Carlo cell: synthesize LOS + NLOS channels, inject the
/// scenario's blockage, run detection against the nominal (pre-blockage)
/// beam design, apply the switch rule, reassemble the beamformer on the
/// active channels, optimize the power split and score rates.
PointResult run_point(const config::SystemConfig& cfg,
                      const config::ScenarioSpec& scenario, int scenario_index,
                      double snr_db, int snr_index, int realization,
                      bool keep_trace = false);

struct SweepOptions {
  bool parallel = true;   // OpenMP over Monte-Carlo cells
  int jobs = 0;           // 0 = library default thread count
  bool keep_trace = false;
  bool keep_points = true;
};

struct SweepResult {
  SweepSummary summary;
  std::vector<PointResult> points;  // realization-major, deterministic order
};

/// Full sweep over cfg.scenarios x cfg.snr_grid_db x realizations.
/// Aggregation is an ordered reduction over the precomputed per-point
/// results, so parallel and serial runs produce identical bytes.
SweepResult run_sweep(const config::SystemConfig& cfg,
                      const SweepOptions& opts = {});

/// Serial reference implementation of the same sweep, kept for testing
/// and benchmarking against the OpenMP path.
SweepResult run_sweep_serial(const config::SystemConfig& cfg,
                             bool keep_trace = false, bool keep_points = true);

/// CSV emission. Numbers are printed with a fixed %.12g so identical
/// doubles serialize to identical bytes.
std::string summary_csv(const SweepSummary& summary);
std::string points_csv(const std::vector<PointResult>& points,
                       int k_subcarriers);
std::string optimizer_trace_csv(const std::vector<PointResult>& points);

}  // namespace harness
}  // namespace isacsim
