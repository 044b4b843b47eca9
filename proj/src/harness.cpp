#include "isacsim/harness.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <sstream>

#include "isacsim/errors.hpp"
#include "isacsim/rng.hpp"

namespace isacsim {
namespace harness {

using channel::ArrayGeometry;
using channel::LinkSpec;
using channel::Object;
using channel::PathParams;
using channel::SubcarrierChannelSet;
using channel::Variant;
using config::ScenarioKind;
using config::ScenarioSpec;
using config::SystemConfig;

namespace {

constexpr double kDeg = M_PI / 180.0;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int square_side(int n) {
  return static_cast<int>(std::lround(std::sqrt(double(n))));
}

LinkSpec los_link(const SystemConfig& cfg, double az_deg, double el_deg,
                  double gain_db, const ArrayGeometry& rx) {
  PathParams p;
  p.gain = std::pow(10.0, gain_db / 20.0);
  p.aod_az = az_deg * kDeg;
  p.aod_el = el_deg * kDeg;
  p.aoa_az = p.aod_az;
  p.aoa_el = p.aod_el;
  LinkSpec link;
  link.paths = {p};
  link.tx = ArrayGeometry{square_side(cfg.n_t), cfg.element_spacing};
  link.rx = rx;
  return link;
}

struct LinkBundle {
  std::array<LinkSpec, 3> los;
  std::array<LinkSpec, 3> nlos;
};

// Draw order is fixed (user1 then user2) so the realization stream is
// scenario-independent; the target reuses its LOS link as the fallback
// because it never switches.
LinkBundle draw_links(const SystemConfig& cfg, Rng& rng) {
  const ArrayGeometry user_rx{square_side(cfg.n_r), cfg.element_spacing};
  const ArrayGeometry radar_rx{square_side(cfg.n_radar), cfg.element_spacing};
  LinkBundle b;
  b.los[0] = los_link(cfg, cfg.az_cluster1_deg, cfg.el_cluster1_deg,
                      cfg.gain_user1_db, user_rx);
  b.los[1] = los_link(cfg, cfg.az_cluster1_deg, cfg.el_cluster1_deg,
                      cfg.gain_user2_db, user_rx);
  b.los[2] = los_link(cfg, cfg.az_cluster2_deg, cfg.el_cluster2_deg,
                      cfg.gain_target_db, radar_rx);
  const channel::NlosProfile profile = cfg.nlos_profile();
  b.nlos[0] = channel::random_nlos_link(b.los[0], profile, rng);
  b.nlos[1] = channel::random_nlos_link(b.los[1], profile, rng);
  b.nlos[2] = b.los[2];
  return b;
}

SubcarrierChannelSet synthesize_set(const SystemConfig& cfg,
                                    const LinkBundle& links) {
  const ArrayGeometry radar_rx{square_side(cfg.n_radar), cfg.element_spacing};
  SubcarrierChannelSet set;
  set.freqs_hz = channel::subcarrier_frequencies(
      cfg.carrier_freq_hz, cfg.bandwidth_hz, cfg.k_subcarriers);
  for (Object o : channel::kObjects) {
    const int i = static_cast<int>(o);
    channel::ObjectChannels& oc = set.of(o);
    oc.los = channel::synthesize_channel(links.los[i], set.freqs_hz);
    oc.nlos = channel::synthesize_channel(links.nlos[i], set.freqs_hz);
    oc.echo_los = channel::synthesize_channel(
        channel::echo_link(links.los[i], radar_rx), set.freqs_hz);
    oc.echo_nlos = channel::synthesize_channel(
        channel::echo_link(links.nlos[i], radar_rx), set.freqs_hz);
  }
  return set;
}

// Scenario attenuation hits the user LOS rays only: the forward link once,
// the echo once per configured hop count.
SubcarrierChannelSet inject_blockage(const SubcarrierChannelSet& pristine,
                                     const SystemConfig& cfg, double db) {
  SubcarrierChannelSet out = pristine;
  if (db <= 0.0) return out;
  for (Object o : {Object::user1, Object::user2}) {
    channel::ObjectChannels& oc = out.of(o);
    oc.blockage_db = db;
    for (CMat& h : oc.los) h = channel::apply_blockage(h, db);
    for (CMat& h : oc.echo_los) {
      h = channel::apply_blockage(h, db * cfg.echo_hops);
    }
  }
  return out;
}

}  // namespace

std::uint64_t point_seed(std::uint64_t root, int scenario_index, int snr_index,
                         int realization) {
  return derive_seed(root, static_cast<std::uint64_t>(scenario_index),
                     static_cast<std::uint64_t>(snr_index),
                     static_cast<std::uint64_t>(realization));
}

SubcarrierChannelSet synthesize_point_channels(const SystemConfig& cfg,
                                               int scenario_index,
                                               int snr_index,
                                               int realization) {
  Rng rng(point_seed(cfg.rng_seed, scenario_index, snr_index, realization));
  return synthesize_set(cfg, draw_links(cfg, rng));
}

PointResult run_point(const SystemConfig& cfg, const ScenarioSpec& scenario,
                      int scenario_index, double snr_db, int snr_index,
                      int realization, bool keep_trace) {
  const SubcarrierChannelSet pristine =
      synthesize_point_channels(cfg, scenario_index, snr_index, realization);
  const SubcarrierChannelSet observed =
      inject_blockage(pristine, cfg, scenario.blockage_db);

  const beamforming::BeamformerDims dims = cfg.dims();
  const rates::ReflectorSet reflectors = cfg.reflectors();
  const double snr_linear = std::pow(10.0, snr_db / 10.0);
  const beamforming::HybridBeamformer nominal =
      beamforming::assemble(pristine, dims, cfg.p_max_w);

  rates::PowerAllocation probe;
  probe.alpha_t = cfg.alpha_t;
  probe.alpha1 = (1.0 - cfg.alpha_t) - probe.alpha2;
  probe.snr_linear = snr_linear;
  probe.total_budget = cfg.p_max_w;

  const bool nlos_available =
      scenario.kind == ScenarioKind::blocked_switch_nlos;
  const double hypothesis_db = scenario.blockage_db > 0.0
                                   ? scenario.blockage_db
                                   : cfg.detector_reference_db;
  PointResult res;
  for (Object o : channel::kObjects) {
    const int i = static_cast<int>(o);
    const double unblocked =
        blockage::reflection_ratio(o, pristine, nominal, probe, reflectors);
    const double measured =
        blockage::reflection_ratio(o, observed, nominal, probe, reflectors);
    const int hops = (o == Object::target) ? 1 : cfg.echo_hops;
    const double blocked =
        unblocked * std::pow(10.0, -hypothesis_db * hops / 10.0);
    res.decisions[i] =
        blockage::decide(o, measured, unblocked, blocked, nlos_available);
  }

  const SubcarrierChannelSet active =
      blockage::apply_switch(observed, res.decisions);
  const beamforming::HybridBeamformer bf =
      beamforming::assemble(active, dims, cfg.p_max_w);
  const rates::RateContext ctx(active, bf, reflectors,
                               cfg.noise_variance_w());
  const power::OptimizeResult opt = power::optimize(
      ctx, snr_linear, cfg.p_max_w, cfg.optimizer(), keep_trace);

  res.scenario = scenario.label();
  res.blockage_db = scenario.blockage_db;
  res.snr_db = snr_db;
  res.realization = realization;
  res.rates = ctx.report(opt.allocation);
  res.rates.scenario = res.scenario;
  res.rates.snr_db = snr_db;
  res.allocation = opt.allocation;
  res.feasible = opt.feasible;
  res.noma_order_flagged = opt.noma_order_flagged;
  res.any_user_blocked_declared = res.decisions[0].declared_blocked ||
                                  res.decisions[1].declared_blocked;
  res.optimizer_trace = opt.trace;
  return res;
}

namespace {

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  int n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double stddev() const {
    if (!n) return 0.0;
    const double m = mean();
    const double var = sum_sq / n - m * m;
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

SweepRow aggregate_cell(const SystemConfig& cfg, const ScenarioSpec& scenario,
                        double snr_db, const PointResult* cell, int n) {
  SweepRow row;
  row.scenario = scenario.label();
  row.blockage_db = scenario.blockage_db;
  row.snr_db = snr_db;
  row.n = n;
  Accumulator total, comm, sense, target;
  std::vector<std::array<Accumulator, 2>> user(cfg.k_subcarriers);
  int detected = 0, infeasible = 0;
  for (int r = 0; r < n; ++r) {
    const PointResult& p = cell[r];
    total.add(p.rates.r_total);
    comm.add(p.rates.r_comm_sum);
    sense.add(p.rates.r_sense_sum);
    target.add(p.rates.sense_sum_object(Object::target));
    for (int k = 0; k < cfg.k_subcarriers; ++k) {
      for (int u = 0; u < 2; ++u) user[k][u].add(p.rates.r_user[k][u]);
    }
    if (p.any_user_blocked_declared) ++detected;
    if (!p.feasible) ++infeasible;
  }
  row.r_total_mean = total.mean();
  row.r_total_std = total.stddev();
  row.r_comm_sum_mean = comm.mean();
  row.r_comm_sum_std = comm.stddev();
  row.r_sense_sum_mean = sense.mean();
  row.r_sense_sum_std = sense.stddev();
  row.r_user_mean.resize(cfg.k_subcarriers);
  row.r_user_std.resize(cfg.k_subcarriers);
  for (int k = 0; k < cfg.k_subcarriers; ++k) {
    for (int u = 0; u < 2; ++u) {
      row.r_user_mean[k][u] = user[k][u].mean();
      row.r_user_std[k][u] = user[k][u].stddev();
    }
  }
  row.r_sense_target_mean = target.mean();
  row.r_sense_target_std = target.stddev();
  row.blockage_detection_rate = n ? double(detected) / n : 0.0;
  row.infeasible_fraction = n ? double(infeasible) / n : 0.0;
  return row;
}

SweepResult assemble_sweep(const SystemConfig& cfg,
                           std::vector<PointResult>&& points,
                           bool keep_points) {
  const int n_snr = static_cast<int>(cfg.snr_grid_db.size());
  const int n_real = cfg.n_realizations;
  SweepResult result;
  result.summary.k_subcarriers = cfg.k_subcarriers;
  for (size_t s = 0; s < cfg.scenarios.size(); ++s) {
    for (int q = 0; q < n_snr; ++q) {
      const size_t base = (s * n_snr + q) * n_real;
      result.summary.rows.push_back(aggregate_cell(
          cfg, cfg.scenarios[s], cfg.snr_grid_db[q], &points[base], n_real));
    }
  }
  if (keep_points) {
    result.points = std::move(points);
  }
  return result;
}

}  // namespace

SweepResult run_sweep(const SystemConfig& cfg, const SweepOptions& opts) {
  cfg.validate();
  const int n_snr = static_cast<int>(cfg.snr_grid_db.size());
  const int n_real = cfg.n_realizations;
  const int n_cells =
      static_cast<int>(cfg.scenarios.size()) * n_snr * n_real;
  std::vector<PointResult> points(n_cells);
  const int jobs = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
  std::exception_ptr failure;

  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int idx = 0; idx < n_cells; ++idx) {
      const int s = idx / (n_snr * n_real);
      const int q = (idx / n_real) % n_snr;
      const int r = idx % n_real;
      try {
        points[idx] = run_point(cfg, cfg.scenarios[s], s, cfg.snr_grid_db[q],
                                q, r, opts.keep_trace);
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
  } else {
    for (int idx = 0; idx < n_cells; ++idx) {
      const int s = idx / (n_snr * n_real);
      const int q = (idx / n_real) % n_snr;
      const int r = idx % n_real;
      points[idx] = run_point(cfg, cfg.scenarios[s], s, cfg.snr_grid_db[q], q,
                              r, opts.keep_trace);
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble_sweep(cfg, std::move(points), opts.keep_points);
}

SweepResult run_sweep_serial(const SystemConfig& cfg, bool keep_trace,
                             bool keep_points) {
  SweepOptions opts;
  opts.parallel = false;
  opts.keep_trace = keep_trace;
  opts.keep_points = keep_points;
  return run_sweep(cfg, opts);
}

std::string summary_csv(const SweepSummary& summary) {
  std::ostringstream out;
  out << "scenario,blockage_db,snr_db,n,r_total_mean,r_total_std,"
         "r_comm_sum_mean,r_comm_sum_std,r_sense_sum_mean,r_sense_sum_std";
  for (int k = 0; k < summary.k_subcarriers; ++k) {
    for (int u = 0; u < 2; ++u) {
      out << ",r_user" << (u + 1) << "_k" << k << "_mean"
          << ",r_user" << (u + 1) << "_k" << k << "_std";
    }
  }
  out << ",r_sense_target_mean,r_sense_target_std,blockage_detection_rate,"
         "infeasible_fraction\n";
  for (const SweepRow& row : summary.rows) {
    out << row.scenario << ',' << fmt(row.blockage_db) << ','
        << fmt(row.snr_db) << ',' << row.n << ',' << fmt(row.r_total_mean)
        << ',' << fmt(row.r_total_std) << ',' << fmt(row.r_comm_sum_mean)
        << ',' << fmt(row.r_comm_sum_std) << ',' << fmt(row.r_sense_sum_mean)
        << ',' << fmt(row.r_sense_sum_std);
    for (int k = 0; k < summary.k_subcarriers; ++k) {
      for (int u = 0; u < 2; ++u) {
        out << ',' << fmt(row.r_user_mean[k][u]) << ','
            << fmt(row.r_user_std[k][u]);
      }
    }
    out << ',' << fmt(row.r_sense_target_mean) << ','
        << fmt(row.r_sense_target_std) << ','
        << fmt(row.blockage_detection_rate) << ','
        << fmt(row.infeasible_fraction) << '\n';
  }
  return out.str();
}

std::string points_csv(const std::vector<PointResult>& points,
                       int k_subcarriers) {
  std::ostringstream out;
  out << "scenario,blockage_db,snr_db,realization,feasible,"
         "noma_order_flagged,blocked_declared,cluster_switched,alpha1,alpha2,"
         "alpha_t,r_total,r_comm_sum,r_sense_sum";
  for (int k = 0; k < k_subcarriers; ++k) {
    for (int u = 0; u < 2; ++u) out << ",r_user" << (u + 1) << "_k" << k;
  }
  for (Object o : channel::kObjects) {
    out << ",r_sense_" << channel::object_name(o);
  }
  for (Object o : channel::kObjects) {
    const char* n = channel::object_name(o);
    out << ",ratio_" << n << ",expected_unblocked_" << n
        << ",expected_blocked_" << n;
  }
  out << '\n';
  for (const PointResult& p : points) {
    const bool switched =
        p.decisions[0].action == blockage::Action::switch_to_nlos ||
        p.decisions[1].action == blockage::Action::switch_to_nlos;
    out << p.scenario << ',' << fmt(p.blockage_db) << ',' << fmt(p.snr_db)
        << ',' << p.realization << ',' << int(p.feasible) << ','
        << int(p.noma_order_flagged) << ','
        << int(p.any_user_blocked_declared) << ',' << int(switched) << ','
        << fmt(p.allocation.alpha1) << ',' << fmt(p.allocation.alpha2) << ','
        << fmt(p.allocation.alpha_t) << ',' << fmt(p.rates.r_total) << ','
        << fmt(p.rates.r_comm_sum) << ',' << fmt(p.rates.r_sense_sum);
    for (int k = 0; k < k_subcarriers; ++k) {
      for (int u = 0; u < 2; ++u) out << ',' << fmt(p.rates.r_user[k][u]);
    }
    for (Object o : channel::kObjects) {
      out << ',' << fmt(p.rates.sense_sum_object(o));
    }
    for (const blockage::BlockageDecision& d : p.decisions) {
      out << ',' << fmt(d.ratio) << ',' << fmt(d.expected_unblocked) << ','
          << fmt(d.expected_blocked);
    }
    out << '\n';
  }
  return out.str();
}

std::string optimizer_trace_csv(const std::vector<PointResult>& points) {
  std::ostringstream out;
  out << "scenario,blockage_db,snr_db,realization,iter,alpha2,r2,r_total,"
         "feasible\n";
  for (const PointResult& p : points) {
    for (const power::TraceRow& t : p.optimizer_trace) {
      out << p.scenario << ',' << fmt(p.blockage_db) << ',' << fmt(p.snr_db)
          << ',' << p.realization << ',' << t.iter << ',' << fmt(t.alpha2)
          << ',' << fmt(t.r2) << ',' << fmt(t.r_total) << ','
          << int(t.feasible) << '\n';
    }
  }
  return out.str();
}

}  // namespace harness
}  // namespace isacsim
