#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isacsim/errors.hpp"
#include "isacsim/harness.hpp"
#include "isacsim/power.hpp"

using isacsim::ConfigError;
namespace bf = isacsim::beamforming;
namespace pw = isacsim::power;
namespace rt = isacsim::rates;

namespace {

struct Instance {
  isacsim::config::SystemConfig cfg;
  isacsim::channel::SubcarrierChannelSet set;
  bf::HybridBeamformer beams;
  rt::ReflectorSet reflectors;
  double noise = 0.0;

  explicit Instance(int realization) {
    set = isacsim::harness::synthesize_point_channels(cfg, 0, 0, realization);
    beams = bf::assemble(set, cfg.dims(), cfg.p_max_w);
    reflectors = cfg.reflectors();
    noise = cfg.noise_variance_w();
  }

  rt::RateContext context() const {
    return rt::RateContext(set, beams, reflectors, noise);
  }
};

double total_rate_at(const rt::RateContext& ctx, double alpha2,
                     double snr_linear, const pw::PowerOptimizerConfig& cfg) {
  rt::PowerAllocation pa;
  pa.alpha2 = alpha2;
  pa.alpha1 = cfg.alpha_c - alpha2;
  pa.alpha_t = cfg.alpha_t;
  pa.snr_linear = snr_linear;
  return ctx.report(pa).r_total;
}

}  // namespace

TEST_CASE("optimizer configuration validation") {
  pw::PowerOptimizerConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  auto bad = cfg;
  bad.delta = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.alpha2_lo = 0.7;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.alpha2_init = 0.9;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.alpha_c = 0.9;
  bad.alpha_t = 0.3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.max_iters = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("feasible results respect the floor, the clip range and the budget") {
  const Instance inst(0);
  const auto ctx = inst.context();
  const pw::PowerOptimizerConfig cfg = inst.cfg.optimizer();
  for (const double snr_db : {0.0, 10.0, 20.0}) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    const auto res = pw::optimize(ctx, snr, 1.0, cfg, /*keep_trace=*/true);
    CHECK(res.iterations >= 1);
    CHECK(res.allocation.alpha2 >= cfg.alpha2_lo - 1e-12);
    CHECK(res.allocation.alpha2 <= cfg.alpha2_hi + 1e-12);
    CHECK(res.allocation.alpha1 + res.allocation.alpha2 ==
          doctest::Approx(cfg.alpha_c).epsilon(1e-12));
    if (res.feasible) {
      CHECK(res.r2 >= cfg.r_min - 1e-9);
    }
    CHECK(res.noma_order_flagged ==
          (res.allocation.alpha2 <= res.allocation.alpha1));
    for (const auto& row : res.trace) {
      CHECK(row.alpha2 >= cfg.alpha2_lo - 1e-12);
      CHECK(row.alpha2 <= cfg.alpha2_hi + 1e-12);
      if (row.feasible) CHECK(row.r2 >= cfg.r_min - 1e-9);
    }
  }
}

TEST_CASE("the returned point never loses to the first feasible point") {
  const Instance inst(1);
  const auto ctx = inst.context();
  const pw::PowerOptimizerConfig cfg = inst.cfg.optimizer();
  const auto res = pw::optimize(ctx, 10.0, 1.0, cfg, /*keep_trace=*/true);
  if (res.feasible) {
    double first_feasible = -1.0;
    for (const auto& row : res.trace) {
      if (row.feasible) {
        first_feasible = row.r_total;
        break;
      }
    }
    REQUIRE(first_feasible >= 0.0);
    CHECK(res.r_total >= first_feasible - 1e-12);
  }
}

TEST_CASE("an unreachable floor reports infeasible at the cap") {
  const Instance inst(2);
  const auto ctx = inst.context();
  auto cfg = inst.cfg.optimizer();
  cfg.r_min = 1e6;
  const auto res = pw::optimize(ctx, 10.0, 1.0, cfg);
  CHECK_FALSE(res.feasible);
  CHECK(res.allocation.alpha2 == doctest::Approx(cfg.alpha2_hi).epsilon(1e-12));
  const auto oracle = pw::oracle_grid_search(ctx, 10.0, 1.0, cfg, cfg.delta);
  CHECK_FALSE(oracle.feasible);
}

TEST_CASE("trace is kept only on request and bounded by max_iters") {
  const Instance inst(0);
  const auto ctx = inst.context();
  auto cfg = inst.cfg.optimizer();
  const auto quiet = pw::optimize(ctx, 10.0, 1.0, cfg, /*keep_trace=*/false);
  CHECK(quiet.trace.empty());
  const auto traced = pw::optimize(ctx, 10.0, 1.0, cfg, /*keep_trace=*/true);
  CHECK(static_cast<int>(traced.trace.size()) == traced.iterations);
  cfg.max_iters = 3;
  const auto capped = pw::optimize(ctx, 10.0, 1.0, cfg, /*keep_trace=*/true);
  CHECK(capped.iterations <= 3);
}

TEST_CASE("grid oracle validates its step") {
  const Instance inst(0);
  const auto ctx = inst.context();
  const auto cfg = inst.cfg.optimizer();
  CHECK_THROWS_AS(pw::oracle_grid_search(ctx, 10.0, 1.0, cfg, 0.0),
                  ConfigError);
  CHECK_THROWS_AS(pw::oracle_grid_search(ctx, 10.0, 1.0, cfg, cfg.delta * 2),
                  ConfigError);
}

TEST_CASE("greedy matches the grid oracle within one step's rate difference") {
  const pw::PowerOptimizerConfig base;
  for (int realization = 0; realization < 12; ++realization) {
    const Instance inst(realization);
    const auto ctx = inst.context();
    for (const double snr_db : {5.0, 15.0, 25.0}) {
      const double snr = std::pow(10.0, snr_db / 10.0);
      const auto greedy = pw::optimize(ctx, snr, 1.0, base, true);
      const auto oracle = pw::oracle_grid_search(ctx, snr, 1.0, base,
                                                 base.delta);
      if (greedy.feasible) CHECK(oracle.feasible);
      if (!oracle.feasible) continue;
      const double at = oracle.allocation.alpha2;
      const double rt_at = total_rate_at(ctx, at, snr, base);
      double step_diff = 0.0;
      if (at + base.delta <= base.alpha2_hi + 1e-12) {
        step_diff = std::max(
            step_diff,
            std::abs(rt_at - total_rate_at(ctx, at + base.delta, snr, base)));
      }
      if (at - base.delta >= base.alpha2_lo - 1e-12) {
        step_diff = std::max(
            step_diff,
            std::abs(rt_at - total_rate_at(ctx, at - base.delta, snr, base)));
      }
      CHECK(greedy.r_total >= oracle.r_total - step_diff - 1e-9);
    }
  }
}
