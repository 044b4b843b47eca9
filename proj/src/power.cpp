#include "isacsim/power.hpp"

#include <cmath>
#include <optional>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace power {

using channel::Object;
using rates::PowerAllocation;
using rates::RateContext;

void PowerOptimizerConfig::validate() const {
  if (r_min < 0.0) throw ConfigError("optimizer: r_min must be nonnegative");
  if (delta <= 0.0) throw ConfigError("optimizer: delta must be positive");
  if (max_iters < 1) throw ConfigError("optimizer: max_iters must be >= 1");
  if (alpha_c <= 0.0 || alpha_c >= 1.0) {
    throw ConfigError("optimizer: alpha_c must lie in (0, 1)");
  }
  if (alpha_t < 0.0 || alpha_c + alpha_t > 1.0 + 1e-12) {
    throw ConfigError("optimizer: alpha_c + alpha_t exceeds the budget");
  }
  if (!(alpha2_lo < alpha2_hi)) {
    throw ConfigError("optimizer: empty alpha2 range");
  }
  if (alpha2_lo <= 0.0 || alpha2_hi >= alpha_c) {
    throw ConfigError("optimizer: alpha2 range must sit inside (0, alpha_c)");
  }
  if (alpha2_init < alpha2_lo - 1e-12 || alpha2_init > alpha2_hi + 1e-12) {
    throw ConfigError("optimizer: alpha2_init outside the clip range");
  }
  if (improve_eps < 0.0) {
    throw ConfigError("optimizer: improve_eps must be nonnegative");
  }
}

namespace {

struct EvalPoint {
  double alpha2 = 0.0;
  double floor_metric = 0.0;  // weak-user rate under the floor's convention
  double r_total = 0.0;
};

// Strictness margin keeps the order predicate stable across the two
// step-grid representations of the same nominal alpha2.
bool noma_order_ok(double alpha2, double alpha_c) {
  return alpha2 > 0.5 * alpha_c + 1e-9;
}

class Evaluator {
 public:
  Evaluator(const RateContext& ctx, double snr_linear, double total_budget,
            const PowerOptimizerConfig& cfg)
      : ctx_(ctx), snr_(snr_linear), budget_(total_budget), cfg_(cfg) {
    const PowerAllocation pa = allocation(cfg.alpha2_init);
    for (int k = 0; k < ctx.k_subcarriers(); ++k) {
      for (Object o : channel::kObjects) {
        sense_sum_ += ctx.sensing_rate(o, k, pa);
      }
    }
  }

  PowerAllocation allocation(double alpha2) const {
    PowerAllocation pa;
    pa.alpha1 = cfg_.alpha_c - alpha2;
    pa.alpha2 = alpha2;
    pa.alpha_t = cfg_.alpha_t;
    pa.snr_linear = snr_;
    pa.total_budget = budget_;
    return pa;
  }

  EvalPoint eval(double alpha2) const {
    const PowerAllocation pa = allocation(alpha2);
    EvalPoint p;
    p.alpha2 = alpha2;
    double r1_sum = 0.0, r2_sum = 0.0, r2_min = 0.0;
    for (int k = 0; k < ctx_.k_subcarriers(); ++k) {
      r1_sum += ctx_.comm_rate(0, k, pa);
      const double r2k = ctx_.comm_rate(1, k, pa);
      r2_sum += r2k;
      r2_min = (k == 0) ? r2k : std::min(r2_min, r2k);
    }
    p.floor_metric = cfg_.r_min_per_subcarrier ? r2_min : r2_sum;
    p.r_total = r1_sum + r2_sum + sense_sum_;
    return p;
  }

  bool floor_ok(const EvalPoint& p) const {
    return p.floor_metric >= cfg_.r_min;
  }
  bool feasible(const EvalPoint& p) const {
    return floor_ok(p) && noma_order_ok(p.alpha2, cfg_.alpha_c);
  }

 private:
  const RateContext& ctx_;
  double snr_;
  double budget_;
  const PowerOptimizerConfig& cfg_;
  double sense_sum_ = 0.0;
};

OptimizeResult finish(const Evaluator& ev, const EvalPoint& p, bool feasible,
                      int iterations, std::vector<TraceRow> trace) {
  OptimizeResult res;
  res.allocation = ev.allocation(p.alpha2);
  res.r_total = p.r_total;
  res.r2 = p.floor_metric;
  res.feasible = feasible;
  res.noma_order_flagged = res.allocation.noma_order_violated();
  res.iterations = iterations;
  res.trace = std::move(trace);
  return res;
}

}  // namespace

OptimizeResult optimize(const RateContext& ctx, double snr_linear,
                        double total_budget, const PowerOptimizerConfig& cfg,
                        bool keep_trace) {
  cfg.validate();
  const Evaluator ev(ctx, snr_linear, total_budget, cfg);
  std::vector<TraceRow> trace;
  int iters = 0;
  auto visit = [&](double alpha2) {
    const EvalPoint p = ev.eval(alpha2);
    ++iters;
    if (keep_trace) {
      trace.push_back(
          {iters, p.alpha2, p.floor_metric, p.r_total, ev.feasible(p)});
    }
    return p;
  };

  EvalPoint cur = visit(cfg.alpha2_init);
  if (!ev.feasible(cur)) {
    bool found = false;
    for (int m = 1; iters < cfg.max_iters; ++m) {
      const double alpha2 = cfg.alpha2_init + m * cfg.delta;
      if (alpha2 > cfg.alpha2_hi + 1e-12) break;
      cur = visit(alpha2);
      if (ev.feasible(cur)) {
        found = true;
        break;
      }
    }
    if (!found) return finish(ev, cur, false, iters, std::move(trace));
  }

  // Hill-climb from the feasible point: prefer shifting power to the
  // strong user, take the opposite step when that is the improving
  // direction, stop when neither neighbour beats the current total rate.
  // Every accepted move strictly improves, so the walk cannot revisit.
  while (iters < cfg.max_iters) {
    const double down = cur.alpha2 - cfg.delta;
    if (down >= cfg.alpha2_lo - 1e-12 && noma_order_ok(down, cfg.alpha_c)) {
      const EvalPoint cand = visit(down);
      if (ev.floor_ok(cand) && cand.r_total > cur.r_total + cfg.improve_eps) {
        cur = cand;
        continue;
      }
    }
    if (iters >= cfg.max_iters) break;
    const double up = cur.alpha2 + cfg.delta;
    if (up <= cfg.alpha2_hi + 1e-12) {
      const EvalPoint cand = visit(up);
      if (ev.floor_ok(cand) && cand.r_total > cur.r_total + cfg.improve_eps) {
        cur = cand;
        continue;
      }
    }
    break;
  }
  return finish(ev, cur, true, iters, std::move(trace));
}

OptimizeResult oracle_grid_search(const RateContext& ctx, double snr_linear,
                                  double total_budget,
                                  const PowerOptimizerConfig& cfg,
                                  double grid_step) {
  cfg.validate();
  if (grid_step <= 0.0 || grid_step > cfg.delta + 1e-15) {
    throw ConfigError(
        "oracle_grid_search: grid_step must lie in (0, delta]");
  }
  const Evaluator ev(ctx, snr_linear, total_budget, cfg);
  std::optional<EvalPoint> best_feasible;
  std::optional<EvalPoint> best_floor;
  int iters = 0;
  for (int i = 0;; ++i) {
    const double alpha2 = cfg.alpha2_lo + i * grid_step;
    if (alpha2 > cfg.alpha2_hi + 1e-12) break;
    const EvalPoint p = ev.eval(alpha2);
    ++iters;
    if (ev.feasible(p) &&
        (!best_feasible || p.r_total >= best_feasible->r_total)) {
      best_feasible = p;
    }
    if (!best_floor || p.floor_metric >= best_floor->floor_metric) {
      best_floor = p;
    }
  }
  if (best_feasible) {
    return finish(ev, *best_feasible, true, iters, {});
  }
  return finish(ev, *best_floor, false, iters, {});
}

}  // namespace power
}  // namespace isacsim
