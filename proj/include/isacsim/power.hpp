#pragma once

#include <vector>

#include "isacsim/rates.hpp"

namespace isacsim {
namespace power {

struct PowerOptimizerConfig {
  double r_min = 2.0;        // weak-user floor, bps/Hz summed over K
  double delta = 0.01;       // step size on alpha2
  int max_iters = 200;
  double alpha_c = 0.7;      // communication share, alpha1 + alpha2
  double alpha_t = 0.3;      // sensing share (fixed)
  double alpha2_init = 0.45;
  double alpha2_lo = 0.15;   // clip range; alpha2 <= alpha_c/2 is flagged,
  double alpha2_hi = 0.65;   // not rejected
  double improve_eps = 1e-9; // accepted moves must beat this margin
  bool r_min_per_subcarrier = false;  // floor applied per subcarrier instead

  void validate() const;
};

struct TraceRow {
  int iter = 0;
  double alpha2 = 0.0;
  double r2 = 0.0;       // weak-user rate under the floor's convention
  double r_total = 0.0;
  bool feasible = false;
};

struct OptimizeResult {
  rates::PowerAllocation allocation;
  double r_total = 0.0;
  double r2 = 0.0;
  bool feasible = false;            // floor met at the returned point
  bool noma_order_flagged = false;  // alpha2 <= alpha1 at the returned point
  int iterations = 0;
  std::vector<TraceRow> trace;
};

/// Greedy step search on alpha2 from alpha2_init: infeasible points climb
/// toward the cap until the weak-user floor is met, then the walk takes
/// whichever neighbouring step improves the total rate while the floor
/// holds, preferring the move that shifts power to the strong user, and
/// stops when neither direction improves. Infeasible at the cap returns
/// the best-effort allocation with feasible = false.
OptimizeResult optimize(const rates::RateContext& ctx, double snr_linear,
                        double total_budget, const PowerOptimizerConfig& cfg,
                        bool keep_trace = false);

/// Exhaustive reference: scans alpha2 over [alpha2_lo, alpha2_hi] with
/// grid_step (must not exceed cfg.delta), keeps points meeting the floor
/// with alpha2 strictly above alpha_c/2, and returns the highest total
/// rate (ties resolve to the larger alpha2). Empty feasible set returns
/// feasible = false with the best-floor point.
OptimizeResult oracle_grid_search(const rates::RateContext& ctx,
                                  double snr_linear, double total_budget,
                                  const PowerOptimizerConfig& cfg,
                                  double grid_step);

}  // namespace power
}  // namespace isacsim
