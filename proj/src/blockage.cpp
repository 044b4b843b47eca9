#include "isacsim/blockage.hpp"

#include <cmath>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace blockage {

using channel::Object;
using channel::Variant;

double reflection_ratio(Object o, const channel::SubcarrierChannelSet& set,
                        const beamforming::HybridBeamformer& bf,
                        const rates::PowerAllocation& pa,
                        const rates::ReflectorSet& reflectors) {
  const bool sensing_beam = o == Object::target;
  const double p_beam = pa.beam_power(o);
  const double rho = reflectors.of(o);
  double received = 0.0;
  double transmitted = 0.0;
  for (int k = 0; k < set.k_subcarriers(); ++k) {
    const CMat f_beam = sensing_beam ? bf.f_sensing(k) : bf.f_comm(k);
    const CMat resp = bf.w_radar.adjoint() * set.echo(o, k) * f_beam;
    const double rn = rho * numerics::frobenius_norm(resp);
    const double tn = numerics::frobenius_norm(f_beam);
    received += p_beam * rn * rn;
    transmitted += p_beam * tn * tn;
  }
  if (!(transmitted > 0.0)) {
    throw NumericalFailure("reflection_ratio: zero transmit power in beam");
  }
  return received / transmitted;
}

BlockageDecision decide(Object o, double ratio, double expected_unblocked,
                        double expected_blocked, bool nlos_available) {
  if (!(expected_blocked < expected_unblocked)) {
    throw ConfigError(
        "blockage decide: blocked reference must lie below unblocked");
  }
  if (!(ratio > 0.0) || !(expected_blocked > 0.0)) {
    throw ConfigError("blockage decide: levels must be positive");
  }
  BlockageDecision d;
  d.object = o;
  d.ratio = ratio;
  d.expected_unblocked = expected_unblocked;
  d.expected_blocked = expected_blocked;
  const double midpoint =
      0.5 * (std::log(expected_unblocked) + std::log(expected_blocked));
  d.declared_blocked = std::log(ratio) < midpoint;
  if (d.declared_blocked) {
    d.action = nlos_available ? Action::switch_to_nlos : Action::keep_los;
    d.blocked_without_fallback = !nlos_available;
  }
  return d;
}

channel::SubcarrierChannelSet apply_switch(
    const channel::SubcarrierChannelSet& set,
    const std::array<BlockageDecision, 3>& decisions) {
  channel::SubcarrierChannelSet out = set;
  bool cluster_switch = false;
  for (const BlockageDecision& d : decisions) {
    if (d.object == Object::target) continue;
    if (d.action == Action::switch_to_nlos) cluster_switch = true;
  }
  if (cluster_switch) {
    out.of(Object::user1).active = Variant::nlos;
    out.of(Object::user2).active = Variant::nlos;
  }
  return out;
}

const char* action_name(Action a) {
  return a == Action::switch_to_nlos ? "switch_to_nlos" : "keep_los";
}

}  // namespace blockage
}  // namespace isacsim
