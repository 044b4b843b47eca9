#pragma once

#include <array>
#include <string>

#include "isacsim/rates.hpp"

namespace isacsim {
namespace blockage {

enum class Action { keep_los = 0, switch_to_nlos = 1 };

/// Outcome of the backscatter test for one object.
struct BlockageDecision {
  channel::Object object = channel::Object::user1;
  double ratio = 0.0;               // measured reflected/transmitted power
  double expected_unblocked = 0.0;  // reference level, unblocked echo
  double expected_blocked = 0.0;    // reference level, blocked echo
  bool declared_blocked = false;
  Action action = Action::keep_los;
  /// Blockage declared but no NLOS fallback was available.
  bool blocked_without_fallback = false;
};

/// Received-to-transmitted signal power ratio for one object's echo:
/// sum_k p_beam * ||rho_o W_R^H E_o(k) F_beam(k)||_F^2 over
/// sum_k p_beam * ||F_beam(k)||_F^2. Users are probed through the
/// communication beam, the dedicated target through the sensing beam.
double reflection_ratio(channel::Object o,
                        const channel::SubcarrierChannelSet& set,
                        const beamforming::HybridBeamformer& bf,
                        const rates::PowerAllocation& pa,
                        const rates::ReflectorSet& reflectors);

/// Declares blockage when the measured ratio falls below the log-domain
/// midpoint of the two expected levels; a ratio exactly at the midpoint
/// favors LOS. expected_blocked must be strictly below expected_unblocked.
BlockageDecision decide(channel::Object o, double ratio,
                        double expected_unblocked, double expected_blocked,
                        bool nlos_available);

/// Applies decisions to a copy of the set: a blocked user with an NLOS
/// fallback flips the whole user cluster (both users) to NLOS. Matrix
/// data is never modified and the call is idempotent. The target never
/// switches.
channel::SubcarrierChannelSet apply_switch(
    const channel::SubcarrierChannelSet& set,
    const std::array<BlockageDecision, 3>& decisions);

const char* action_name(Action a);

}  // namespace blockage
}  // namespace isacsim
