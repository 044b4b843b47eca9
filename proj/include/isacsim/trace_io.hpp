#pragma once

#include <iosfwd>
#include <string>

#include "isacsim/channel.hpp"

namespace isacsim {
namespace channel {

/// Channel trace text format, version 1.
///
///   ISACSIM_TRACE v1
///   k_subcarriers <K>
///   n_t <int>
///   n_r <int>
///   n_radar <int>
///   carrier_freq_hz <float>
///   bandwidth_hz <float>
///   object <user1|user2|target> variant <los|nlos|echo_los|echo_nlos> subcarrier <0..K-1>
///   <re>,<im> <re>,<im> ...        (one matrix row per line)
///
/// Blocks appear for every object in the fixed order user1, user2, target,
/// for every variant in the order los, nlos, echo_los, echo_nlos, and for
/// every subcarrier in ascending order. Forward blocks are n_r x n_t
/// (users) or n_radar x n_t (target); echo blocks are n_radar x n_t.
/// The parser is strict: malformed numbers or lines raise ParseError with
/// line/field positions, dimension or ordering violations raise SchemaError
/// naming the offending block.
struct TraceHeader {
  int k_subcarriers = 0;
  int n_t = 0;
  int n_r = 0;
  int n_radar = 0;
  double carrier_freq_hz = 0.0;
  double bandwidth_hz = 0.0;
};

void save_trace(std::ostream& out, const SubcarrierChannelSet& set,
                const TraceHeader& header);
void save_trace_file(const std::string& path, const SubcarrierChannelSet& set,
                     const TraceHeader& header);

/// Parses a trace; the returned set has active = LOS for all objects and
/// blockage_db = 0 (traces carry matrices, not scenario state).
SubcarrierChannelSet load_trace(std::istream& in, TraceHeader* header = nullptr);
SubcarrierChannelSet load_trace_file(const std::string& path,
                                     TraceHeader* header = nullptr);

}  // namespace channel
}  // namespace isacsim
