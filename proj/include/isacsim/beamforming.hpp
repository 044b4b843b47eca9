#pragma once

#include <vector>

#include "isacsim/channel.hpp"
#include "isacsim/numerics.hpp"

namespace isacsim {
namespace beamforming {

/// Dimension bundle for the hybrid transceiver.
struct BeamformerDims {
  int n_t = 64;      // BS antennas
  int n_r = 4;       // user antennas
  int n_r_rf = 4;    // user RF chains
  int n_radar = 4;   // radar receive antennas
  int n_s = 4;       // streams per beam
  int n_clusters = 2;

  int n_t_rf() const { return n_clusters * n_s; }
};

/// Analog + digital stages for one channel snapshot. Column convention
/// throughout: the first n_s columns of f_rf / f_bb drive the sensing
/// beam, the last n_s the communication beam.
struct HybridBeamformer {
  CMat f_rf;                  // n_t x (n_clusters*n_s), constant modulus
  std::vector<CMat> f_bb;     // per subcarrier, power-capped digital stage
  std::vector<CMat> f_bb_zf;  // per subcarrier, unit-trace ZF stage
  std::vector<CMat> w_user;   // per user, n_r x n_r_rf analog combiners
  CMat w_radar;               // n_radar x n_s radar combiner
  int strongest_subcarrier = 0;
  BeamformerDims dims;

  /// Full precoder f_rf * f_bb[k].
  CMat f_total(int k) const;
  /// Sensing columns of the full precoder.
  CMat f_sensing(int k) const;
  /// Communication columns of the full precoder.
  CMat f_comm(int k) const;
};

/// Index of the subcarrier with the largest Frobenius norm; ties resolve
/// to the lowest index.
int select_strongest_subcarrier(const std::vector<CMat>& h);

/// Constant-modulus combiner: (1/sqrt(n_rx)) * exp(j*arg(first n_rf
/// columns of pinv(h^H))). h is the receiver's channel at its strongest
/// subcarrier.
CMat design_analog_combiner(const CMat& h, int n_rf);

/// Composite channel stack [h_target; h_user1], target rows first so the
/// precoder's sensing columns come first.
CMat stack_composite_channel(const CMat& h_target, const CMat& h_user1);

/// Constant-modulus precoder: (1/sqrt(n_t)) * exp(j*arg(-stacked^H)).
CMat design_analog_precoder(const CMat& stacked);

/// Zero-forcing digital stage: pinv(effective) scaled to unit trace power
/// trace(f_bb f_bb^H) = 1. Effective-channel directions more than 40 dB
/// below the dominant singular value are dropped, not inverted, so the
/// unit-trace normalization cannot sink the power budget into them.
CMat design_digital_precoder(const CMat& effective);

/// Builds the full transceiver for the set's active channels. Combiners
/// are designed at each receiver's own strongest subcarrier; the analog
/// precoder at the stacked channel's strongest. The digital stage is
/// rescaled per subcarrier whenever trace((f_rf f_bb)(f_rf f_bb)^H)
/// exceeds p_max (the pre-rescale stage is kept in f_bb_zf).
HybridBeamformer assemble(const channel::SubcarrierChannelSet& set,
                          const BeamformerDims& dims, double p_max);

/// Constraint audit outcome; tolerances follow the hardware contract
/// (exact-modulus checks at 1e-12, power cap at 1e-9).
struct ConstraintReport {
  double max_c4_excess = 0.0;       // max_k trace(FF^H) - p_max
  double max_c6_deviation = 0.0;    // max |f_rf(i,j)|^2 - 1/n_t|
  double max_c7_deviation = 0.0;    // max over combiners of modulus error
  double max_zf_trace_error = 0.0;  // max_k |trace(f_bb_zf f_bb_zf^H) - 1|
  double analog_power_error = 0.0;  // |trace(f_rf^H f_rf) - n_t_rf|
  bool ok(double p_tol = 1e-9, double mod_tol = 1e-12) const;
};

ConstraintReport audit(const HybridBeamformer& bf, double p_max);

}  // namespace beamforming
}  // namespace isacsim
