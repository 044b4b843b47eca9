#pragma once

#include <array>
#include <string>
#include <vector>

#include "isacsim/beamforming.hpp"
#include "isacsim/channel.hpp"
#include "isacsim/numerics.hpp"

namespace isacsim {
namespace rates {

/// NOMA power split. alpha1 + alpha2 = alpha_c (0.7 of budget), alpha_t
/// fixed; per-stream transmit powers scale with the SNR sweep factor:
/// p_i = alpha_i * total_budget * snr_linear.
struct PowerAllocation {
  double alpha1 = 0.25;      // strong user share
  double alpha2 = 0.45;      // weak user share
  double alpha_t = 0.30;     // sensing share
  double snr_linear = 1.0;
  double total_budget = 1.0;  // watts per subcarrier

  double p1() const { return alpha1 * total_budget * snr_linear; }
  double p2() const { return alpha2 * total_budget * snr_linear; }
  double p_target() const { return alpha_t * total_budget * snr_linear; }
  double p_comm_beam() const { return p1() + p2(); }
  /// Power carried by the beam that illuminates the object.
  double beam_power(channel::Object o) const {
    return o == channel::Object::target ? p_target() : p_comm_beam();
  }
  bool noma_order_violated() const { return alpha2 <= alpha1; }
  /// Validates ranges and the alpha1 + alpha2 = alpha_c coupling.
  void validate(double alpha_c = 0.7, double tol = 1e-12) const;
};

/// Radar cross-talk description: backscatter coefficients per object.
struct ReflectorSet {
  std::array<double, 3> rho{0.8, 0.5, 0.5};  // user1, user2, target

  double of(channel::Object o) const { return rho[static_cast<int>(o)]; }
};

/// Thermal noise floor: -173 dBm/Hz integrated over the bandwidth,
/// converted to watts.
double noise_variance_w(double bandwidth_hz);

/// Per-point rate bundle. Rates are bps/Hz per subcarrier; sums run over
/// the K subcarriers (and users / objects for the aggregate fields).
struct RateReport {
  std::vector<std::array<double, 2>> r_user;   // [k][user]
  std::vector<std::array<double, 3>> r_sense;  // [k][object]
  double r_comm_sum = 0.0;
  double r_sense_sum = 0.0;
  double r_total = 0.0;
  std::string scenario;
  double snr_db = 0.0;

  double user_sum(int user) const;
  double sense_sum_object(channel::Object o) const;
};

/// Cached combiner/precoder responses for one channel snapshot, so power
/// iterations only reassemble small covariances. Also the reference
/// implementation of the SINR assembly used by the public entry points.
class RateContext {
 public:
  RateContext(const channel::SubcarrierChannelSet& set,
              const beamforming::HybridBeamformer& bf,
              const ReflectorSet& reflectors, double noise_var);

  /// Noise-whitened Hermitian SINR matrix of a communication user:
  /// strong user (0) is interference-free after SIC, weak user (1) sees
  /// the strong user's power. Eigenvalue-equivalent to the textbook
  /// ratio p G G^H (interference + noise)^{-1} on the covariance's
  /// non-null subspace, so it can be smaller than n_r x n_r.
  CMat comm_sinr(int user, int k, const PowerAllocation& pa) const;

  /// Noise-whitened Hermitian SINR matrix of a sensed object, assembled
  /// within the beam that illuminates it: the other two reflectors'
  /// echoes of that same beam are the interference. Restricted to the
  /// covariance's non-null subspace like comm_sinr.
  CMat sensing_sinr(channel::Object o, int k, const PowerAllocation& pa) const;

  double comm_rate(int user, int k, const PowerAllocation& pa) const;
  double sensing_rate(channel::Object o, int k,
                      const PowerAllocation& pa) const;

  RateReport report(const PowerAllocation& pa) const;

  int k_subcarriers() const { return k_; }
  double noise_var() const { return noise_var_; }

 private:
  int k_;
  double noise_var_;
  ReflectorSet reflectors_;
  // comm_resp_[k][u] = W_u^H H_u F_comm; echo_resp_[k][o] is the echo
  // response through the full precoder, W_R^H E_o (F_rf F_bb), sliced
  // into its sensing / communication halves at the point of use.
  std::vector<std::array<CMat, 2>> comm_resp_;
  std::vector<std::array<CMat, 3>> echo_resp_;
  std::array<CMat, 2> comm_noise_;  // noise_var * W_i^H W_i
  CMat radar_noise_;                // noise_var * W_R^H W_R
};

/// Convenience single-call forms matching the context methods.
CMat comm_sinr_matrix(int user, int k, const channel::SubcarrierChannelSet& set,
                      const beamforming::HybridBeamformer& bf,
                      const PowerAllocation& pa, double noise_var);
CMat sensing_sinr_matrix(channel::Object o, int k,
                         const channel::SubcarrierChannelSet& set,
                         const beamforming::HybridBeamformer& bf,
                         const PowerAllocation& pa,
                         const ReflectorSet& reflectors, double noise_var);

}  // namespace rates
}  // namespace isacsim
