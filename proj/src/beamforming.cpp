#include "isacsim/beamforming.hpp"

#include <cmath>
#include <string>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace beamforming {

using channel::Object;
using channel::SubcarrierChannelSet;

CMat HybridBeamformer::f_total(int k) const {
  return f_rf * f_bb.at(k);
}

CMat HybridBeamformer::f_sensing(int k) const {
  return f_total(k).leftCols(dims.n_s);
}

CMat HybridBeamformer::f_comm(int k) const {
  return f_total(k).rightCols(dims.n_s);
}

int select_strongest_subcarrier(const std::vector<CMat>& h) {
  if (h.empty()) throw ShapeError("select_strongest_subcarrier: empty set");
  int best = 0;
  double best_norm = numerics::frobenius_norm(h[0]);
  for (size_t k = 1; k < h.size(); ++k) {
    const double n = numerics::frobenius_norm(h[k]);
    if (n > best_norm) {
      best_norm = n;
      best = static_cast<int>(k);
    }
  }
  return best;
}

CMat design_analog_combiner(const CMat& h, int n_rf) {
  if (n_rf <= 0 || n_rf > h.rows()) {
    throw ShapeError("design_analog_combiner: n_rf " + std::to_string(n_rf) +
                     " out of range for " + std::to_string(h.rows()) +
                     " receive antennas");
  }
  const CMat pinv_hh = numerics::pseudo_inverse(numerics::hermitian(h));
  const CMat lead = pinv_hh.leftCols(n_rf);
  return numerics::phase_matrix(lead, 1.0 / std::sqrt(double(h.rows())));
}

CMat stack_composite_channel(const CMat& h_target, const CMat& h_user1) {
  if (h_target.cols() != h_user1.cols()) {
    throw ShapeError("stack_composite_channel: column mismatch " +
                     std::to_string(h_target.cols()) + " vs " +
                     std::to_string(h_user1.cols()));
  }
  CMat stacked(h_target.rows() + h_user1.rows(), h_target.cols());
  stacked.topRows(h_target.rows()) = h_target;
  stacked.bottomRows(h_user1.rows()) = h_user1;
  return stacked;
}

CMat design_analog_precoder(const CMat& stacked) {
  const CMat neg_herm = -numerics::hermitian(stacked);
  return numerics::phase_matrix(neg_herm,
                                1.0 / std::sqrt(double(stacked.cols())));
}

CMat design_digital_precoder(const CMat& effective) {
  // Conditioning guard: inverting a direction at s = x * s_max costs
  // 1/x^2 of the unit trace, so directions more than 40 dB below the
  // dominant one would absorb nearly all transmit power for streams
  // that carry no usable rate. Scattered-path effective channels do
  // produce such directions; they are dropped instead of inverted.
  constexpr double kZfConditioningCutoff = 1e-2;
  const CMat zf = numerics::pseudo_inverse(effective, kZfConditioningCutoff);
  const double power = numerics::trace_of(zf * numerics::hermitian(zf)).real();
  if (!(power > 0.0)) {
    throw NumericalFailure("design_digital_precoder: zero-power ZF stage");
  }
  return zf / std::sqrt(power);
}

HybridBeamformer assemble(const SubcarrierChannelSet& set,
                          const BeamformerDims& dims, double p_max) {
  if (p_max <= 0.0) throw ConfigError("assemble: p_max must be positive");
  const int k_sub = set.k_subcarriers();
  if (k_sub == 0) throw ShapeError("assemble: channel set is empty");

  HybridBeamformer bf;
  bf.dims = dims;

  std::vector<CMat> fwd_user1(k_sub), echo_target(k_sub), stacked(k_sub);
  for (int k = 0; k < k_sub; ++k) {
    fwd_user1[k] = set.forward(Object::user1, k);
    echo_target[k] = set.echo(Object::target, k);
  }

  for (int u = 0; u < 2; ++u) {
    const Object o = (u == 0) ? Object::user1 : Object::user2;
    std::vector<CMat> fwd(k_sub);
    for (int k = 0; k < k_sub; ++k) fwd[k] = set.forward(o, k);
    const int k_star = select_strongest_subcarrier(fwd);
    bf.w_user.push_back(design_analog_combiner(fwd[k_star], dims.n_r_rf));
  }
  {
    const int k_star = select_strongest_subcarrier(echo_target);
    bf.w_radar = design_analog_combiner(echo_target[k_star], dims.n_s);
  }

  for (int k = 0; k < k_sub; ++k) {
    stacked[k] = stack_composite_channel(echo_target[k], fwd_user1[k]);
  }
  bf.strongest_subcarrier = select_strongest_subcarrier(stacked);
  bf.f_rf = design_analog_precoder(stacked[bf.strongest_subcarrier]);

  bf.f_bb.resize(k_sub);
  bf.f_bb_zf.resize(k_sub);
  for (int k = 0; k < k_sub; ++k) {
    const CMat eff = stack_composite_channel(
        bf.w_radar.adjoint() * echo_target[k] * bf.f_rf,
        bf.w_user[0].adjoint() * fwd_user1[k] * bf.f_rf);
    bf.f_bb_zf[k] = design_digital_precoder(eff);
    const CMat full = bf.f_rf * bf.f_bb_zf[k];
    const double power =
        numerics::trace_of(full * numerics::hermitian(full)).real();
    bf.f_bb[k] = (power > p_max) ? CMat(bf.f_bb_zf[k] * std::sqrt(p_max / power))
                                 : bf.f_bb_zf[k];
  }
  return bf;
}

bool ConstraintReport::ok(double p_tol, double mod_tol) const {
  return max_c4_excess <= p_tol && max_c6_deviation <= mod_tol &&
         max_c7_deviation <= mod_tol && max_zf_trace_error <= p_tol &&
         analog_power_error <= p_tol;
}

namespace {

double max_modulus_deviation(const CMat& m, double target_sq) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      worst = std::max(worst, std::abs(std::norm(m(i, j)) - target_sq));
    }
  }
  return worst;
}

}  // namespace

ConstraintReport audit(const HybridBeamformer& bf, double p_max) {
  ConstraintReport rep;
  for (size_t k = 0; k < bf.f_bb.size(); ++k) {
    const CMat full = bf.f_rf * bf.f_bb[k];
    const double power =
        numerics::trace_of(full * numerics::hermitian(full)).real();
    rep.max_c4_excess = std::max(rep.max_c4_excess, power - p_max);
    const CMat& zf = bf.f_bb_zf[k];
    const double zf_trace =
        numerics::trace_of(zf * numerics::hermitian(zf)).real();
    rep.max_zf_trace_error =
        std::max(rep.max_zf_trace_error, std::abs(zf_trace - 1.0));
  }
  rep.max_c6_deviation =
      max_modulus_deviation(bf.f_rf, 1.0 / double(bf.dims.n_t));
  for (const CMat& w : bf.w_user) {
    rep.max_c7_deviation = std::max(
        rep.max_c7_deviation,
        max_modulus_deviation(w, 1.0 / double(bf.dims.n_r)));
  }
  rep.max_c7_deviation = std::max(
      rep.max_c7_deviation,
      max_modulus_deviation(bf.w_radar, 1.0 / double(bf.dims.n_radar)));
  const double analog_power =
      numerics::trace_of(numerics::hermitian(bf.f_rf) * bf.f_rf).real();
  rep.analog_power_error =
      std::abs(analog_power - double(bf.dims.n_t_rf()));
  return rep;
}

}  // namespace beamforming
}  // namespace isacsim
