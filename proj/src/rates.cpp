#include "isacsim/rates.hpp"

#include <cmath>
#include <string>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace rates {

using channel::Object;
using channel::kObjects;

void PowerAllocation::validate(double alpha_c, double tol) const {
  if (alpha1 < 0.0 || alpha2 < 0.0 || alpha_t < 0.0) {
    throw ConfigError("power allocation: negative share");
  }
  if (std::abs(alpha1 + alpha2 - alpha_c) > tol) {
    throw ConfigError("power allocation: alpha1 + alpha2 = " +
                      std::to_string(alpha1 + alpha2) + ", expected " +
                      std::to_string(alpha_c));
  }
  if (snr_linear < 0.0 || total_budget <= 0.0) {
    throw ConfigError("power allocation: invalid sweep scaling");
  }
}

double noise_variance_w(double bandwidth_hz) {
  if (bandwidth_hz <= 0.0) {
    throw ConfigError("noise_variance_w: bandwidth must be positive");
  }
  const double dbm = -173.0 + 10.0 * std::log10(bandwidth_hz);
  return std::pow(10.0, dbm / 10.0) / 1000.0;
}

double RateReport::user_sum(int user) const {
  double s = 0.0;
  for (const auto& row : r_user) s += row.at(user);
  return s;
}

double RateReport::sense_sum_object(Object o) const {
  double s = 0.0;
  for (const auto& row : r_sense) s += row[static_cast<int>(o)];
  return s;
}

namespace {

// Hermitian SINR matrix on the covariance's non-null subspace. Rank-one
// propagation channels make cov rank-deficient, and the signal shares
// the null space, so the restriction leaves log det(I + .) unchanged.
CMat whitened_sinr(const CMat& signal, const CMat& cov) {
  return numerics::whitened_capacity(signal, cov);
}

}  // namespace

RateContext::RateContext(const channel::SubcarrierChannelSet& set,
                         const beamforming::HybridBeamformer& bf,
                         const ReflectorSet& reflectors, double noise_var)
    : k_(set.k_subcarriers()), noise_var_(noise_var), reflectors_(reflectors) {
  if (noise_var <= 0.0) {
    throw ConfigError("rate context: noise variance must be positive");
  }
  if (static_cast<int>(bf.f_bb.size()) != k_) {
    throw ShapeError("rate context: beamformer spans " +
                     std::to_string(bf.f_bb.size()) + " subcarriers, set " +
                     std::to_string(k_));
  }
  comm_resp_.resize(k_);
  echo_resp_.resize(k_);
  for (int k = 0; k < k_; ++k) {
    const CMat f_total = bf.f_total(k);
    const CMat f_comm = f_total.rightCols(bf.dims.n_s);
    for (int u = 0; u < 2; ++u) {
      const Object o = (u == 0) ? Object::user1 : Object::user2;
      comm_resp_[k][u] = bf.w_user[u].adjoint() * set.forward(o, k) * f_comm;
    }
    for (Object o : kObjects) {
      echo_resp_[k][static_cast<int>(o)] =
          bf.w_radar.adjoint() * set.echo(o, k) * f_total;
    }
  }
  for (int u = 0; u < 2; ++u) {
    comm_noise_[u] = noise_var * (bf.w_user[u].adjoint() * bf.w_user[u]);
  }
  radar_noise_ = noise_var * (bf.w_radar.adjoint() * bf.w_radar);
}

CMat RateContext::comm_sinr(int user, int k, const PowerAllocation& pa) const {
  if (user < 0 || user > 1) throw ShapeError("comm_sinr: user out of range");
  const CMat& g = comm_resp_.at(k)[user];
  const CMat gram = g * g.adjoint();
  const double own = (user == 0) ? pa.p1() : pa.p2();
  CMat cov = comm_noise_[user];
  if (user == 1) cov += pa.p1() * gram;
  return whitened_sinr(CMat(own * gram), cov);
}

CMat RateContext::sensing_sinr(Object o, int k,
                               const PowerAllocation& pa) const {
  const int n_s = static_cast<int>(echo_resp_.at(k)[0].cols()) / 2;
  const bool sensing_beam = o == Object::target;
  const double p_beam = pa.beam_power(o);
  auto beam_slice = [&](const CMat& full) {
    return sensing_beam ? full.leftCols(n_s) : full.rightCols(n_s);
  };
  CMat cov = radar_noise_;
  CMat signal;
  for (Object other : kObjects) {
    const CMat resp = beam_slice(echo_resp_[k][static_cast<int>(other)]);
    const double rho = reflectors_.of(other);
    const CMat gram = p_beam * rho * rho * (resp * resp.adjoint());
    if (other == o) {
      signal = gram;
    } else {
      cov += gram;
    }
  }
  return whitened_sinr(signal, cov);
}

double RateContext::comm_rate(int user, int k,
                              const PowerAllocation& pa) const {
  return numerics::log_det_capacity(comm_sinr(user, k, pa));
}

double RateContext::sensing_rate(Object o, int k,
                                 const PowerAllocation& pa) const {
  return numerics::log_det_capacity(sensing_sinr(o, k, pa));
}

RateReport RateContext::report(const PowerAllocation& pa) const {
  RateReport rep;
  rep.r_user.resize(k_);
  rep.r_sense.resize(k_);
  for (int k = 0; k < k_; ++k) {
    for (int u = 0; u < 2; ++u) {
      rep.r_user[k][u] = comm_rate(u, k, pa);
      rep.r_comm_sum += rep.r_user[k][u];
    }
    for (Object o : kObjects) {
      rep.r_sense[k][static_cast<int>(o)] = sensing_rate(o, k, pa);
      rep.r_sense_sum += rep.r_sense[k][static_cast<int>(o)];
    }
  }
  rep.r_total = rep.r_comm_sum + rep.r_sense_sum;
  return rep;
}

CMat comm_sinr_matrix(int user, int k, const channel::SubcarrierChannelSet& set,
                      const beamforming::HybridBeamformer& bf,
                      const PowerAllocation& pa, double noise_var) {
  const RateContext ctx(set, bf, ReflectorSet{}, noise_var);
  return ctx.comm_sinr(user, k, pa);
}

CMat sensing_sinr_matrix(Object o, int k,
                         const channel::SubcarrierChannelSet& set,
                         const beamforming::HybridBeamformer& bf,
                         const PowerAllocation& pa,
                         const ReflectorSet& reflectors, double noise_var) {
  const RateContext ctx(set, bf, reflectors, noise_var);
  return ctx.sensing_sinr(o, k, pa);
}

}  // namespace rates
}  // namespace isacsim
