#include "isacsim/channel.hpp"

#include <cmath>

#include "isacsim/errors.hpp"

namespace isacsim {
namespace channel {

const char* object_name(Object o) {
  switch (o) {
    case Object::user1: return "user1";
    case Object::user2: return "user2";
    case Object::target: return "target";
  }
  return "?";
}

const char* variant_name(Variant v) {
  return v == Variant::los ? "los" : "nlos";
}

const CMat& SubcarrierChannelSet::forward(Object o, int k) const {
  const ObjectChannels& oc = of(o);
  return oc.active == Variant::los ? oc.los.at(k) : oc.nlos.at(k);
}

const CMat& SubcarrierChannelSet::echo(Object o, int k) const {
  const ObjectChannels& oc = of(o);
  return oc.active == Variant::los ? oc.echo_los.at(k) : oc.echo_nlos.at(k);
}

CVec steering_vector(const ArrayGeometry& g, double az, double el) {
  if (g.side <= 0) {
    throw ShapeError("steering_vector: array side must be positive");
  }
  const int n = g.n_elements();
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  const double ux = std::sin(el) * std::cos(az);
  const double uy = std::sin(el) * std::sin(az);
  CVec a(n);
  for (int m = 0; m < g.side; ++m) {
    for (int l = 0; l < g.side; ++l) {
      const double phase = 2.0 * M_PI * g.spacing * (m * ux + l * uy);
      a(m * g.side + l) = cplx(norm * std::cos(phase), norm * std::sin(phase));
    }
  }
  return a;
}

std::vector<double> subcarrier_frequencies(double carrier_hz,
                                           double bandwidth_hz, int k) {
  if (k <= 0) throw ConfigError("subcarrier_frequencies: k must be positive");
  if (bandwidth_hz <= 0.0) {
    throw ConfigError("subcarrier_frequencies: bandwidth must be positive");
  }
  std::vector<double> freqs(k);
  const double step = bandwidth_hz / static_cast<double>(k);
  for (int i = 1; i <= k; ++i) {
    freqs[i - 1] = carrier_hz + (i - 0.5 * (k + 1)) * step;
  }
  return freqs;
}

std::vector<CMat> synthesize_channel(const LinkSpec& link,
                                     const std::vector<double>& freqs_hz) {
  if (link.paths.empty()) {
    throw ConfigError("synthesize_channel: link has no paths");
  }
  const int n_rx = link.rx.n_elements();
  const int n_tx = link.tx.n_elements();
  std::vector<CMat> out;
  out.reserve(freqs_hz.size());
  for (double f : freqs_hz) {
    CMat h = CMat::Zero(n_rx, n_tx);
    for (const PathParams& p : link.paths) {
      const CVec a_rx = steering_vector(link.rx, p.aoa_az, p.aoa_el);
      const CVec a_tx = steering_vector(link.tx, p.aod_az, p.aod_el);
      const double ang = p.phase - 2.0 * M_PI * f * p.delay_s;
      const cplx coef = p.gain * cplx(std::cos(ang), std::sin(ang));
      h.noalias() += coef * (a_rx * a_tx.adjoint());
    }
    out.push_back(std::move(h));
  }
  return out;
}

CMat apply_blockage(const CMat& h, double blockage_db) {
  if (blockage_db < 0.0) {
    throw ConfigError("apply_blockage: blockage_db must be non-negative");
  }
  const double beta = std::pow(10.0, -blockage_db / 20.0);
  return beta * h;
}

LinkSpec echo_link(const LinkSpec& link, const ArrayGeometry& radar_rx) {
  LinkSpec echo = link;
  echo.rx = radar_rx;
  for (PathParams& p : echo.paths) {
    p.aoa_az = p.aod_az;
    p.aoa_el = p.aod_el;
  }
  return echo;
}

LinkSpec random_nlos_link(const LinkSpec& los, const NlosProfile& profile,
                          Rng& rng) {
  if (los.paths.empty()) {
    throw ConfigError("random_nlos_link: LOS anchor has no paths");
  }
  if (profile.min_paths < 1 || profile.max_paths < profile.min_paths) {
    throw ConfigError("random_nlos_link: invalid path count range");
  }
  double los_power = 0.0;
  for (const PathParams& p : los.paths) los_power += p.gain * p.gain;
  const PathParams& anchor = los.paths.front();

  const int span = profile.max_paths - profile.min_paths + 1;
  const int n_paths =
      profile.min_paths + static_cast<int>(rng.uniform_index(span));
  const double aggregate =
      los_power * std::pow(10.0, -profile.deficit_db / 10.0);
  const double per_path = aggregate / n_paths;

  LinkSpec nlos;
  nlos.tx = los.tx;
  nlos.rx = los.rx;
  nlos.paths.resize(n_paths);
  for (PathParams& p : nlos.paths) {
    const cplx g = rng.complex_gaussian(per_path);
    p.gain = std::abs(g);
    p.phase = std::arg(g);
    p.delay_s = rng.uniform(0.0, profile.delay_max_s);
    p.aod_az = anchor.aod_az + rng.uniform(-profile.angle_spread,
                                           profile.angle_spread);
    p.aod_el = anchor.aod_el + rng.uniform(-profile.angle_spread,
                                           profile.angle_spread);
    p.aoa_az = anchor.aoa_az + rng.uniform(-profile.angle_spread,
                                           profile.angle_spread);
    p.aoa_el = anchor.aoa_el + rng.uniform(-profile.angle_spread,
                                           profile.angle_spread);
  }
  return nlos;
}

}  // namespace channel
}  // namespace isacsim
