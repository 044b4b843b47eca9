#pragma once

#include <array>
#include <string>
#include <vector>

#include "isacsim/numerics.hpp"
#include "isacsim/rng.hpp"

namespace isacsim {
namespace channel {

/// Uniform square array in the xy-plane, half-wavelength pitch by default.
struct ArrayGeometry {
  int side = 8;           // elements per dimension, n_elements = side^2
  double spacing = 0.5;   // element pitch in wavelengths

  int n_elements() const { return side * side; }
};

/// One propagation path of a link.
struct PathParams {
  double gain = 1.0;         // amplitude |gamma| (linear)
  double phase = 0.0;        // random phase shift Phi (radians)
  double delay_s = 0.0;      // absolute delay tau (seconds)
  double aod_az = 0.0;       // departure azimuth at the BS (radians)
  double aod_el = 0.0;       // departure elevation (radians)
  double aoa_az = 0.0;       // arrival azimuth at the receiver (radians)
  double aoa_el = 0.0;       // arrival elevation (radians)
};

/// A BS-to-receiver link: path list plus both array geometries.
struct LinkSpec {
  std::vector<PathParams> paths;  // size L >= 1; L == 1 means LOS
  ArrayGeometry tx;
  ArrayGeometry rx;
};

enum class Object { user1 = 0, user2 = 1, target = 2 };
enum class Variant { los = 0, nlos = 1 };

constexpr std::array<Object, 3> kObjects{Object::user1, Object::user2,
                                         Object::target};

const char* object_name(Object o);
const char* variant_name(Variant v);

/// Per-object channel data over K subcarriers. Forward matrices are
/// rx-side (n_r x n_t for users, n_radar x n_t for the target); echo
/// matrices are the monostatic backscatter observed at the radar array
/// (n_radar x n_t for every object).
struct ObjectChannels {
  std::vector<CMat> los;        // K forward matrices
  std::vector<CMat> nlos;       // K forward matrices
  std::vector<CMat> echo_los;   // K echo matrices
  std::vector<CMat> echo_nlos;  // K echo matrices
  Variant active = Variant::los;
  double blockage_db = 0.0;     // attenuation injected into the LOS variant
};

/// The full channel state handed to beamforming, rates and blockage.
struct SubcarrierChannelSet {
  std::array<ObjectChannels, 3> objects;
  std::vector<double> freqs_hz;  // K subcarrier frequencies

  int k_subcarriers() const { return static_cast<int>(freqs_hz.size()); }
  ObjectChannels& of(Object o) { return objects[static_cast<int>(o)]; }
  const ObjectChannels& of(Object o) const {
    return objects[static_cast<int>(o)];
  }
  /// Matrix selected by the object's active variant.
  const CMat& forward(Object o, int k) const;
  const CMat& echo(Object o, int k) const;
};

/// Unit-norm steering vector of a uniform square array. Entry for raster
/// position (m, n), m,n in [0, side): exp(j*2*pi*spacing*(m*sin(el)*cos(az)
/// + n*sin(el)*sin(az))) / sqrt(n_elements), raster index = m*side + n.
CVec steering_vector(const ArrayGeometry& g, double az, double el);

/// Subcarrier grid f_k = f_c + (k - (K+1)/2) * bandwidth / K for k = 1..K
/// (returned 0-indexed).
std::vector<double> subcarrier_frequencies(double carrier_hz,
                                           double bandwidth_hz, int k);

/// Multipath matrix H(f) = sum_l gain_l e^{j phase_l} e^{-j 2 pi f tau_l}
/// a_rx(aoa) a_tx(aod)^H, one matrix per requested frequency.
std::vector<CMat> synthesize_channel(const LinkSpec& link,
                                     const std::vector<double>& freqs_hz);

/// Returns beta * h with amplitude beta = 10^(-blockage_db/20), so the
/// received power drops by blockage_db dB. blockage_db must be >= 0.
CMat apply_blockage(const CMat& h, double blockage_db);

/// Monostatic echo of a link: same paths, arrival redirected back to the
/// BS (AoA := AoD) and received on the radar subarray geometry.
LinkSpec echo_link(const LinkSpec& link, const ArrayGeometry& radar_rx);

/// Parameters of the random NLOS fallback draw.
struct NlosProfile {
  int min_paths = 2;
  int max_paths = 4;
  double deficit_db = 3.0;        // aggregate power deficit vs the LOS link
  double delay_max_s = 100e-9;
  double angle_spread = 20.0 * M_PI / 180.0;  // uniform jitter around LOS
};

/// Draws an NLOS link around a LOS anchor: L ~ U{min..max} paths, complex
/// Gaussian gains with per-path power (los_power - deficit)/L, delays
/// U[0, delay_max], angles jittered +-angle_spread about the LOS angles.
LinkSpec random_nlos_link(const LinkSpec& los, const NlosProfile& profile,
                          Rng& rng);

}  // namespace channel
}  // namespace isacsim
