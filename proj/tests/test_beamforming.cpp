#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "isacsim/beamforming.hpp"
#include "isacsim/errors.hpp"
#include "isacsim/harness.hpp"
#include "isacsim/numerics.hpp"
#include "isacsim/rng.hpp"

using isacsim::CMat;
using isacsim::Rng;
using isacsim::ShapeError;
using isacsim::cplx;
namespace bf = isacsim::beamforming;
namespace num = isacsim::numerics;

namespace {

CMat random_complex(int rows, int cols, Rng& rng) {
  CMat m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = rng.complex_gaussian(1.0);
  }
  return m;
}

// square complex matrix with sigma_min/sigma_max above the ZF guard
CMat well_conditioned(int n, Rng& rng) {
  for (;;) {
    const CMat a = random_complex(n, n, rng);
    Eigen::JacobiSVD<CMat> svd(a);
    const auto& s = svd.singularValues();
    if (s(n - 1) > 2e-2 * s(0)) return a;
  }
}

bf::HybridBeamformer default_beamformer() {
  isacsim::config::SystemConfig cfg;
  const auto set = isacsim::harness::synthesize_point_channels(cfg, 0, 0, 0);
  return bf::assemble(set, cfg.dims(), cfg.p_max_w);
}

}  // namespace

TEST_CASE("strongest subcarrier selection breaks ties low") {
  Rng rng(21);
  const CMat a = random_complex(3, 3, rng);
  CHECK(bf::select_strongest_subcarrier({a, a}) == 0);
  CHECK(bf::select_strongest_subcarrier({a, CMat(2.0 * a)}) == 1);
  CHECK(bf::select_strongest_subcarrier({CMat(2.0 * a), a}) == 0);
}

TEST_CASE("digital precoder oracle on a diagonal effective channel") {
  CMat eff = CMat::Zero(2, 2);
  eff(0, 0) = 1.0;
  eff(1, 1) = 2.0;
  const CMat f = bf::design_digital_precoder(eff);
  // pinv = diag(1, 0.5), trace power 1.25
  CHECK(std::abs(f(0, 0) - cplx(0.8944271909999159)) < 1e-12);
  CHECK(std::abs(f(1, 1) - cplx(0.4472135954999579)) < 1e-12);
  CHECK(std::abs(f(0, 1)) < 1e-15);
  CHECK(std::abs(num::trace_of(f * f.adjoint()).real() - 1.0) < 1e-12);
}

TEST_CASE("digital precoder drops directions 40 dB below the dominant one") {
  CMat eff = CMat::Zero(2, 2);
  eff(0, 0) = 1.0;
  eff(1, 1) = 1e-3;  // below the conditioning guard
  const CMat f = bf::design_digital_precoder(eff);
  CHECK(std::abs(f(1, 1)) == 0.0);
  CHECK(std::abs(f(0, 0) - cplx(1.0)) < 1e-12);
  // a direction above the guard is still inverted
  eff(1, 1) = 0.5;
  const CMat g = bf::design_digital_precoder(eff);
  CHECK(std::abs(g(1, 1)) > std::abs(g(0, 0)));
}

TEST_CASE("digital precoder diagonalizes well-conditioned channels") {
  Rng rng(22);
  for (int rep = 0; rep < 25; ++rep) {
    const CMat eff = well_conditioned(6, rng);
    const CMat f = bf::design_digital_precoder(eff);
    const CMat prod = eff * f;
    double diag = 0.0, off = 0.0;
    for (int j = 0; j < 6; ++j) {
      for (int i = 0; i < 6; ++i) {
        const double p = std::norm(prod(i, j));
        (i == j ? diag : off) += p;
      }
    }
    CHECK(off / diag < 1e-6);
    CHECK(std::abs(num::trace_of(f * f.adjoint()).real() - 1.0) < 1e-9);
  }
}

TEST_CASE("analog precoder is constant modulus with the stacked phases") {
  Rng rng(23);
  const CMat stacked = random_complex(8, 16, rng);
  const CMat f = bf::design_analog_precoder(stacked);
  CHECK(f.rows() == 16);
  CHECK(f.cols() == 8);
  const double want = 1.0 / 16.0;  // (1/sqrt(16))^2
  for (int j = 0; j < f.cols(); ++j) {
    for (int i = 0; i < f.rows(); ++i) {
      CHECK(std::abs(std::norm(f(i, j)) - want) < 1e-12);
    }
  }
  // phases follow -stacked^H
  const cplx ref = -std::conj(stacked(3, 5));
  CHECK(std::abs(std::arg(f(5, 3)) - std::arg(ref)) < 1e-12);
}

TEST_CASE("analog combiner modulus and RF-chain bounds") {
  Rng rng(24);
  const CMat h = random_complex(4, 16, rng);
  const CMat w = bf::design_analog_combiner(h, 4);
  CHECK(w.rows() == 4);
  CHECK(w.cols() == 4);
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) {
      CHECK(std::abs(std::norm(w(i, j)) - 0.25) < 1e-12);
    }
  }
  CHECK_THROWS_AS(bf::design_analog_combiner(h, 0), ShapeError);
  CHECK_THROWS_AS(bf::design_analog_combiner(h, 5), ShapeError);
}

TEST_CASE("composite stack puts the sensing rows first") {
  Rng rng(25);
  const CMat ht = random_complex(2, 6, rng);
  const CMat hu = random_complex(3, 6, rng);
  const CMat s = bf::stack_composite_channel(ht, hu);
  CHECK(s.rows() == 5);
  CHECK(s.topRows(2) == ht);
  CHECK(s.bottomRows(3) == hu);
  CHECK_THROWS_AS(bf::stack_composite_channel(ht, random_complex(3, 5, rng)),
                  ShapeError);
}

TEST_CASE("assembled transceiver has the contracted shapes") {
  const auto b = default_beamformer();
  CHECK(b.f_rf.rows() == 64);
  CHECK(b.f_rf.cols() == 8);
  REQUIRE(b.f_bb.size() == 2);
  CHECK(b.f_bb[0].rows() == 8);
  CHECK(b.f_bb[0].cols() == 8);
  REQUIRE(b.w_user.size() == 2);
  CHECK(b.w_user[0].rows() == 4);
  CHECK(b.w_user[0].cols() == 4);
  CHECK(b.w_radar.rows() == 4);
  CHECK(b.w_radar.cols() == 4);
  // column convention: sensing first, then communication
  const CMat total = b.f_total(0);
  CHECK(total.leftCols(4) == b.f_sensing(0));
  CHECK(total.rightCols(4) == b.f_comm(0));
}

TEST_CASE("assembled transceiver passes the constraint audit") {
  const auto b = default_beamformer();
  const auto report = bf::audit(b, 1.0);
  CHECK(report.max_c4_excess <= 1e-9);
  CHECK(report.max_c6_deviation <= 1e-12);
  CHECK(report.max_c7_deviation <= 1e-12);
  CHECK(report.max_zf_trace_error <= 1e-9);
  CHECK(report.analog_power_error <= 1e-9);
  CHECK(report.ok());
}

TEST_CASE("audit flags a tampered analog stage") {
  auto b = default_beamformer();
  b.f_rf(0, 0) *= 2.0;
  const auto report = bf::audit(b, 1.0);
  CHECK(report.max_c6_deviation > 1e-12);
  CHECK_FALSE(report.ok());
}

TEST_CASE("audit flags an over-budget digital stage") {
  auto b = default_beamformer();
  for (auto& f : b.f_bb) f *= 10.0;
  const auto report = bf::audit(b, 1.0);
  CHECK(report.max_c4_excess > 1e-9);
  CHECK_FALSE(report.ok());
}

TEST_CASE("NLOS-active assembly still satisfies every constraint") {
  isacsim::config::SystemConfig cfg;
  auto set = isacsim::harness::synthesize_point_channels(cfg, 0, 0, 7);
  set.of(isacsim::channel::Object::user1).active =
      isacsim::channel::Variant::nlos;
  set.of(isacsim::channel::Object::user2).active =
      isacsim::channel::Variant::nlos;
  const auto b = bf::assemble(set, cfg.dims(), cfg.p_max_w);
  const auto report = bf::audit(b, cfg.p_max_w);
  CHECK(report.ok());
  // the conditioning guard keeps the radiated trace in the same decade
  // as the power budget instead of sinking it into junk directions
  for (int k = 0; k < 2; ++k) {
    const CMat full = b.f_total(k);
    const double tr = num::trace_of(full * full.adjoint()).real();
    CHECK(tr > 0.05);
    CHECK(tr <= 1.0 + 1e-9);
  }
}
