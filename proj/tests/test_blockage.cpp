#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <string>

#include "isacsim/blockage.hpp"
#include "isacsim/errors.hpp"
#include "isacsim/harness.hpp"

using isacsim::ConfigError;
using isacsim::cplx;
namespace bf = isacsim::beamforming;
namespace bl = isacsim::blockage;
namespace ch = isacsim::channel;
namespace rt = isacsim::rates;

namespace {

struct Probe {
  isacsim::config::SystemConfig cfg;
  ch::SubcarrierChannelSet pristine;
  bf::HybridBeamformer nominal;
  rt::ReflectorSet reflectors;
  rt::PowerAllocation pa;

  Probe() {
    pristine = isacsim::harness::synthesize_point_channels(cfg, 0, 0, 0);
    nominal = bf::assemble(pristine, cfg.dims(), cfg.p_max_w);
    reflectors = cfg.reflectors();
    pa.snr_linear = std::pow(10.0, 1.5);
  }

  // user blockage with the locked echo-attenuation convention: the echo
  // crosses the blocker hops times, the forward link once
  ch::SubcarrierChannelSet blocked_users(double db, int hops) const {
    auto set = pristine;
    for (const auto o : {ch::Object::user1, ch::Object::user2}) {
      auto& oc = set.of(o);
      for (int k = 0; k < set.k_subcarriers(); ++k) {
        oc.los[k] = ch::apply_blockage(oc.los[k], db);
        oc.echo_los[k] = ch::apply_blockage(oc.echo_los[k], db * hops);
      }
      oc.blockage_db = db;
    }
    return set;
  }
};

}  // namespace

TEST_CASE("reflection ratio drops by the squared echo attenuation") {
  const Probe probe;
  for (const auto o : {ch::Object::user1, ch::Object::user2}) {
    const double base = bl::reflection_ratio(o, probe.pristine, probe.nominal,
                                             probe.pa, probe.reflectors);
    REQUIRE(base > 0.0);
    // single hop at 20 dB: echo power falls by 1e-2
    const auto one_hop = probe.blocked_users(20.0, 1);
    const double r1 = bl::reflection_ratio(o, one_hop, probe.nominal, probe.pa,
                                           probe.reflectors);
    CHECK(r1 / base == doctest::Approx(1e-2).epsilon(1e-9));
    // round trip at 20 dB: echo power falls by 1e-4
    const auto two_hop = probe.blocked_users(20.0, 2);
    const double r2 = bl::reflection_ratio(o, two_hop, probe.nominal, probe.pa,
                                           probe.reflectors);
    CHECK(r2 / base == doctest::Approx(1e-4).epsilon(1e-9));
  }
}

TEST_CASE("the target's ratio ignores user blockage") {
  const Probe probe;
  const double base = bl::reflection_ratio(
      ch::Object::target, probe.pristine, probe.nominal, probe.pa,
      probe.reflectors);
  const auto blocked = probe.blocked_users(20.0, 2);
  const double after = bl::reflection_ratio(
      ch::Object::target, blocked, probe.nominal, probe.pa, probe.reflectors);
  CHECK(after == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("the ratio scales quadratically with the echo amplitude") {
  const Probe probe;
  auto scaled = probe.pristine;
  auto& oc = scaled.of(ch::Object::user1);
  for (int k = 0; k < scaled.k_subcarriers(); ++k) oc.echo_los[k] *= 2.0;
  const double base = bl::reflection_ratio(
      ch::Object::user1, probe.pristine, probe.nominal, probe.pa,
      probe.reflectors);
  const double boosted = bl::reflection_ratio(
      ch::Object::user1, scaled, probe.nominal, probe.pa, probe.reflectors);
  CHECK(boosted == doctest::Approx(4.0 * base).epsilon(1e-12));
}

TEST_CASE("decision thresholds at the log-domain midpoint") {
  const double unblocked = 1e-3;
  const double blocked = 1e-7;
  const double midpoint = 1e-5;  // sqrt(unblocked * blocked)
  auto at = [&](double measured) {
    return bl::decide(ch::Object::user1, measured, unblocked, blocked, true);
  };
  CHECK_FALSE(at(unblocked).declared_blocked);
  CHECK(at(blocked).declared_blocked);
  CHECK(at(blocked).action == bl::Action::switch_to_nlos);
  CHECK_FALSE(at(midpoint).declared_blocked);  // exact tie favors LOS
  CHECK(at(midpoint * 0.999).declared_blocked);
  CHECK_FALSE(at(midpoint * 1.001).declared_blocked);
}

TEST_CASE("a blocked object without fallback keeps the LOS beam") {
  const auto d =
      bl::decide(ch::Object::user2, 1e-7, 1e-3, 1e-7, /*nlos_available=*/false);
  CHECK(d.declared_blocked);
  CHECK(d.action == bl::Action::keep_los);
  CHECK(d.blocked_without_fallback);
}

TEST_CASE("decision validates its reference levels") {
  CHECK_THROWS_AS(bl::decide(ch::Object::user1, 1e-5, 1e-7, 1e-3, true),
                  ConfigError);
  CHECK_THROWS_AS(bl::decide(ch::Object::user1, 1e-5, 1e-3, 0.0, true),
                  ConfigError);
}

TEST_CASE("switch rule flips the whole user cluster and never the target") {
  const Probe probe;
  std::array<bl::BlockageDecision, 3> decisions{};
  for (int i = 0; i < 3; ++i) {
    decisions[i].object = static_cast<ch::Object>(i);
  }
  decisions[0].declared_blocked = true;
  decisions[0].action = bl::Action::switch_to_nlos;

  const auto switched = bl::apply_switch(probe.pristine, decisions);
  CHECK(switched.of(ch::Object::user1).active == ch::Variant::nlos);
  CHECK(switched.of(ch::Object::user2).active == ch::Variant::nlos);
  CHECK(switched.of(ch::Object::target).active == ch::Variant::los);
  // matrix data is untouched
  CHECK(switched.of(ch::Object::user1).los[0] ==
        probe.pristine.of(ch::Object::user1).los[0]);
  // idempotent
  const auto again = bl::apply_switch(switched, decisions);
  CHECK(again.of(ch::Object::user2).active == ch::Variant::nlos);

  // a blocked target never switches anything
  std::array<bl::BlockageDecision, 3> target_only{};
  for (int i = 0; i < 3; ++i) {
    target_only[i].object = static_cast<ch::Object>(i);
  }
  target_only[2].declared_blocked = true;
  target_only[2].action = bl::Action::switch_to_nlos;
  const auto untouched = bl::apply_switch(probe.pristine, target_only);
  CHECK(untouched.of(ch::Object::user1).active == ch::Variant::los);
  CHECK(untouched.of(ch::Object::target).active == ch::Variant::los);
}

TEST_CASE("action names are stable") {
  CHECK(std::string(bl::action_name(bl::Action::keep_los)) == "keep_los");
  CHECK(std::string(bl::action_name(bl::Action::switch_to_nlos)) ==
        "switch_to_nlos");
}
