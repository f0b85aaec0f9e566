#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jamshield/environment.hpp"
#include "jamshield/errors.hpp"

using namespace jamshield;

namespace {

EnvConfig pc_config(long episodes, double sigma_j2 = 0.0,
                    ObservationMode obs = ObservationMode::discrete) {
  EnvConfig ec;
  ec.actions = ActionSpace(100, 1.0, {}, {0});
  ec.jammer.detector.noise_power = sigma_j2;
  ec.schedule = GainSchedule::standard(episodes);
  ec.horizon = 200;
  ec.observation = obs;
  ec.reward = RewardMode::shannon;
  return ec;
}

EnvConfig mc_config(long episodes, int horizon = 200) {
  EnvConfig ec;
  ec.actions = ActionSpace(100, 1.0, {2, 4, 8, 16, 32, 64}, {0, 1});
  ec.jammer.num_channels = 2;
  ec.schedule = GainSchedule::standard(episodes);
  ec.horizon = horizon;
  ec.observation = ObservationMode::discrete;
  ec.reward = RewardMode::throughput;
  return ec;
}

}  // namespace

TEST_CASE("gain schedule standard blocks") {
  const GainSchedule s = GainSchedule::standard(20000);
  CHECK(s.total_episodes() == 20000);
  CHECK(s.lookup(0) == std::pair{0.5, 1.0});
  CHECK(s.lookup(4999) == std::pair{0.5, 1.0});
  CHECK(s.lookup(5000) == std::pair{1.0, 0.5});
  CHECK(s.lookup(9999) == std::pair{1.0, 0.5});
  CHECK(s.lookup(10000) == std::pair{0.5, 1.0});
  CHECK(s.lookup(19999) == std::pair{1.0, 0.5});
  CHECK_THROWS_AS(s.lookup(20000), std::out_of_range);
  CHECK_THROWS_AS(s.lookup(-1), std::out_of_range);
}

TEST_CASE("gain schedule validation") {
  GainSchedule s;
  s.blocks = {{0, 10, 0.5, 1.0}, {11, 20, 1.0, 0.5}};  // gap
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.blocks = {{0, 10, 0.7, 1.0}};  // not a jammer position
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s.blocks = {{0, 10, 0.5, 1.0}, {10, 20, 1.0, 0.5}};
  CHECK_NOTHROW(s.validate());
  CHECK_THROWS_AS(GainSchedule::standard(10), ConfigError);
  CHECK(GainSchedule::standard(0).total_episodes() == 0);
}

TEST_CASE("reset returns the idle observation and applies scheduled gains") {
  Environment env(pc_config(20000));
  Rng rng(1);
  CHECK(env.reset(0, rng) == 0.0);
  CHECK(env.current_h_tj() == 0.5);
  CHECK(env.current_h_jr() == 1.0);
  CHECK(env.reset(5000, rng) == 0.0);
  CHECK(env.current_h_tj() == 1.0);
  CHECK(env.current_h_jr() == 0.5);
  CHECK_THROWS_AS(env.reset(20000, rng), std::out_of_range);

  Environment cont(pc_config(20000, 0.0, ObservationMode::continuous));
  CHECK(cont.reset(0, rng) == 0.1);  // noise floor
}

TEST_CASE("single-channel slot pipeline hand examples") {
  Environment env(pc_config(20000));
  Rng rng(2);

  // h_tj = 1.0 block, P_T = 0.19 under tau_low: undetected.
  env.reset(5000, rng);
  StepOutcome out = env.step(19, rng);
  CHECK(out.jam_indicator == 0);
  CHECK(out.reward == doctest::Approx(1.53605).epsilon(1e-5));
  CHECK(out.received_power == doctest::Approx(0.19 + 0.1).epsilon(1e-12));

  // h_tj = 0.5 block, P_T = 1.0: 0.5 > 0.2, jammed, h_jr = 1.0.
  env.reset(0, rng);
  out = env.step(100, rng);
  CHECK(out.jam_indicator == 1);
  CHECK(out.reward == doctest::Approx(std::log2(1.0 + 1.0 / 100.1)).epsilon(1e-12));
  CHECK(out.reward == doctest::Approx(0.014341).epsilon(1e-4));
  CHECK(out.received_power == doctest::Approx(1.0 + 100.0 + 0.1).epsilon(1e-12));

  // Silence: never detected, zero rate.
  env.reset(0, rng);
  out = env.step(0, rng);
  CHECK(out.jam_indicator == 0);
  CHECK(out.reward == 0.0);
}

TEST_CASE("constant power below tau_low is never jammed") {
  Environment env(pc_config(20000));
  Rng rng(3);
  env.reset(5000, rng);  // h_tj = 1.0
  for (int t = 0; t < 200; ++t) {
    CHECK(env.step(19, rng).jam_indicator == 0);
  }
}

TEST_CASE("constant power above tau_high is jammed every slot including the first") {
  Environment env(pc_config(20000));
  Rng rng(4);
  env.reset(5000, rng);  // h_tj = 1.0, tau(0) = tau_low
  for (int t = 0; t < 200; ++t) {
    CHECK(env.step(50, rng).jam_indicator == 1);  // 0.5 > 0.4 > 0.2
  }
}

TEST_CASE("power in the hysteresis band alternates jam outcomes") {
  Environment env(pc_config(20000));
  Rng rng(5);
  env.reset(5000, rng);  // h_tj = 1.0
  // 0.3 is above tau_low but below tau_high: jammed on even slots only.
  for (int t = 0; t < 100; ++t) {
    CHECK(env.step(30, rng).jam_indicator == (t % 2 == 0 ? 1 : 0));
  }
}

TEST_CASE("episode end flag at the horizon only") {
  EnvConfig ec = pc_config(20000);
  ec.horizon = 7;
  Environment env(ec);
  Rng rng(6);
  env.reset(0, rng);
  for (int t = 0; t < 7; ++t) {
    const StepOutcome out = env.step(10, rng);
    CHECK(out.episode_end == (t == 6));
  }
}

TEST_CASE("continuous observation equals received power") {
  Environment env(pc_config(20000, 0.0, ObservationMode::continuous));
  Rng rng(7);
  env.reset(0, rng);
  const StepOutcome quiet = env.step(50, rng);  // 0.5 * 0.5 = 0.25, in the band: jammed first
  CHECK(quiet.observation == quiet.received_power);
  CHECK(quiet.received_power >= 0.1);

  StepOutcome o;
  o.jam_indicator = 1;
  o.received_power = 100.6;
  CHECK(observe(o, ObservationMode::discrete) == 1.0);
  CHECK(observe(o, ObservationMode::continuous) == 100.6);
  o.jam_indicator = 0;
  o.received_power = 0.6;
  CHECK(observe(o, ObservationMode::discrete) == 0.0);
  CHECK(observe(o, ObservationMode::continuous) == 0.6);
}

TEST_CASE("deterministic replay with equal seeds") {
  auto run = [](std::uint64_t seed) {
    Environment env(pc_config(20000, 1e-3));
    Rng rng(seed);
    std::vector<double> trace;
    for (long ep = 0; ep < 3; ++ep) {
      env.reset(ep, rng);
      for (int t = 0; t < 200; ++t) {
        const StepOutcome out = env.step((t * 13) % 101, rng);
        trace.push_back(out.reward);
        trace.push_back(static_cast<double>(out.jam_indicator));
        trace.push_back(out.received_power);
        trace.push_back(out.observation);
      }
    }
    return trace;
  };
  const auto a = run(42), b = run(42), c = run(43);
  CHECK(a == b);
  CHECK(a != c);
}

TEST_CASE("noisy detector matches the direct evaluation through the cache") {
  const double sigma = 1e-3;
  Environment env(pc_config(20000, sigma));
  Rng rng(8);
  env.reset(0, rng);  // h_tj = 0.5

  DetectorParams det{1, sigma, 0.2};
  const double direct = detection_probability(0.31, 0.5, det);
  // First slot after reset senses at tau_low; jam frequency over many resets
  // must match the direct detection probability.
  long jams = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    env.reset(0, rng);
    jams += env.step(31, rng).jam_indicator;
  }
  const double freq = static_cast<double>(jams) / trials;
  const double se = std::sqrt(direct * (1.0 - direct) / trials);
  CHECK(std::fabs(freq - direct) <= 4.0 * se + 1e-9);
}

TEST_CASE("multi-channel: off-channel transmissions are clean") {
  Environment env(mc_config(20000));
  Rng rng(9);
  env.reset(0, rng);
  const auto& actions = env.actions();
  for (int t = 0; t < 200; ++t) {
    const int other = 1 - env.jammer_state().channel;
    // full power, 64-QAM, on the channel the jammer is not sensing
    const int idx = actions.encode(other, 100, 5);
    const StepOutcome out = env.step(idx, rng);
    CHECK(out.jam_indicator == 0);
    CHECK(out.reward == doctest::Approx(throughput_reward(64, 10.0)).epsilon(1e-12));
    CHECK(out.received_power == doctest::Approx(1.1).epsilon(1e-12));
  }
}

TEST_CASE("multi-channel: co-channel full power is always detected") {
  Environment env(mc_config(20000));
  Rng rng(10);
  env.reset(0, rng);  // h_tj = 0.5: full power is above either threshold
  const auto& actions = env.actions();
  for (int t = 0; t < 200; ++t) {
    const int co = env.jammer_state().channel;
    const StepOutcome out = env.step(actions.encode(co, 100, 5), rng);
    CHECK(out.jam_indicator == 1);
    CHECK(out.received_power == doctest::Approx(1.0 + 1.0 * 100.0 + 0.1).epsilon(1e-12));
  }
}

TEST_CASE("multi-channel jammer stays after a detection with frequency p") {
  EnvConfig ec = mc_config(4, 100000);
  Environment env(ec);
  Rng rng(11);
  env.reset(0, rng);
  const auto& actions = env.actions();
  long stays = 0;
  const int transitions = 100000;
  for (int t = 0; t < transitions; ++t) {
    const int before = env.jammer_state().channel;
    const StepOutcome out = env.step(actions.encode(before, 100, 5), rng);
    REQUIRE(out.jam_indicator == 1);
    stays += env.jammer_state().channel == before;
  }
  const double rate = static_cast<double>(stays) / transitions;
  CHECK(std::fabs(rate - 0.8) <= 0.004);
}

TEST_CASE("multi-channel threshold rule after idle slots") {
  // With a silent transmitter d_t = 0 always, so the threshold is tau_low
  // after a stay and tau_high after a move.
  Environment env(mc_config(4, 100000));
  Rng rng(12);
  env.reset(0, rng);
  long moves = 0;
  const int steps = 100000;
  for (int t = 0; t < steps; ++t) {
    const int before = env.jammer_state().channel;
    const StepOutcome out = env.step(0, rng);  // zero power
    CHECK(out.jam_indicator == 0);
    const bool moved = env.jammer_state().channel != before;
    moves += moved;
    CHECK(env.jammer_state().tau == (moved ? 0.4 : 0.2));
  }
  const double move_rate = static_cast<double>(moves) / steps;
  CHECK(std::fabs(move_rate - 0.8) <= 0.004);  // 1 - q
}

TEST_CASE("environment rejects inconsistent configurations") {
  EnvConfig ec = pc_config(20000);
  ec.reward = RewardMode::throughput;  // no modulations in the action space
  CHECK_THROWS_AS(Environment{ec}, ConfigError);

  EnvConfig mc = mc_config(20000);
  mc.jammer.num_channels = 3;  // action space says 2
  CHECK_THROWS_AS(Environment{mc}, ConfigError);

  EnvConfig bad = pc_config(20000);
  bad.horizon = 0;
  CHECK_THROWS_AS(Environment{bad}, ConfigError);
}
