#include "jamshield/environment.hpp"

#include <cmath>
#include <stdexcept>

#include "jamshield/errors.hpp"

namespace jamshield {

long GainSchedule::total_episodes() const {
  return blocks.empty() ? 0 : blocks.back().episode_end;
}

void GainSchedule::validate() const {
  long expected_start = 0;
  for (const auto& b : blocks) {
    if (b.episode_start != expected_start || b.episode_end <= b.episode_start)
      throw ConfigError("gain schedule: blocks must partition the episode range");
    const bool pos1 = b.h_tj == 1.0 && b.h_jr == 0.5;
    const bool pos2 = b.h_tj == 0.5 && b.h_jr == 1.0;
    if (!pos1 && !pos2)
      throw ConfigError("gain schedule: gains must be one of the two jammer positions");
    expected_start = b.episode_end;
  }
}

int GainSchedule::block_index(long episode) const {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (episode >= blocks[i].episode_start && episode < blocks[i].episode_end)
      return static_cast<int>(i);
  }
  throw std::out_of_range("gain schedule: episode outside the scheduled range");
}

std::pair<double, double> GainSchedule::lookup(long episode) const {
  const auto& b = blocks[static_cast<std::size_t>(block_index(episode))];
  return {b.h_tj, b.h_jr};
}

GainSchedule GainSchedule::standard(long total_episodes) {
  GainSchedule s;
  if (total_episodes == 0) return s;
  if (total_episodes % 4 != 0)
    throw ConfigError("gain schedule: episodes must be divisible by 4");
  const long q = total_episodes / 4;
  s.blocks = {{0, q, 0.5, 1.0},
              {q, 2 * q, 1.0, 0.5},
              {2 * q, 3 * q, 0.5, 1.0},
              {3 * q, 4 * q, 1.0, 0.5}};
  return s;
}

double observe(const StepOutcome& outcome, ObservationMode mode) {
  return mode == ObservationMode::discrete ? static_cast<double>(outcome.jam_indicator)
                                           : outcome.received_power;
}

Environment::Environment(EnvConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.jammer.validate();
  cfg_.schedule.validate();
  if (cfg_.horizon < 1) throw ConfigError("environment: horizon must be >= 1");
  if (cfg_.reward == RewardMode::shannon && cfg_.actions.has_modulation())
    throw ConfigError("environment: shannon reward requires a modulation-free action space");
  if (cfg_.reward == RewardMode::throughput && !cfg_.actions.has_modulation())
    throw ConfigError("environment: throughput reward requires modulation actions");
  multi_channel_ = cfg_.actions.multi_channel();
  if (multi_channel_ && cfg_.jammer.num_channels != static_cast<int>(cfg_.actions.channels().size()))
    throw ConfigError("environment: jammer and action space disagree on channel count");
  gains_ = cfg_.gains;
}

void Environment::rebuild_detection_cache() {
  const auto& powers = cfg_.actions.power_levels();
  pd_low_.resize(powers.size());
  pd_high_.resize(powers.size());
  DetectorParams det = cfg_.jammer.detector;
  for (std::size_t i = 0; i < powers.size(); ++i) {
    det.threshold = cfg_.jammer.tau_low;
    pd_low_[i] = detection_probability(powers[i], gains_.h_tj, det);
    det.threshold = cfg_.jammer.tau_high;
    pd_high_[i] = detection_probability(powers[i], gains_.h_tj, det);
  }
}

double Environment::cached_detection(int power_index, bool tau_high) const {
  const auto& table = tau_high ? pd_high_ : pd_low_;
  return table[static_cast<std::size_t>(power_index)];
}

double Environment::reset(long episode, Rng& rng) {
  const int block = cfg_.schedule.block_index(episode);  // throws when out of range
  const auto [h_tj, h_jr] = cfg_.schedule.lookup(episode);
  gains_ = cfg_.gains;
  gains_.h_tj = h_tj;
  gains_.h_jr = h_jr;
  if (block != block_ && cfg_.jammer.detector.noise_power > 0.0) rebuild_detection_cache();
  block_ = block;
  jam_ = initial_jammer_state(rng, cfg_.jammer);
  slot_ = 0;
  return cfg_.observation == ObservationMode::discrete ? 0.0 : gains_.sigma_r2;
}

StepOutcome Environment::step(int action_index, Rng& rng) {
  const Action action = cfg_.actions.decode(action_index);
  return multi_channel_ ? step_multi_channel(action, rng) : step_single_channel(action, rng);
}

// Slot order: sense -> jam -> reward -> jammer update. The jammer reacts to
// the current slot's transmission within the same slot.
StepOutcome Environment::step_single_channel(const Action& action, Rng& rng) {
  const double tau = threshold_for_slot(jam_.prev_outcome, cfg_.jammer);
  double p_d;
  if (cfg_.jammer.detector.noise_power == 0.0) {
    DetectorParams det = cfg_.jammer.detector;
    det.threshold = tau;
    p_d = detection_probability(action.power, gains_.h_tj, det);
  } else {
    p_d = cached_detection(action.power_index, jam_.prev_outcome != 0);
  }
  const int jammed = jam_decision(rng, p_d);

  StepOutcome out;
  out.jam_indicator = jammed;
  finish_outcome(out, action, jammed);

  jam_.prev_outcome = jammed;
  jam_.tau = threshold_for_slot(jammed, cfg_.jammer);
  return out;
}

StepOutcome Environment::step_multi_channel(const Action& action, Rng& rng) {
  const bool co_channel = action.channel == jam_.channel;
  const bool tau_is_high = jam_.tau == cfg_.jammer.tau_high;
  double p_d;
  if (cfg_.jammer.detector.noise_power == 0.0) {
    DetectorParams det = cfg_.jammer.detector;
    det.threshold = jam_.tau;
    // Off the jammer's channel the detector sees no signal energy.
    p_d = detection_probability(co_channel ? action.power : 0.0, gains_.h_tj, det);
  } else {
    p_d = cached_detection(co_channel ? action.power_index : 0, tau_is_high);
  }
  const int jam = jam_decision(rng, p_d);
  const int detected = (co_channel && jam) ? 1 : 0;

  StepOutcome out;
  out.jam_indicator = detected;
  finish_outcome(out, action, detected);

  jam_ = multichannel_transition(rng, jam_, detected, cfg_.jammer);
  return out;
}

void Environment::finish_outcome(StepOutcome& out, const Action& action, int jammed_on_link) {
  const double s = sinr(action.power, gains_, jammed_on_link != 0);
  out.reward = cfg_.reward == RewardMode::shannon ? shannon_reward(s)
                                                  : throughput_reward(action.modulation, s);
  out.received_power = gains_.h_tr * action.power +
                       (jammed_on_link ? gains_.h_jr * gains_.p_i : 0.0) + gains_.sigma_r2;
  ++slot_;
  out.episode_end = slot_ >= cfg_.horizon;
  out.observation = observe(out, cfg_.observation);
}

}  // namespace jamshield
