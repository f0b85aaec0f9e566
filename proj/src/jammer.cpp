#include "jamshield/jammer.hpp"

#include <cmath>

#include "jamshield/errors.hpp"

namespace jamshield {

void JammerConfig::validate() const {
  if (!(tau_low > 0.0) || !(tau_low < tau_high))
    throw ConfigError("jammer: thresholds must satisfy 0 < tau_low < tau_high");
  if (!(p_stay_after_jam > 0.5) || !(p_stay_after_jam <= 1.0))
    throw ConfigError("jammer: p_stay must satisfy 0.5 < p <= 1");
  if (!(p_stay_after_idle >= 0.0) || !(p_stay_after_idle < 0.5))
    throw ConfigError("jammer: q_stay must satisfy 0 <= q < 0.5");
  if (num_channels < 1) throw ConfigError("jammer: num_channels must be >= 1");
  detector.validate();
  if (!(interference_power >= 0.0)) throw ConfigError("jammer: interference_power must be >= 0");
}

double threshold_for_slot(int prev_jammed, const JammerConfig& cfg) {
  return prev_jammed ? cfg.tau_high : cfg.tau_low;
}

int jam_decision(Rng& rng, double p_d) {
  if (p_d <= 0.0) return 0;
  if (p_d >= 1.0) return 1;
  return rng.bernoulli(p_d) ? 1 : 0;
}

JammerState multichannel_transition(Rng& rng, const JammerState& state, int detected,
                                    const JammerConfig& cfg) {
  const double stay_p = detected ? cfg.p_stay_after_jam : cfg.p_stay_after_idle;
  bool stayed = true;
  int channel = state.channel;
  if (cfg.num_channels > 1) {
    stayed = rng.bernoulli(stay_p);
    if (!stayed) {
      const int pick = rng.below(cfg.num_channels - 1);
      channel = pick >= state.channel ? pick + 1 : pick;
    }
  }
  JammerState next;
  next.prev_outcome = detected;
  next.channel = channel;
  if (detected) {
    next.tau = stayed ? cfg.tau_high : cfg.tau_low;
  } else {
    next.tau = stayed ? cfg.tau_low : cfg.tau_high;
  }
  return next;
}

JammerState initial_jammer_state(Rng& rng, const JammerConfig& cfg) {
  JammerState s;
  s.prev_outcome = 0;
  s.tau = cfg.tau_low;
  s.channel = cfg.num_channels > 1 ? rng.below(cfg.num_channels) : 0;
  return s;
}

}  // namespace jamshield
