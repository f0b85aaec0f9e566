#pragma once

#include "jamshield/detector_math.hpp"
#include "jamshield/rng.hpp"

namespace jamshield {

struct JammerConfig {
  double tau_low = 0.2;
  double tau_high = 0.4;
  double p_stay_after_jam = 0.8;   // p, applies when d_t = 1
  double p_stay_after_idle = 0.2;  // q, applies when d_t = 0
  int num_channels = 1;
  DetectorParams detector;
  double interference_power = 100.0;

  void validate() const;  // throws ConfigError
};

struct JammerState {
  int prev_outcome = 0;  // J_{t-1} in the single-channel rule, d_{t-1} in the multi-channel rule
  double tau = 0.0;      // sensing threshold active for the current slot
  int channel = 0;
};

// Single-channel threshold switching: tau_high after a jam, tau_low otherwise.
double threshold_for_slot(int prev_jammed, const JammerConfig& cfg);

// Bernoulli jam decision with success probability p_d.
int jam_decision(Rng& rng, double p_d);

// Multi-channel joint channel/threshold update keyed on the detection outcome
// d_t: stay with probability p (d=1) or q (d=0), otherwise hop to a uniformly
// chosen different channel. The new threshold applies to the next slot:
// d=1 -> tau_high on stay / tau_low on move; d=0 -> tau_low on stay /
// tau_high on move.
JammerState multichannel_transition(Rng& rng, const JammerState& state, int detected,
                                    const JammerConfig& cfg);

// Episode-reset state: no previous outcome, low threshold, uniform channel.
JammerState initial_jammer_state(Rng& rng, const JammerConfig& cfg);

}  // namespace jamshield
