#pragma once

#include <utility>
#include <vector>

#include "jamshield/jammer.hpp"
#include "jamshield/link_reward.hpp"
#include "jamshield/rng.hpp"

namespace jamshield {

enum class ObservationMode { discrete, continuous };
enum class RewardMode { shannon, throughput };

struct GainBlock {
  long episode_start = 0;
  long episode_end = 0;  // exclusive
  double h_tj = 0.0;
  double h_jr = 0.0;
};

// Episode-indexed jammer-position schedule. Blocks partition
// [0, total_episodes) and every (h_tj, h_jr) pair is one of the two jammer
// positions (1.0, 0.5) or (0.5, 1.0).
struct GainSchedule {
  std::vector<GainBlock> blocks;

  long total_episodes() const;
  std::pair<double, double> lookup(long episode) const;  // throws std::out_of_range
  int block_index(long episode) const;
  void validate() const;  // throws ConfigError

  // The four equal blocks of the evaluation setup: h_tj cycles
  // 0.5, 1.0, 0.5, 1.0 with h_jr paired by jammer position.
  static GainSchedule standard(long total_episodes);
};

struct EnvConfig {
  LinkGains gains;  // h_tj / h_jr are overwritten per block by the schedule
  JammerConfig jammer;
  GainSchedule schedule;
  ActionSpace actions;
  int horizon = 200;
  ObservationMode observation = ObservationMode::discrete;
  RewardMode reward = RewardMode::shannon;
};

struct StepOutcome {
  double reward = 0.0;
  int jam_indicator = 0;        // J_t (single channel) or d_t (multi channel)
  double received_power = 0.0;  // h_TR P_T + [jammed on link] h_JR P_I + sigma_R^2
  double observation = 0.0;     // next_observation in the configured mode
  bool episode_end = false;
};

double observe(const StepOutcome& outcome, ObservationMode mode);

// One transmitter/jammer link simulated slot by slot. A reactive jammer
// senses, then jams, within the same slot as the transmission; the agent only
// sees the outcome when it picks the next action.
class Environment {
 public:
  explicit Environment(EnvConfig cfg);

  // Starts episode `episode`: re-seats the jammer, applies the scheduled
  // gains, and returns the initial observation (0 or the noise floor).
  double reset(long episode, Rng& rng);

  StepOutcome step(int action_index, Rng& rng);

  const ActionSpace& actions() const { return cfg_.actions; }
  const EnvConfig& config() const { return cfg_; }
  double current_h_tj() const { return gains_.h_tj; }
  double current_h_jr() const { return gains_.h_jr; }
  const JammerState& jammer_state() const { return jam_; }

 private:
  StepOutcome step_single_channel(const Action& action, Rng& rng);
  StepOutcome step_multi_channel(const Action& action, Rng& rng);
  void finish_outcome(StepOutcome& out, const Action& action, int jammed_on_link);
  void rebuild_detection_cache();
  double cached_detection(int power_index, bool tau_high) const;

  EnvConfig cfg_;
  LinkGains gains_;
  JammerState jam_;
  int slot_ = 0;
  int block_ = -1;
  bool multi_channel_ = false;
  // P_D per (power level, threshold) for the current block; only used when
  // the detector noise is nonzero (the noiseless rule is a plain compare).
  std::vector<double> pd_low_, pd_high_;
};

}  // namespace jamshield
