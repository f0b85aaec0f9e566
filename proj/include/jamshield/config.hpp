#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "jamshield/agents.hpp"
#include "jamshield/environment.hpp"

namespace jamshield {

enum class EnvMode { pc, pcam, mc_pcam };
enum class AgentKind { rl, fixed };
enum class Scale { full, desk };

// One fully specified experiment. Defaults are the single-channel
// power-control evaluation parameters; presets and config files override.
struct ExperimentPreset {
  std::string name = "custom";
  EnvMode mode = EnvMode::pc;
  ObservationMode observation = ObservationMode::discrete;
  AgentKind agent = AgentKind::rl;

  double p_max = 1.0;
  double tau_low = 0.2;
  double tau_high = 0.4;
  int power_levels = 101;  // K + 1
  int num_samples = 1;     // detector N
  int horizon = 200;
  long episodes = 20000;
  double p_i = 100.0;
  double sigma_r2 = 0.1;
  double sigma_j2 = 0.0;

  LearnerConfig learner;

  double p_stay = 0.8;  // multi-channel jammer stay probability after a jam
  double q_stay = 0.2;  // ... after an idle slot
  int num_channels = 1;

  std::uint64_t seed = 1;

  void validate() const;               // throws ConfigError
  std::string canonical_text() const;  // key = value lines in fixed order (seed excluded)
  std::string digest() const;          // FNV-1a hash of canonical_text()
};

// Flat `key = value` config file; unknown keys are rejected, omitted keys
// keep the defaults above.
ExperimentPreset parse_config(const std::string& path);
ExperimentPreset parse_config_text(const std::string& text);

// table2-rl, table2-fixed, table3-*, table5-*, table6-{sc,mc}-{discrete,continuous}.
ExperimentPreset preset_by_name(const std::string& name);

// Desk scale shrinks a run to 4000 episodes (four blocks of 1000).
ExperimentPreset apply_scale(ExperimentPreset preset, Scale scale);

EnvConfig make_env_config(const ExperimentPreset& preset);
std::unique_ptr<Agent> make_agent(const ExperimentPreset& preset, const ActionSpace& actions,
                                  Rng& init_rng);

const char* to_string(EnvMode mode);
const char* to_string(ObservationMode mode);
const char* to_string(AgentKind kind);

}  // namespace jamshield
