#include "jamshield/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "jamshield/errors.hpp"

namespace jamshield {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v))
    throw ConfigError("config: unparsable value for key '" + key + "': " + value);
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long v = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    throw ConfigError("config: unparsable value for key '" + key + "': " + value);
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size())
    throw ConfigError("config: unparsable value for key '" + key + "': " + value);
  return static_cast<std::uint64_t>(v);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(EnvMode mode) {
  switch (mode) {
    case EnvMode::pc: return "pc";
    case EnvMode::pcam: return "pcam";
    case EnvMode::mc_pcam: return "mc-pcam";
  }
  return "?";
}

const char* to_string(ObservationMode mode) {
  return mode == ObservationMode::discrete ? "discrete" : "continuous";
}

const char* to_string(AgentKind kind) { return kind == AgentKind::rl ? "rl" : "fixed"; }

void ExperimentPreset::validate() const {
  if (!(p_max > 0.0)) throw ConfigError("config: p_max must be > 0");
  if (!(tau_low > 0.0)) throw ConfigError("config: tau_low must be > 0");
  if (!(tau_low < tau_high))
    throw ConfigError("config: tau_low must be strictly below tau_high");
  if (power_levels < 2) throw ConfigError("config: power_levels must be >= 2");
  if (num_samples < 1) throw ConfigError("config: num_samples must be >= 1");
  if (horizon < 1) throw ConfigError("config: horizon must be >= 1");
  if (episodes < 0) throw ConfigError("config: episodes must be >= 0");
  if (episodes % 4 != 0)
    throw ConfigError("config: episodes must be divisible by 4 (four schedule blocks)");
  if (!(p_i >= 0.0)) throw ConfigError("config: p_i must be >= 0");
  if (!(sigma_r2 > 0.0)) throw ConfigError("config: sigma_r2 must be > 0");
  if (!(sigma_j2 >= 0.0)) throw ConfigError("config: sigma_j2 must be >= 0");
  if (!(p_stay > 0.5) || !(p_stay <= 1.0))
    throw ConfigError("config: p_stay must satisfy 0.5 < p_stay <= 1");
  if (!(q_stay >= 0.0) || !(q_stay < 0.5))
    throw ConfigError("config: q_stay must satisfy 0 <= q_stay < 0.5");
  if (num_channels < 1) throw ConfigError("config: num_channels must be >= 1");
  if (mode == EnvMode::mc_pcam && num_channels < 2)
    throw ConfigError("config: num_channels must be >= 2 when mode = mc-pcam");
  if (mode != EnvMode::mc_pcam && num_channels != 1)
    throw ConfigError("config: num_channels > 1 requires mode = mc-pcam");
  learner.validate();
}

std::string ExperimentPreset::canonical_text() const {
  std::ostringstream os;
  os << "mode = " << to_string(mode) << '\n'
     << "observation = " << to_string(observation) << '\n'
     << "agent = " << to_string(agent) << '\n'
     << "p_max = " << fmt(p_max) << '\n'
     << "tau_low = " << fmt(tau_low) << '\n'
     << "tau_high = " << fmt(tau_high) << '\n'
     << "power_levels = " << power_levels << '\n'
     << "num_samples = " << num_samples << '\n'
     << "horizon = " << horizon << '\n'
     << "episodes = " << episodes << '\n'
     << "p_i = " << fmt(p_i) << '\n'
     << "sigma_r2 = " << fmt(sigma_r2) << '\n'
     << "sigma_j2 = " << fmt(sigma_j2) << '\n'
     << "alpha = " << fmt(learner.alpha) << '\n'
     << "gamma = " << fmt(learner.gamma) << '\n'
     << "eps_start = " << fmt(learner.eps_start) << '\n'
     << "eps_final = " << fmt(learner.eps_final) << '\n'
     << "eps_decay = " << fmt(learner.eps_decay) << '\n'
     << "eta = " << fmt(learner.eta) << '\n'
     << "batch = " << learner.batch << '\n'
     << "buffer_capacity = " << learner.buffer_capacity << '\n'
     << "target_sync = " << learner.target_sync << '\n'
     << "p_stay = " << fmt(p_stay) << '\n'
     << "q_stay = " << fmt(q_stay) << '\n'
     << "num_channels = " << num_channels << '\n';
  return os.str();
}

std::string ExperimentPreset::digest() const {
  const std::string text = canonical_text();
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ExperimentPreset parse_config_text(const std::string& text) {
  ExperimentPreset p;
  p.name = "custom";
  bool num_channels_set = false;

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value', got: " + line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "mode") {
      if (value == "pc") p.mode = EnvMode::pc;
      else if (value == "pcam") p.mode = EnvMode::pcam;
      else if (value == "mc-pcam") p.mode = EnvMode::mc_pcam;
      else throw ConfigError("config: unparsable value for key 'mode': " + value);
    } else if (key == "observation") {
      if (value == "discrete") p.observation = ObservationMode::discrete;
      else if (value == "continuous") p.observation = ObservationMode::continuous;
      else throw ConfigError("config: unparsable value for key 'observation': " + value);
    } else if (key == "agent") {
      if (value == "rl") p.agent = AgentKind::rl;
      else if (value == "fixed") p.agent = AgentKind::fixed;
      else throw ConfigError("config: unparsable value for key 'agent': " + value);
    } else if (key == "p_max") {
      p.p_max = parse_double(key, value);
    } else if (key == "tau_low") {
      p.tau_low = parse_double(key, value);
    } else if (key == "tau_high") {
      p.tau_high = parse_double(key, value);
    } else if (key == "power_levels") {
      p.power_levels = static_cast<int>(parse_long(key, value));
    } else if (key == "num_samples") {
      p.num_samples = static_cast<int>(parse_long(key, value));
    } else if (key == "horizon") {
      p.horizon = static_cast<int>(parse_long(key, value));
    } else if (key == "episodes") {
      p.episodes = parse_long(key, value);
    } else if (key == "p_i") {
      p.p_i = parse_double(key, value);
    } else if (key == "sigma_r2") {
      p.sigma_r2 = parse_double(key, value);
    } else if (key == "sigma_j2") {
      p.sigma_j2 = parse_double(key, value);
    } else if (key == "alpha") {
      p.learner.alpha = parse_double(key, value);
    } else if (key == "gamma") {
      p.learner.gamma = parse_double(key, value);
    } else if (key == "eps_start") {
      p.learner.eps_start = parse_double(key, value);
    } else if (key == "eps_final") {
      p.learner.eps_final = parse_double(key, value);
    } else if (key == "eps_decay") {
      p.learner.eps_decay = parse_double(key, value);
    } else if (key == "eta") {
      p.learner.eta = parse_double(key, value);
    } else if (key == "batch") {
      p.learner.batch = static_cast<int>(parse_long(key, value));
    } else if (key == "buffer_capacity") {
      p.learner.buffer_capacity = static_cast<int>(parse_long(key, value));
    } else if (key == "target_sync") {
      p.learner.target_sync = static_cast<int>(parse_long(key, value));
    } else if (key == "p_stay") {
      p.p_stay = parse_double(key, value);
    } else if (key == "q_stay") {
      p.q_stay = parse_double(key, value);
    } else if (key == "num_channels") {
      p.num_channels = static_cast<int>(parse_long(key, value));
      num_channels_set = true;
    } else if (key == "seed") {
      p.seed = parse_u64(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }

  if (p.mode == EnvMode::mc_pcam && !num_channels_set) p.num_channels = 2;
  p.validate();
  return p;
}

ExperimentPreset parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  ExperimentPreset p = parse_config_text(buf.str());
  p.name = path;
  return p;
}

ExperimentPreset preset_by_name(const std::string& name) {
  ExperimentPreset p;
  p.name = name;
  if (name == "table2-rl") {
    p.mode = EnvMode::pc;
  } else if (name == "table2-fixed") {
    p.mode = EnvMode::pc;
    p.agent = AgentKind::fixed;
  } else if (name == "table3-rl" || name == "table6-sc-discrete") {
    p.mode = EnvMode::pcam;
  } else if (name == "table3-fixed") {
    p.mode = EnvMode::pcam;
    p.agent = AgentKind::fixed;
  } else if (name == "table5-rl" || name == "table6-mc-discrete") {
    p.mode = EnvMode::mc_pcam;
    p.num_channels = 2;
  } else if (name == "table5-fixed") {
    p.mode = EnvMode::mc_pcam;
    p.num_channels = 2;
    p.agent = AgentKind::fixed;
  } else if (name == "table6-sc-continuous") {
    p.mode = EnvMode::pcam;
    p.observation = ObservationMode::continuous;
  } else if (name == "table6-mc-continuous") {
    p.mode = EnvMode::mc_pcam;
    p.num_channels = 2;
    p.observation = ObservationMode::continuous;
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  p.validate();
  return p;
}

ExperimentPreset apply_scale(ExperimentPreset preset, Scale scale) {
  if (scale == Scale::desk) preset.episodes = 4000;
  return preset;
}

EnvConfig make_env_config(const ExperimentPreset& preset) {
  preset.validate();

  std::vector<int> modulations;
  if (preset.mode != EnvMode::pc) {
    modulations.assign(std::begin(kSupportedModulations), std::end(kSupportedModulations));
  }
  std::vector<int> channels(static_cast<std::size_t>(preset.num_channels));
  for (int c = 0; c < preset.num_channels; ++c) channels[static_cast<std::size_t>(c)] = c;

  EnvConfig ec;
  ec.actions = ActionSpace(preset.power_levels - 1, preset.p_max, std::move(modulations),
                           std::move(channels));
  ec.gains.h_tr = 1.0;
  ec.gains.sigma_r2 = preset.sigma_r2;
  ec.gains.p_i = preset.p_i;
  ec.jammer.tau_low = preset.tau_low;
  ec.jammer.tau_high = preset.tau_high;
  ec.jammer.p_stay_after_jam = preset.p_stay;
  ec.jammer.p_stay_after_idle = preset.q_stay;
  ec.jammer.num_channels = preset.num_channels;
  ec.jammer.detector.num_samples = preset.num_samples;
  ec.jammer.detector.noise_power = preset.sigma_j2;
  ec.jammer.detector.threshold = preset.tau_low;
  ec.jammer.interference_power = preset.p_i;
  ec.schedule = GainSchedule::standard(preset.episodes);
  ec.horizon = preset.horizon;
  ec.observation = preset.observation;
  ec.reward = preset.mode == EnvMode::pc ? RewardMode::shannon : RewardMode::throughput;
  return ec;
}

std::unique_ptr<Agent> make_agent(const ExperimentPreset& preset, const ActionSpace& actions,
                                  Rng& init_rng) {
  if (preset.agent == AgentKind::fixed) {
    LinkGains base;
    base.sigma_r2 = preset.sigma_r2;
    base.p_i = preset.p_i;
    return std::make_unique<FixedAgent>(actions, base);
  }
  if (preset.observation == ObservationMode::discrete) {
    return std::make_unique<QTableAgent>(actions.size(), preset.learner);
  }
  const double state_scale = preset.p_max + preset.p_i + preset.sigma_r2;
  return std::make_unique<DqnAgent>(actions.size(), preset.learner, state_scale, init_rng);
}

}  // namespace jamshield
