#include "jamshield/link_reward.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "jamshield/detector_math.hpp"
#include "jamshield/errors.hpp"

namespace jamshield {

int modulation_slot(int m) {
  switch (m) {
    case 2: return 0;
    case 4: return 1;
    case 8: return 2;
    case 16: return 3;
    case 32: return 4;
    case 64: return 5;
    default: return -1;
  }
}

ActionSpace::ActionSpace(int k, double p_max, std::vector<int> modulations,
                         std::vector<int> channels)
    : mods_(std::move(modulations)), channels_(std::move(channels)) {
  if (k < 1) throw ConfigError("action space: K must be >= 1");
  if (!(p_max > 0.0)) throw ConfigError("action space: p_max must be > 0");
  if (channels_.empty()) throw ConfigError("action space: channel list must be nonempty");
  for (int m : mods_) {
    if (modulation_slot(m) < 0)
      throw ConfigError("action space: unsupported modulation order " + std::to_string(m));
  }
  powers_.resize(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) {
    powers_[static_cast<std::size_t>(i)] = p_max * static_cast<double>(i) / static_cast<double>(k);
  }
}

int ActionSpace::size() const {
  const std::size_t mods = mods_.empty() ? 1 : mods_.size();
  return static_cast<int>(channels_.size() * powers_.size() * mods);
}

Action ActionSpace::decode(int index) const {
  const int mods = mods_.empty() ? 1 : static_cast<int>(mods_.size());
  const int per_channel = static_cast<int>(powers_.size()) * mods;
  if (index < 0 || index >= size()) throw std::out_of_range("action index out of range");
  const int c = index / per_channel;
  const int rem = index % per_channel;
  const int p = rem / mods;
  const int m = rem % mods;
  Action a;
  a.channel = channels_[static_cast<std::size_t>(c)];
  a.power = powers_[static_cast<std::size_t>(p)];
  a.power_index = p;
  a.modulation = mods_.empty() ? 0 : mods_[static_cast<std::size_t>(m)];
  return a;
}

int ActionSpace::encode(int channel_pos, int power_index, int modulation_pos) const {
  const int mods = mods_.empty() ? 1 : static_cast<int>(mods_.size());
  return (channel_pos * static_cast<int>(powers_.size()) + power_index) * mods + modulation_pos;
}

double sinr(double p_t, const LinkGains& gains, bool jammed_on_link) {
  const double signal = gains.h_tr * p_t;
  const double denom =
      jammed_on_link ? gains.h_jr * gains.p_i + gains.sigma_r2 : gains.sigma_r2;
  return signal / denom;
}

double shannon_reward(double s) { return std::log2(1.0 + s); }

double qam_ber(int m, double s) {
  if (modulation_slot(m) < 0)
    throw ConfigError("qam_ber: unsupported modulation order " + std::to_string(m));
  if (!(s >= 0.0)) throw std::domain_error("qam_ber: SINR must be >= 0");
  double ber;
  if (m == 2) {
    ber = gaussian_q(std::sqrt(2.0 * s));
  } else {
    const double bits = std::log2(static_cast<double>(m));
    ber = (4.0 / bits) * (1.0 - 1.0 / std::sqrt(static_cast<double>(m))) *
          gaussian_q(std::sqrt(3.0 * s / (static_cast<double>(m) - 1.0)));
  }
  if (ber < 0.0) return 0.0;
  if (ber > 0.5) return 0.5;
  return ber;
}

double throughput_reward(int m, double s) {
  return std::log2(static_cast<double>(m)) * (1.0 - qam_ber(m, s));
}

}  // namespace jamshield
