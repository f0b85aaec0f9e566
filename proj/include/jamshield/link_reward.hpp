#pragma once

#include <span>
#include <vector>

namespace jamshield {

struct LinkGains {
  double h_tr = 1.0;      // transmitter -> receiver
  double h_tj = 0.5;      // transmitter -> jammer
  double h_jr = 1.0;      // jammer -> receiver
  double sigma_r2 = 0.1;  // receiver noise power
  double p_i = 100.0;     // jammer interference power
};

struct Action {
  int channel = 0;
  double power = 0.0;
  int modulation = 0;  // 0 in power-control-only mode
  int power_index = 0;
};

// Cartesian action grid, enumerated channel-major, then power, then
// modulation. Power levels are P_k = p_max * k / K for k = 0..K.
class ActionSpace {
 public:
  ActionSpace() = default;
  ActionSpace(int k, double p_max, std::vector<int> modulations, std::vector<int> channels);

  int size() const;
  Action decode(int index) const;
  int encode(int channel_pos, int power_index, int modulation_pos) const;

  const std::vector<double>& power_levels() const { return powers_; }
  const std::vector<int>& modulations() const { return mods_; }
  const std::vector<int>& channels() const { return channels_; }
  bool has_modulation() const { return !mods_.empty(); }
  bool multi_channel() const { return channels_.size() > 1; }

 private:
  std::vector<double> powers_;
  std::vector<int> mods_;
  std::vector<int> channels_;
};

// Received SINR (linear). jammed_on_link is J_t on a single channel and
// d_t = 1(c_T = c_J, J_t = 1) in the multi-channel setting.
double sinr(double p_t, const LinkGains& gains, bool jammed_on_link);

// log2(1 + sinr), bits/s/Hz.
double shannon_reward(double s);

// Uncoded M-QAM bit error rate at linear SINR s, clamped to [0, 0.5].
// BPSK uses Q(sqrt(2 s)); the QAM orders use the nearest-neighbor
// approximation (4 / log2 m)(1 - 1/sqrt(m)) Q(sqrt(3 s / (m - 1))).
double qam_ber(int m, double s);

// log2(m) * (1 - BER): effective uncoded bits per symbol.
double throughput_reward(int m, double s);

// Index into {2,4,8,16,32,64}, or -1 if unsupported.
int modulation_slot(int m);

inline constexpr int kSupportedModulations[] = {2, 4, 8, 16, 32, 64};

}  // namespace jamshield
