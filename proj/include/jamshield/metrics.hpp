#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace jamshield {

// One row per episode; the series behind the reward/power/jamming-rate plots.
struct MetricsRow {
  long episode = 0;
  double mean_reward = 0.0;  // mean per-step reward over the horizon
  double jam_rate = 0.0;     // fraction of slots with the jam indicator set
  double mean_power = 0.0;
  double eps = 0.0;          // exploration rate at episode start
  std::array<long, 6> mod_counts{};  // picks of {2,4,8,16,32,64}; zero in PC mode
};

struct RunSummary {
  double total_reward = 0.0;             // sum of the per-episode mean rewards
  std::vector<double> block_means;       // average episode mean per schedule block
  double wall_seconds = 0.0;
  std::uint64_t seed = 0;
  std::string config_digest;
  long episodes = 0;
  int horizon = 0;
};

// Header: episode,mean_reward,jam_rate,mean_power,eps,mod2,...,mod64.
// Doubles are written with %.17g so a parse round-trips bit-exactly.
void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);
std::vector<MetricsRow> read_metrics_csv(const std::string& path);

// Two-column key,value layout (block count varies with the schedule).
void write_summary_csv(const RunSummary& summary, const std::string& path);

}  // namespace jamshield
