#include "jamshield/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "jamshield/errors.hpp"

namespace jamshield {

MetricsRow run_episode(Environment& env, Agent& agent, long episode, Rng& rng) {
  const int horizon = env.config().horizon;
  const ActionSpace& actions = env.actions();

  MetricsRow row;
  row.episode = episode;
  row.eps = agent.epsilon();

  double obs = env.reset(episode, rng);
  agent.begin_episode(episode);

  double reward_sum = 0.0;
  double power_sum = 0.0;
  long jams = 0;
  for (int slot = 0; slot < horizon; ++slot) {
    const int a = agent.choose(obs, rng);
    const StepOutcome out = env.step(a, rng);
    agent.learn(obs, a, out.reward, out.observation, out.episode_end, rng);

    const Action act = actions.decode(a);
    reward_sum += out.reward;
    power_sum += act.power;
    jams += out.jam_indicator;
    if (act.modulation != 0) {
      ++row.mod_counts[static_cast<std::size_t>(modulation_slot(act.modulation))];
    }
    obs = out.observation;
  }
  agent.end_episode();

  row.mean_reward = reward_sum / horizon;
  row.jam_rate = static_cast<double>(jams) / horizon;
  row.mean_power = power_sum / horizon;
  return row;
}

RunResult run_experiment(const ExperimentPreset& preset, std::uint64_t seed, long max_episodes) {
  const auto t0 = std::chrono::steady_clock::now();

  Environment env(make_env_config(preset));
  Rng init_rng(hash_combine(seed, kAgentStream));
  auto agent = make_agent(preset, env.actions(), init_rng);

  long episodes = preset.episodes;
  if (max_episodes >= 0 && max_episodes < episodes) episodes = max_episodes;

  RunResult result;
  result.rows.reserve(static_cast<std::size_t>(episodes));
  const std::uint64_t episode_stream = hash_combine(seed, kEpisodeStream);
  for (long ep = 0; ep < episodes; ++ep) {
    Rng ep_rng(hash_combine(episode_stream, static_cast<std::uint64_t>(ep)));
    result.rows.push_back(run_episode(env, *agent, ep, ep_rng));
  }

  RunSummary& s = result.summary;
  s.seed = seed;
  s.episodes = episodes;
  s.horizon = preset.horizon;
  s.config_digest = preset.digest();
  const auto& blocks = env.config().schedule.blocks;
  s.block_means.assign(blocks.size(), 0.0);
  std::vector<long> block_counts(blocks.size(), 0);
  for (const MetricsRow& row : result.rows) {
    s.total_reward += row.mean_reward;
    const int b = env.config().schedule.block_index(row.episode);
    s.block_means[static_cast<std::size_t>(b)] += row.mean_reward;
    ++block_counts[static_cast<std::size_t>(b)];
  }
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (block_counts[b] > 0) s.block_means[b] /= static_cast<double>(block_counts[b]);
  }
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

double TableLine::mean() const {
  double m = 0.0;
  for (double t : totals) m += t;
  return totals.empty() ? 0.0 : m / static_cast<double>(totals.size());
}

double TableLine::spread() const {
  if (totals.size() < 2) return 0.0;
  const double m = mean();
  double ss = 0.0;
  for (double t : totals) ss += (t - m) * (t - m);
  return std::sqrt(ss / static_cast<double>(totals.size() - 1));
}

bool TableReport::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

namespace {

constexpr double kSigmaList[] = {0.0, 1e-4, 1e-3};

struct LineSpec {
  const char* preset;
  double sigma;
  double paper;
};

void run_lines(TableReport& report, const std::vector<LineSpec>& specs, Scale scale,
               int num_seeds, std::uint64_t base_seed, int workers) {
  report.lines.resize(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    report.lines[i].preset = specs[i].preset;
    report.lines[i].sigma_j2 = specs[i].sigma;
    report.lines[i].paper_total = specs[i].paper;
    report.lines[i].totals.assign(static_cast<std::size_t>(num_seeds), 0.0);
  }

  struct Job {
    std::size_t line;
    int seed_index;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (int s = 0; s < num_seeds; ++s) jobs.push_back({i, s});
  }

  std::atomic<std::size_t> cursor{0};
  std::mutex error_mutex;
  std::string first_error;
  auto worker = [&]() {
    for (;;) {
      const std::size_t j = cursor.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job job = jobs[j];
      try {
        ExperimentPreset preset = apply_scale(preset_by_name(specs[job.line].preset), scale);
        preset.sigma_j2 = specs[job.line].sigma;
        const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(job.seed_index);
        const RunResult r = run_experiment(preset, seed);
        report.lines[job.line].totals[static_cast<std::size_t>(job.seed_index)] =
            r.summary.total_reward;
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };

  const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(n - 1));
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);
}

const TableLine* find_line(const TableReport& report, const std::string& preset, double sigma) {
  for (const auto& line : report.lines) {
    if (line.preset == preset && line.sigma_j2 == sigma) return &line;
  }
  return nullptr;
}

void check(TableReport& report, const std::string& description, bool pass) {
  report.checks.push_back({description, pass});
}

std::string sigma_text(double sigma) {
  if (sigma == 0.0) return "0";
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%g", sigma);
  return buf;
}

void add_rl_vs_fixed_checks(TableReport& report, const std::string& rl, const std::string& fixed) {
  for (double sigma : kSigmaList) {
    const TableLine* a = find_line(report, rl, sigma);
    const TableLine* b = find_line(report, fixed, sigma);
    check(report, rl + " > " + fixed + " at sigma_j2=" + sigma_text(sigma),
          a && b && a->mean() > b->mean());
  }
}

void add_sigma_monotone_check(TableReport& report, const std::string& rl) {
  const TableLine* s0 = find_line(report, rl, 0.0);
  const TableLine* s4 = find_line(report, rl, 1e-4);
  const TableLine* s3 = find_line(report, rl, 1e-3);
  check(report, rl + " total nonincreasing in sigma_j2",
        s0 && s4 && s3 && s0->mean() >= s4->mean() && s4->mean() >= s3->mean());
}

}  // namespace

TableReport reproduce_table(int table_id, Scale scale, int num_seeds, std::uint64_t base_seed,
                            int workers) {
  if (num_seeds < 1) throw ConfigError("reproduce_table: seeds must be >= 1");
  TableReport report;
  report.table_id = table_id;
  report.scale = scale;
  report.seeds = num_seeds;

  if (table_id == 2 || table_id == 3 || table_id == 5) {
    static const double kPaper[3][2][3] = {
        // {rl, fixed} x sigma in {0, 1e-4, 1e-3}
        {{36552.44, 34849.52, 31264.54}, {428.54, 428.54, 717.91}},     // table 2
        {{37053.69, 36055.70, 33905.70}, {12059.80, 12059.80, 12272.49}},  // table 3
        {{43736.50, 43057.46, 41183.54}, {22195.21, 22195.21, 22461.99}},  // table 5
    };
    const int t = table_id == 2 ? 0 : (table_id == 3 ? 1 : 2);
    const std::string rl = "table" + std::to_string(table_id) + "-rl";
    const std::string fixed = "table" + std::to_string(table_id) + "-fixed";
    std::vector<LineSpec> specs;
    for (int s = 0; s < 3; ++s) specs.push_back({nullptr, kSigmaList[s], kPaper[t][0][s]});
    for (int s = 0; s < 3; ++s) specs.push_back({nullptr, kSigmaList[s], kPaper[t][1][s]});
    std::vector<std::string> names;
    for (std::size_t i = 0; i < specs.size(); ++i) names.push_back(i < 3 ? rl : fixed);
    for (std::size_t i = 0; i < specs.size(); ++i) specs[i].preset = names[i].c_str();
    run_lines(report, specs, scale, num_seeds, base_seed, workers);

    // Pass/fail checks only where the runs are numeric reproductions. The
    // PCAM/multi-channel tables depend on the artifact's BER model (the
    // published one is unspecified), so several published patterns do not
    // carry over: the slot-alternating baseline is near-optimal under a
    // clamped uncoded-throughput reward, and rare co-channel misses at high
    // noise can raise the multi-channel total. Those cells are reported side
    // by side without a verdict.
    if (scale == Scale::full) {
      if (table_id == 2) {
        const TableLine* f0 = find_line(report, fixed, 0.0);
        check(report, "table2-fixed sigma_j2=0 total within 428.55 +- 0.5",
              f0 && std::fabs(f0->mean() - 428.55) <= 0.5);
        for (int s = 0; s < 3; ++s) {
          const TableLine* line = find_line(report, rl, kSigmaList[s]);
          const double paper = kPaper[0][0][s];
          char label[80];
          std::snprintf(label, sizeof(label), "table2-rl sigma_j2=%s within 10%% of %.2f",
                        sigma_text(kSigmaList[s]).c_str(), paper);
          check(report, label, line && std::fabs(line->mean() - paper) <= 0.10 * paper);
        }
        const TableLine* s0 = find_line(report, rl, 0.0);
        const TableLine* s4 = find_line(report, rl, 1e-4);
        const TableLine* s3 = find_line(report, rl, 1e-3);
        check(report, "table2-rl totals strictly decreasing in sigma_j2",
              s0 && s4 && s3 && s0->mean() > s4->mean() && s4->mean() > s3->mean());
      }
      if (table_id == 2 || table_id == 3) add_rl_vs_fixed_checks(report, rl, fixed);
      if (table_id == 3) add_sigma_monotone_check(report, rl);
    }
  } else if (table_id == 6) {
    std::vector<LineSpec> specs = {
        {"table6-sc-discrete", 0.0, 37053.69},
        {"table6-sc-continuous", 0.0, 35972.87},
        {"table6-mc-discrete", 0.0, 43736.50},
        {"table6-mc-continuous", 0.0, 39439.82},
    };
    run_lines(report, specs, scale, num_seeds, base_seed, workers);
    const TableLine* sc_d = find_line(report, "table6-sc-discrete", 0.0);
    const TableLine* sc_c = find_line(report, "table6-sc-continuous", 0.0);
    const TableLine* mc_d = find_line(report, "table6-mc-discrete", 0.0);
    const TableLine* mc_c = find_line(report, "table6-mc-continuous", 0.0);
    check(report, "single-channel: discrete-state total >= continuous-state total",
          sc_d && sc_c && sc_d->mean() >= sc_c->mean());
    check(report, "multi-channel: discrete-state total >= continuous-state total",
          mc_d && mc_c && mc_d->mean() >= mc_c->mean());
    check(report, "multi-channel discrete total > single-channel discrete total",
          mc_d && sc_d && mc_d->mean() > sc_d->mean());
  } else {
    throw ConfigError("reproduce_table: table id must be one of 2, 3, 5, 6");
  }
  return report;
}

void print_table_report(const TableReport& report, std::ostream& out) {
  char buf[200];
  std::snprintf(buf, sizeof(buf), "Table %d (%s scale, %d seed%s)\n", report.table_id,
                report.scale == Scale::full ? "full" : "desk", report.seeds,
                report.seeds == 1 ? "" : "s");
  out << buf;
  std::snprintf(buf, sizeof(buf), "  %-22s %10s %14s %14s %12s\n", "preset", "sigma_j2",
                "artifact", "paper", "spread");
  out << buf;
  for (const auto& line : report.lines) {
    std::snprintf(buf, sizeof(buf), "  %-22s %10s %14.2f %14.2f %12.2f\n", line.preset.c_str(),
                  sigma_text(line.sigma_j2).c_str(), line.mean(), line.paper_total, line.spread());
    out << buf;
  }
  for (const auto& c : report.checks) {
    out << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.description << '\n';
  }
}

void write_table_report_csv(const TableReport& report, const std::string& path) {
  std::string out = "table,scale,seeds,preset,sigma_j2,artifact_mean,artifact_spread,paper_total\n";
  char buf[240];
  for (const auto& line : report.lines) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%d,%s,%s,%.17g,%.17g,%.2f\n", report.table_id,
                  report.scale == Scale::full ? "full" : "desk", report.seeds,
                  line.preset.c_str(), sigma_text(line.sigma_j2).c_str(), line.mean(),
                  line.spread(), line.paper_total);
    out += buf;
  }
  for (const auto& c : report.checks) {
    out += "check,,,\"";
    out += c.description;
    out += "\",,";
    out += c.pass ? "pass" : "fail";
    out += ",\n";
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_table_report_csv: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write_table_report_csv: write failed for " + path);
}

}  // namespace jamshield
