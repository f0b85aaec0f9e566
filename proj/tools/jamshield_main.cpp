#include <cstdlib>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "jamshield/errors.hpp"
#include "jamshield/harness.hpp"
#include "jamshield/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;

int run_command(const std::string& config_path, bool seed_given, std::uint64_t seed_flag,
                const std::string& out_path, const std::string& summary_path) {
  jamshield::ExperimentPreset preset = jamshield::parse_config(config_path);
  if (const char* env_seed = std::getenv("JAMSHIELD_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env_seed, &end, 10);
    if (end == env_seed || *end != '\0')
      throw jamshield::ConfigError(std::string("JAMSHIELD_SEED is not an integer: ") + env_seed);
    preset.seed = v;
  }
  if (seed_given) preset.seed = seed_flag;

  const jamshield::RunResult result = jamshield::run_experiment(preset, preset.seed);
  jamshield::write_metrics_csv(result.rows, out_path);
  if (!summary_path.empty()) jamshield::write_summary_csv(result.summary, summary_path);

  std::cout << "episodes " << result.summary.episodes << ", seed " << result.summary.seed
            << ", total reward " << result.summary.total_reward << ", wrote " << out_path;
  if (!summary_path.empty()) std::cout << " and " << summary_path;
  std::cout << '\n';
  return kExitOk;
}

int table_command(int id, const std::string& scale_name, int seeds, std::uint64_t base_seed,
                  std::string out_path, int jobs) {
  const jamshield::Scale scale =
      scale_name == "desk" ? jamshield::Scale::desk : jamshield::Scale::full;
  if (out_path.empty())
    out_path = "table" + std::to_string(id) + "_" + scale_name + ".csv";
  const jamshield::TableReport report =
      jamshield::reproduce_table(id, scale, seeds, base_seed, jobs);
  jamshield::print_table_report(report, std::cout);
  jamshield::write_table_report_csv(report, out_path);
  std::cout << "wrote " << out_path << '\n';
  return report.all_pass() ? kExitOk : kExitVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reactive-jamming mitigation testbed: a transmitter that learns "
               "power/modulation/channel policies against a threshold-switching jammer"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  std::string config_path;
  std::uint64_t seed_flag = 0;
  std::string out_path = "metrics.csv";
  std::string summary_path;
  run->add_option("--config", config_path, "Flat key = value config file")->required();
  auto* seed_opt = run->add_option("--seed", seed_flag, "Override the run seed");
  run->add_option("--out", out_path, "Per-episode metrics CSV path");
  run->add_option("--summary", summary_path, "Run summary CSV path");

  auto* table = app.add_subcommand("table", "Reproduce one of the reported total-reward tables");
  int table_id = 0;
  std::string scale_name = "full";
  int seeds = 1;
  std::uint64_t base_seed = 1;
  std::string report_path;
  int jobs = static_cast<int>(std::thread::hardware_concurrency());
  if (jobs < 1) jobs = 1;
  table->add_option("--id", table_id, "Table id")->required()->check(CLI::IsMember({2, 3, 5, 6}));
  table->add_option("--scale", scale_name, "full (20000 episodes) or desk (4000)")
      ->check(CLI::IsMember({"full", "desk"}));
  table->add_option("--seeds", seeds, "Number of seeds to average")->check(CLI::PositiveNumber);
  table->add_option("--seed", base_seed, "First seed");
  table->add_option("--out", report_path, "Report CSV path");
  table->add_option("--jobs", jobs, "Parallel experiment workers")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run the analytic and oracle self-checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return run_command(config_path, seed_opt->count() > 0, seed_flag, out_path, summary_path);
    }
    if (table->parsed()) {
      return table_command(table_id, scale_name, seeds, base_seed, report_path, jobs);
    }
    if (verify->parsed()) {
      return jamshield::run_verification(std::cout) ? kExitOk : kExitVerificationFailure;
    }
  } catch (const jamshield::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitVerificationFailure;
  }
  return kExitOk;
}
