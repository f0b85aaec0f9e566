#include "jamshield/metrics.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jamshield {

namespace {

const char kHeader[] = "episode,mean_reward,jam_rate,mean_power,eps,mod2,mod4,mod8,mod16,mod32,mod64";

void append(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
  std::string out;
  out.reserve(rows.size() * 96 + 80);
  out += kHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.episode);
    out += ',';
    append(out, r.mean_reward);
    out += ',';
    append(out, r.jam_rate);
    out += ',';
    append(out, r.mean_power);
    out += ',';
    append(out, r.eps);
    for (long c : r.mod_counts) {
      out += ',';
      out += std::to_string(c);
    }
    out += '\n';
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_metrics_csv: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write_metrics_csv: write failed for " + path);
}

std::vector<MetricsRow> read_metrics_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_metrics_csv: cannot open " + path);
  std::string line;
  if (!std::getline(f, line) || line != kHeader)
    throw std::runtime_error("read_metrics_csv: unexpected header in " + path);
  std::vector<MetricsRow> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string field;
    MetricsRow r;
    auto next = [&]() {
      if (!std::getline(ss, field, ','))
        throw std::runtime_error("read_metrics_csv: short row in " + path);
      return field.c_str();
    };
    r.episode = std::strtol(next(), nullptr, 10);
    r.mean_reward = std::strtod(next(), nullptr);
    r.jam_rate = std::strtod(next(), nullptr);
    r.mean_power = std::strtod(next(), nullptr);
    r.eps = std::strtod(next(), nullptr);
    for (auto& c : r.mod_counts) c = std::strtol(next(), nullptr, 10);
    rows.push_back(r);
  }
  return rows;
}

void write_summary_csv(const RunSummary& summary, const std::string& path) {
  std::string out = "key,value\n";
  out += "seed," + std::to_string(summary.seed) + '\n';
  out += "episodes," + std::to_string(summary.episodes) + '\n';
  out += "horizon," + std::to_string(summary.horizon) + '\n';
  out += "total_reward,";
  append(out, summary.total_reward);
  out += '\n';
  for (std::size_t b = 0; b < summary.block_means.size(); ++b) {
    out += "block" + std::to_string(b) + "_mean,";
    append(out, summary.block_means[b]);
    out += '\n';
  }
  out += "wall_seconds,";
  append(out, summary.wall_seconds);
  out += '\n';
  out += "config_digest," + summary.config_digest + '\n';
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("write_summary_csv: cannot open " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("write_summary_csv: write failed for " + path);
}

}  // namespace jamshield
