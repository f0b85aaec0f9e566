#include "jamshield/agents.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "jamshield/errors.hpp"

namespace jamshield {

namespace {
constexpr int kHidden = 64;
constexpr char kQTableMagic[8] = {'J', 'S', 'Q', 'T', '0', '0', '0', '1'};
}  // namespace

void LearnerConfig::validate() const {
  if (!(alpha > 0.0) || !(alpha <= 1.0)) throw ConfigError("learner: alpha must be in (0, 1]");
  if (!(gamma >= 0.0) || !(gamma <= 1.0)) throw ConfigError("learner: gamma must be in [0, 1]");
  for (double e : {eps_start, eps_final}) {
    if (!(e >= 0.0) || !(e <= 1.0)) throw ConfigError("learner: epsilon values must be in [0, 1]");
  }
  if (!(eps_final <= eps_start)) throw ConfigError("learner: eps_final must be <= eps_start");
  if (!(eps_decay > 0.0) || !(eps_decay < 1.0))
    throw ConfigError("learner: eps_decay must be in (0, 1)");
  if (!(eta > 0.0)) throw ConfigError("learner: eta must be > 0");
  if (batch < 1) throw ConfigError("learner: batch must be >= 1");
  if (buffer_capacity < batch) throw ConfigError("learner: buffer_capacity must be >= batch");
  if (target_sync < 1) throw ConfigError("learner: target_sync must be >= 1");
}

QTable::QTable(int states, int actions) : states_(states), actions_(actions) {
  if (states < 1 || actions < 1) throw std::invalid_argument("QTable: empty shape");
  v_.assign(static_cast<std::size_t>(states) * actions, 0.0);
}

void QTable::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("QTable::save: cannot open " + path);
  f.write(kQTableMagic, sizeof(kQTableMagic));
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(states_),
                                 static_cast<std::uint64_t>(actions_)};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  f.write(reinterpret_cast<const char*>(v_.data()),
          static_cast<std::streamsize>(v_.size() * sizeof(double)));
  if (!f) throw std::runtime_error("QTable::save: write failed for " + path);
}

QTable QTable::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("QTable::load: cannot open " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kQTableMagic, sizeof(kQTableMagic)) != 0)
    throw std::runtime_error("QTable::load: bad header in " + path);
  std::uint64_t dims[2];
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!f) throw std::runtime_error("QTable::load: truncated header in " + path);
  QTable t(static_cast<int>(dims[0]), static_cast<int>(dims[1]));
  f.read(reinterpret_cast<char*>(t.v_.data()),
         static_cast<std::streamsize>(t.v_.size() * sizeof(double)));
  if (!f) throw std::runtime_error("QTable::load: truncated values in " + path);
  return t;
}

int select_action(std::span<const double> values, double eps, Rng& rng) {
  const int n = static_cast<int>(values.size());
  if (eps > 0.0 && rng.uniform01() < eps) return rng.below(n);
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
  }
  return best;
}

void q_update(QTable& table, int s, int a, double r, int s_next, double alpha, double gamma) {
  const auto next = table.row(s_next);
  double best = next[0];
  for (std::size_t i = 1; i < next.size(); ++i) best = std::max(best, next[i]);
  double& q = table.at(s, a);
  q = q + alpha * (r + gamma * best - q);
}

double epsilon_step(double eps, double eps_final, double eps_decay) {
  return std::max(eps_final, eps * eps_decay);
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) {
  if (capacity == 0) throw std::invalid_argument("ReplayBuffer: zero capacity");
  store_.resize(capacity);
}

void ReplayBuffer::push(const Transition& t) {
  store_[head_] = t;
  head_ = (head_ + 1) % store_.size();
  size_ = std::min(size_ + 1, store_.size());
}

std::vector<double> td_targets(std::span<const Transition> batch, const Mlp& target, double gamma,
                               MlpWorkspace& ws) {
  std::vector<double> y(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = batch[i];
    if (t.episode_end) {
      y[i] = t.reward;
    } else {
      y[i] = t.reward + gamma * target.max_value({&t.next_state, 1}, ws);
    }
  }
  return y;
}

double dqn_batch_loss(const Mlp& online, std::span<const Transition> batch,
                      std::span<const double> targets, MlpWorkspace& ws) {
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double q = online.value_of({&batch[i].state, 1}, batch[i].action, ws);
    const double err = targets[i] - q;
    loss += err * err;
  }
  return loss / static_cast<double>(batch.size());
}

double dqn_batch_gradient(const Mlp& online, std::span<const Transition> batch,
                          std::span<const double> targets, MlpWorkspace& ws,
                          std::span<double> grad) {
  std::fill(grad.begin(), grad.end(), 0.0);
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const double q = online.value_of({&batch[i].state, 1}, batch[i].action, ws);
    const double err = targets[i] - q;
    loss += err * err;
    // dL/dq = -2 (y - q) / B
    online.backward_single({&batch[i].state, 1}, batch[i].action, -2.0 * err * inv_b, ws, grad);
  }
  return loss * inv_b;
}

void sgd_step(Mlp& net, std::span<const double> grad, double eta) {
  auto p = net.parameters();
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= eta * grad[i];
}

QTableAgent::QTableAgent(int num_actions, const LearnerConfig& cfg)
    : q_(2, num_actions), cfg_(cfg), eps_(cfg.eps_start) {}

int QTableAgent::choose(double observation, Rng& rng) {
  const int s = observation != 0.0 ? 1 : 0;
  return select_action(q_.row(s), eps_, rng);
}

void QTableAgent::learn(double observation, int action, double reward, double next_observation,
                        bool, Rng&) {
  const int s = observation != 0.0 ? 1 : 0;
  const int s_next = next_observation != 0.0 ? 1 : 0;
  q_update(q_, s, action, reward, s_next, cfg_.alpha, cfg_.gamma);
}

void QTableAgent::end_episode() { eps_ = epsilon_step(eps_, cfg_.eps_final, cfg_.eps_decay); }

DqnAgent::DqnAgent(int num_actions, const LearnerConfig& cfg, double state_scale, Rng& init_rng)
    : cfg_(cfg),
      state_scale_(state_scale),
      online_(1, kHidden, kHidden, num_actions),
      target_(1, kHidden, kHidden, num_actions),
      buffer_(static_cast<std::size_t>(cfg.buffer_capacity)),
      eps_(cfg.eps_start) {
  online_.init_uniform(init_rng);
  target_.set_parameters(online_.parameters());
  grad_.resize(online_.parameter_count());
  batch_.reserve(static_cast<std::size_t>(cfg_.batch));
  ws_.q.resize(static_cast<std::size_t>(num_actions));
}

int DqnAgent::choose(double observation, Rng& rng) {
  const double s = observation / state_scale_;
  online_.forward({&s, 1}, ws_.q, ws_);
  return select_action(ws_.q, eps_, rng);
}

void DqnAgent::learn(double observation, int action, double reward, double next_observation,
                     bool episode_end, Rng& rng) {
  Transition t;
  t.state = observation / state_scale_;
  t.action = action;
  t.reward = reward;
  t.next_state = next_observation / state_scale_;
  t.episode_end = episode_end;
  buffer_.push(t);
  if (buffer_.size() >= static_cast<std::size_t>(cfg_.batch)) learn_step(rng);
}

double DqnAgent::target_max_cached(double state) {
  const std::uint64_t key = std::bit_cast<std::uint64_t>(state);
  const auto it = target_cache_.find(key);
  if (it != target_cache_.end()) return it->second;
  const double v = target_.max_value({&state, 1}, ws_);
  target_cache_.emplace(key, v);
  return v;
}

void DqnAgent::learn_step(Rng& rng) {
  batch_.clear();
  for (int i = 0; i < cfg_.batch; ++i) {
    batch_.push_back(buffer_.at(static_cast<std::size_t>(rng.below(static_cast<int>(buffer_.size())))));
  }
  targets_.resize(batch_.size());
  for (std::size_t i = 0; i < batch_.size(); ++i) {
    const Transition& t = batch_[i];
    targets_[i] = t.episode_end ? t.reward : t.reward + cfg_.gamma * target_max_cached(t.next_state);
  }
  const double loss = dqn_batch_gradient(online_, batch_, targets_, ws_, grad_);
  if (!std::isfinite(loss)) throw TrainingDivergenceError("DQN loss became non-finite");
  sgd_step(online_, grad_, cfg_.eta);
  ++grad_steps_;
  if (grad_steps_ % cfg_.target_sync == 0) {
    if (!online_.all_finite())
      throw TrainingDivergenceError("DQN parameters became non-finite before target sync");
    target_.set_parameters(online_.parameters());
    target_cache_.clear();
  }
}

void DqnAgent::end_episode() { eps_ = epsilon_step(eps_, cfg_.eps_final, cfg_.eps_decay); }

FixedAgent::FixedAgent(const ActionSpace& actions, const LinkGains& base_gains) {
  const int top_power = static_cast<int>(actions.power_levels().size()) - 1;
  int mod_pos = 0;
  if (actions.has_modulation()) {
    // Committed before any jamming is observed: the order that maximizes
    // throughput on the unjammed link at maximum power.
    const double s = sinr(actions.power_levels().back(), base_gains, false);
    double best = -1.0;
    for (std::size_t i = 0; i < actions.modulations().size(); ++i) {
      const double t = throughput_reward(actions.modulations()[i], s);
      if (t > best) {
        best = t;
        mod_pos = static_cast<int>(i);
      }
    }
    fixed_modulation_ = actions.modulations()[static_cast<std::size_t>(mod_pos)];
  }
  for (std::size_t c = 0; c < actions.channels().size(); ++c) {
    per_channel_action_.push_back(actions.encode(static_cast<int>(c), top_power, mod_pos));
  }
}

void FixedAgent::begin_episode(long) { slot_ = 0; }

int FixedAgent::choose(double, Rng&) {
  const std::size_t c = static_cast<std::size_t>(slot_ % static_cast<long>(per_channel_action_.size()));
  ++slot_;
  return per_channel_action_[c];
}

}  // namespace jamshield
