#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "jamshield/link_reward.hpp"
#include "jamshield/mlp.hpp"
#include "jamshield/rng.hpp"

namespace jamshield {

enum class RewardMode;  // environment.hpp

struct LearnerConfig {
  double alpha = 0.1;
  double gamma = 0.95;
  double eps_start = 1.0;
  double eps_final = 0.01;
  double eps_decay = 0.999;
  double eta = 1e-3;        // value-network step size (plain SGD)
  int batch = 64;
  int buffer_capacity = 100000;
  int target_sync = 1000;   // gradient steps between target-network copies

  void validate() const;  // throws ConfigError
};

// Action-value table over discrete states, zero-initialized.
class QTable {
 public:
  QTable(int states, int actions);

  int states() const { return states_; }
  int actions() const { return actions_; }
  double at(int s, int a) const { return v_[index(s, a)]; }
  double& at(int s, int a) { return v_[index(s, a)]; }
  std::span<const double> row(int s) const {
    return {v_.data() + static_cast<std::size_t>(s) * actions_, static_cast<std::size_t>(actions_)};
  }

  // Versioned little-endian binary dump; round-trips bit-exactly.
  void save(const std::string& path) const;
  static QTable load(const std::string& path);

 private:
  std::size_t index(int s, int a) const {
    return static_cast<std::size_t>(s) * actions_ + static_cast<std::size_t>(a);
  }
  int states_, actions_;
  std::vector<double> v_;
};

// Epsilon-greedy pick over the given action values; greedy ties break toward
// the lowest index so runs stay deterministic.
int select_action(std::span<const double> values, double eps, Rng& rng);

// One-step TD update: Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).
void q_update(QTable& table, int s, int a, double r, int s_next, double alpha, double gamma);

// Per-episode decay: max(eps_final, eps * eps_decay).
double epsilon_step(double eps, double eps_final, double eps_decay);

struct Transition {
  double state = 0.0;
  int action = 0;
  double reward = 0.0;
  double next_state = 0.0;
  bool episode_end = false;
};

// Bounded ring store; overwrites the oldest transition when full.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity);
  void push(const Transition& t);
  std::size_t size() const { return size_; }
  std::size_t capacity() const { return store_.size(); }
  const Transition& at(std::size_t i) const { return store_[i]; }  // storage order

 private:
  std::vector<Transition> store_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
};

// y_i = r_i + gamma * (1 - e_i) * max_a' Q(s'_i, a'; theta-). Terminal
// transitions receive exactly r_i.
std::vector<double> td_targets(std::span<const Transition> batch, const Mlp& target, double gamma,
                               MlpWorkspace& ws);

// Mean-squared Bellman error against fixed targets.
double dqn_batch_loss(const Mlp& online, std::span<const Transition> batch,
                      std::span<const double> targets, MlpWorkspace& ws);

// Fills grad (parameter_count entries, zeroed here) with dL/dtheta and
// returns the loss.
double dqn_batch_gradient(const Mlp& online, std::span<const Transition> batch,
                          std::span<const double> targets, MlpWorkspace& ws,
                          std::span<double> grad);

void sgd_step(Mlp& net, std::span<const double> grad, double eta);

// What the harness drives once per slot.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual void begin_episode(long /*episode*/) {}
  virtual int choose(double observation, Rng& rng) = 0;
  virtual void learn(double observation, int action, double reward, double next_observation,
                     bool episode_end, Rng& rng) = 0;
  virtual void end_episode() {}
  virtual double epsilon() const { return 0.0; }
};

// Tabular Q-learning over the binary jam-indicator state.
class QTableAgent final : public Agent {
 public:
  QTableAgent(int num_actions, const LearnerConfig& cfg);

  int choose(double observation, Rng& rng) override;
  void learn(double observation, int action, double reward, double next_observation,
             bool episode_end, Rng& rng) override;
  void end_episode() override;
  double epsilon() const override { return eps_; }

  const QTable& table() const { return q_; }
  QTable& table() { return q_; }

 private:
  QTable q_;
  LearnerConfig cfg_;
  double eps_;
};

// DQN over the continuous received-power state with experience replay and a
// delayed target network. States are normalized by state_scale before they
// reach the network.
class DqnAgent final : public Agent {
 public:
  DqnAgent(int num_actions, const LearnerConfig& cfg, double state_scale, Rng& init_rng);

  int choose(double observation, Rng& rng) override;
  void learn(double observation, int action, double reward, double next_observation,
             bool episode_end, Rng& rng) override;
  void end_episode() override;
  double epsilon() const override { return eps_; }

  const Mlp& online() const { return online_; }
  const Mlp& target() const { return target_; }
  const ReplayBuffer& buffer() const { return buffer_; }
  long gradient_steps() const { return grad_steps_; }

 private:
  void learn_step(Rng& rng);
  double target_max_cached(double state);

  LearnerConfig cfg_;
  double state_scale_;
  Mlp online_;
  Mlp target_;
  ReplayBuffer buffer_;
  double eps_;
  long grad_steps_ = 0;
  MlpWorkspace ws_;
  std::vector<Transition> batch_;
  std::vector<double> grad_;
  std::vector<double> targets_;
  // The target network is frozen between syncs and the received-power states
  // take few distinct values, so its max is memoized per state bit pattern.
  std::unordered_map<std::uint64_t, double> target_cache_;
};

// Non-adaptive baseline: maximum power, the best fixed modulation for the
// unjammed link (when modulations exist), and a channel that alternates every
// slot in the multi-channel case.
class FixedAgent final : public Agent {
 public:
  FixedAgent(const ActionSpace& actions, const LinkGains& base_gains);

  void begin_episode(long episode) override;
  int choose(double observation, Rng& rng) override;
  void learn(double, int, double, double, bool, Rng&) override {}

  int fixed_modulation() const { return fixed_modulation_; }

 private:
  std::vector<int> per_channel_action_;
  int fixed_modulation_ = 0;
  long slot_ = 0;
};

}  // namespace jamshield
