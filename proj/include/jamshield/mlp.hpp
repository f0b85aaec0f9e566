#pragma once

#include <span>
#include <string>
#include <vector>

#include "jamshield/rng.hpp"

namespace jamshield {

struct MlpWorkspace {
  std::vector<double> h1, h2, dh1, q;
};

// Fully connected value network: input -> hidden1 -> hidden2 -> output with
// rectified-linear hidden units and a linear output layer. Parameters live in
// one flat buffer (row-major weights, then biases, per layer) so gradient
// checks and persistence can treat the network as a plain vector.
class Mlp {
 public:
  Mlp(int input, int hidden1, int hidden2, int output);

  // Weights uniform on [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
  void init_uniform(Rng& rng);

  int input_size() const { return in_; }
  int output_size() const { return out_; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<const double> parameters() const { return params_; }
  std::span<double> parameters() { return params_; }
  void set_parameters(std::span<const double> p);

  // Full forward pass; q receives output_size() action values.
  void forward(std::span<const double> x, std::span<double> q, MlpWorkspace& ws) const;

  // Forward pass that evaluates a single output unit; hidden activations stay
  // in ws for a following backward_single call.
  double value_of(std::span<const double> x, int action, MlpWorkspace& ws) const;

  // Max over all output units (used for TD targets).
  double max_value(std::span<const double> x, MlpWorkspace& ws) const;

  // Accumulates d(upstream * q[action])/d(theta) into grad, which must have
  // parameter_count() entries. ws must hold the activations of the matching
  // value_of/forward call on the same input.
  void backward_single(std::span<const double> x, int action, double upstream,
                       const MlpWorkspace& ws, std::span<double> grad) const;

  bool all_finite() const;

  // Versioned little-endian binary dump; round-trips bit-exactly.
  void save(const std::string& path) const;
  static Mlp load(const std::string& path);

 private:
  void hidden_forward(std::span<const double> x, MlpWorkspace& ws) const;

  int in_, h1n_, h2n_, out_;
  std::size_t w1_ = 0, b1_ = 0, w2_ = 0, b2_ = 0, w3_ = 0, b3_ = 0;  // offsets
  std::vector<double> params_;
};

}  // namespace jamshield
