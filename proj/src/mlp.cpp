#include "jamshield/mlp.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "jamshield/errors.hpp"

namespace jamshield {

namespace {

inline double dot(const double* __restrict a, const double* __restrict b, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

inline void axpy(double* __restrict y, const double* __restrict x, double a, int n) {
  for (int i = 0; i < n; ++i) y[i] += a * x[i];
}

constexpr char kMagic[8] = {'J', 'S', 'N', 'N', '0', '0', '0', '1'};

}  // namespace

Mlp::Mlp(int input, int hidden1, int hidden2, int output)
    : in_(input), h1n_(hidden1), h2n_(hidden2), out_(output) {
  if (input < 1 || hidden1 < 1 || hidden2 < 1 || output < 1)
    throw std::invalid_argument("Mlp: all layer sizes must be >= 1");
  w1_ = 0;
  b1_ = w1_ + static_cast<std::size_t>(h1n_) * in_;
  w2_ = b1_ + static_cast<std::size_t>(h1n_);
  b2_ = w2_ + static_cast<std::size_t>(h2n_) * h1n_;
  w3_ = b2_ + static_cast<std::size_t>(h2n_);
  b3_ = w3_ + static_cast<std::size_t>(out_) * h2n_;
  params_.assign(b3_ + static_cast<std::size_t>(out_), 0.0);
}

void Mlp::init_uniform(Rng& rng) {
  auto fill = [&rng](double* w, std::size_t count, int fan_in) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    for (std::size_t i = 0; i < count; ++i) w[i] = (2.0 * rng.uniform01() - 1.0) * bound;
  };
  fill(params_.data() + w1_, static_cast<std::size_t>(h1n_) * in_, in_);
  fill(params_.data() + w2_, static_cast<std::size_t>(h2n_) * h1n_, h1n_);
  fill(params_.data() + w3_, static_cast<std::size_t>(out_) * h2n_, h2n_);
  std::memset(params_.data() + b1_, 0, sizeof(double) * static_cast<std::size_t>(h1n_));
  std::memset(params_.data() + b2_, 0, sizeof(double) * static_cast<std::size_t>(h2n_));
  std::memset(params_.data() + b3_, 0, sizeof(double) * static_cast<std::size_t>(out_));
}

void Mlp::set_parameters(std::span<const double> p) {
  if (p.size() != params_.size()) throw std::invalid_argument("Mlp: parameter size mismatch");
  std::memcpy(params_.data(), p.data(), p.size() * sizeof(double));
}

void Mlp::hidden_forward(std::span<const double> x, MlpWorkspace& ws) const {
  ws.h1.resize(static_cast<std::size_t>(h1n_));
  ws.h2.resize(static_cast<std::size_t>(h2n_));
  const double* w1 = params_.data() + w1_;
  const double* b1 = params_.data() + b1_;
  for (int i = 0; i < h1n_; ++i) {
    const double z = dot(w1 + static_cast<std::size_t>(i) * in_, x.data(), in_) + b1[i];
    ws.h1[static_cast<std::size_t>(i)] = z > 0.0 ? z : 0.0;
  }
  const double* w2 = params_.data() + w2_;
  const double* b2 = params_.data() + b2_;
  for (int j = 0; j < h2n_; ++j) {
    const double z = dot(w2 + static_cast<std::size_t>(j) * h1n_, ws.h1.data(), h1n_) + b2[j];
    ws.h2[static_cast<std::size_t>(j)] = z > 0.0 ? z : 0.0;
  }
}

void Mlp::forward(std::span<const double> x, std::span<double> q, MlpWorkspace& ws) const {
  hidden_forward(x, ws);
  const double* w3 = params_.data() + w3_;
  const double* b3 = params_.data() + b3_;
  double probe = 0.0;
  for (int o = 0; o < out_; ++o) {
    q[static_cast<std::size_t>(o)] = dot(w3 + static_cast<std::size_t>(o) * h2n_, ws.h2.data(), h2n_) + b3[o];
    probe += q[static_cast<std::size_t>(o)];
  }
  if (!std::isfinite(probe))
    throw TrainingDivergenceError("Mlp::forward produced non-finite action values");
}

double Mlp::value_of(std::span<const double> x, int action, MlpWorkspace& ws) const {
  hidden_forward(x, ws);
  const double v = dot(params_.data() + w3_ + static_cast<std::size_t>(action) * h2n_,
                       ws.h2.data(), h2n_) +
                   params_[b3_ + static_cast<std::size_t>(action)];
  if (!std::isfinite(v)) throw TrainingDivergenceError("Mlp::value_of produced a non-finite value");
  return v;
}

double Mlp::max_value(std::span<const double> x, MlpWorkspace& ws) const {
  hidden_forward(x, ws);
  const double* w3 = params_.data() + w3_;
  const double* b3 = params_.data() + b3_;
  double best = 0.0;
  double probe = 0.0;
  for (int o = 0; o < out_; ++o) {
    const double v = dot(w3 + static_cast<std::size_t>(o) * h2n_, ws.h2.data(), h2n_) + b3[o];
    probe += v;
    if (o == 0 || v > best) best = v;
  }
  if (!std::isfinite(probe))
    throw TrainingDivergenceError("Mlp::max_value produced non-finite action values");
  return best;
}

void Mlp::backward_single(std::span<const double> x, int action, double upstream,
                          const MlpWorkspace& ws, std::span<double> grad) const {
  double* g = grad.data();
  const double* h1 = ws.h1.data();
  const double* h2 = ws.h2.data();

  // Output layer: only the selected row carries gradient.
  axpy(g + w3_ + static_cast<std::size_t>(action) * h2n_, h2, upstream, h2n_);
  g[b3_ + static_cast<std::size_t>(action)] += upstream;

  const double* w3row = params_.data() + w3_ + static_cast<std::size_t>(action) * h2n_;
  const double* w2 = params_.data() + w2_;

  auto& dh1 = const_cast<MlpWorkspace&>(ws).dh1;
  dh1.assign(static_cast<std::size_t>(h1n_), 0.0);
  for (int j = 0; j < h2n_; ++j) {
    if (h2[j] <= 0.0) continue;  // dead rectifier
    const double dz2 = upstream * w3row[j];
    axpy(g + w2_ + static_cast<std::size_t>(j) * h1n_, h1, dz2, h1n_);
    g[b2_ + static_cast<std::size_t>(j)] += dz2;
    axpy(dh1.data(), w2 + static_cast<std::size_t>(j) * h1n_, dz2, h1n_);
  }
  for (int i = 0; i < h1n_; ++i) {
    if (h1[i] <= 0.0) continue;
    const double dz1 = dh1[static_cast<std::size_t>(i)];
    axpy(g + w1_ + static_cast<std::size_t>(i) * in_, x.data(), dz1, in_);
    g[b1_ + static_cast<std::size_t>(i)] += dz1;
  }
}

bool Mlp::all_finite() const {
  for (double v : params_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Mlp::save(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("Mlp::save: cannot open " + path);
  f.write(kMagic, sizeof(kMagic));
  const std::uint64_t dims[4] = {static_cast<std::uint64_t>(in_), static_cast<std::uint64_t>(h1n_),
                                 static_cast<std::uint64_t>(h2n_), static_cast<std::uint64_t>(out_)};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  f.write(reinterpret_cast<const char*>(params_.data()),
          static_cast<std::streamsize>(params_.size() * sizeof(double)));
  if (!f) throw std::runtime_error("Mlp::save: write failed for " + path);
}

Mlp Mlp::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("Mlp::load: cannot open " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("Mlp::load: bad header in " + path);
  std::uint64_t dims[4];
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!f) throw std::runtime_error("Mlp::load: truncated header in " + path);
  Mlp net(static_cast<int>(dims[0]), static_cast<int>(dims[1]), static_cast<int>(dims[2]),
          static_cast<int>(dims[3]));
  f.read(reinterpret_cast<char*>(net.params_.data()),
         static_cast<std::streamsize>(net.params_.size() * sizeof(double)));
  if (!f) throw std::runtime_error("Mlp::load: truncated parameters in " + path);
  return net;
}

}  // namespace jamshield
