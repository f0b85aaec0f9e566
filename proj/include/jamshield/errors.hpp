#pragma once

#include <stdexcept>
#include <string>

namespace jamshield {

// Bad experiment configuration (unknown key, violated invariant, ...).
// The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values showed up in a value network or its loss.
struct TrainingDivergenceError : std::runtime_error {
  explicit TrainingDivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace jamshield
