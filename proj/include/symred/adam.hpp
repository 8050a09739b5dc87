#pragma once

#include <cstdint>

#include "symred/types.hpp"

namespace symred {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive moment estimation on a flat parameter vector, with bias
/// correction.
class Adam {
 public:
  Adam(std::size_t parameter_count, AdamConfig config = {});

  void step(Vector& params, const Vector& grad);

  const AdamConfig& config() const { return config_; }
  std::uint64_t steps() const { return t_; }

 private:
  AdamConfig config_;
  Vector m_;
  Vector v_;
  std::uint64_t t_ = 0;
};

}  // namespace symred
