#pragma once

#include "cdh/network.hpp"

namespace cdh {

struct AdamState {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t step_count = 0;
  std::vector<Matrix> m_weights, v_weights;
  std::vector<Vector> m_biases, v_biases;

  // accumulators start at zero, shaped like the model's parameters
  static AdamState create(const MlpModel& model, double learning_rate);
};

// Standard bias-corrected Adam update; increments step_count.
void adam_step(MlpModel& model, const Gradients& gradients, AdamState& state);

}  // namespace cdh
