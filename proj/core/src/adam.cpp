#include "cdh/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace cdh {

AdamState AdamState::create(const MlpModel& model, double learning_rate) {
  if (learning_rate <= 0.0) throw std::invalid_argument("AdamState: learning_rate must be > 0");
  AdamState s;
  s.learning_rate = learning_rate;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    s.m_weights.emplace_back(model.weights[l].rows, model.weights[l].cols);
    s.v_weights.emplace_back(model.weights[l].rows, model.weights[l].cols);
    s.m_biases.emplace_back(model.biases[l].size(), 0.0);
    s.v_biases.emplace_back(model.biases[l].size(), 0.0);
  }
  return s;
}

namespace {

void update(std::vector<double>& param, const std::vector<double>& grad, std::vector<double>& m,
            std::vector<double>& v, const AdamState& s, double c1, double c2) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = s.beta1 * m[i] + (1.0 - s.beta1) * grad[i];
    v[i] = s.beta2 * v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
    const double mhat = m[i] / c1;
    const double vhat = v[i] / c2;
    param[i] -= s.learning_rate * mhat / (std::sqrt(vhat) + s.epsilon);
  }
}

}  // namespace

void adam_step(MlpModel& model, const Gradients& gradients, AdamState& state) {
  if (gradients.weights.size() != model.weights.size()) {
    throw std::invalid_argument("adam_step: gradient layer count mismatch");
  }
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    if (gradients.weights[l].rows != model.weights[l].rows ||
        gradients.weights[l].cols != model.weights[l].cols ||
        gradients.biases[l].size() != model.biases[l].size()) {
      throw std::invalid_argument("adam_step: gradient shape mismatch at layer " +
                                  std::to_string(l));
    }
  }
  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    update(model.weights[l].data, gradients.weights[l].data, state.m_weights[l].data,
           state.v_weights[l].data, state, c1, c2);
    update(model.biases[l], gradients.biases[l], state.m_biases[l], state.v_biases[l], state, c1,
           c2);
  }
}

}  // namespace cdh
