#include "cdh/baselines.hpp"

#include <cmath>
#include <stdexcept>

namespace cdh {

ConstantModel fit_constant(const CaseBase& cb_train) {
  if (cb_train.empty()) throw std::invalid_argument("fit_constant: empty training set");
  double sum = 0.0;
  for (const auto& c : cb_train.cases()) sum += c.solution;
  return {sum / static_cast<double>(cb_train.size())};
}

NetworkSpec RegressorModel::inner_spec() const {
  NetworkSpec inner = network.spec;
  inner.input_dim = 1;
  return inner;
}

RegressorTrainResult train_regressor(const CaseBase& cb_train, const CaseBase& cb_val,
                                     const RegressorConfig& config, std::uint64_t seed) {
  if (cb_train.empty() || cb_val.empty()) {
    throw std::invalid_argument("train_regressor: empty training or validation set");
  }
  if (cb_train.feature_dim() != cb_val.feature_dim()) {
    throw std::invalid_argument("train_regressor: feature dimension mismatch");
  }
  config.training.validate();

  RegressorTrainResult result;
  RegressorModel& model = result.model;
  {
    std::vector<std::vector<double>> rows;
    rows.reserve(cb_train.size());
    for (const auto& c : cb_train.cases()) rows.push_back(c.features);
    model.feature_scaler = Standardizer::fit(rows);
  }
  model.target_scaler = Standardizer::fit_scalar(cb_train.solutions());
  model.network =
      MlpModel::he_uniform(make_spec(cb_train.feature_dim(), config.hidden, 1, config.dropout),
                           derive_seed(seed, "regressor-init"));

  std::vector<Vector> val_inputs;
  val_inputs.reserve(cb_val.size());
  for (const auto& c : cb_val.cases()) val_inputs.push_back(model.feature_scaler.apply(c.features));

  const auto validation_mae = [&](const MlpModel& net) {
    double sum = 0.0;
    for (std::size_t i = 0; i < cb_val.size(); ++i) {
      const double z = forward(net, val_inputs[i])[0];
      sum += std::abs(model.target_scaler.invert_scalar(z) - cb_val[i].solution);
    }
    return sum / static_cast<double>(cb_val.size());
  };

  // inputs are fixed across epochs; only the visit order changes
  std::vector<Sample> base;
  base.reserve(cb_train.size());
  for (const auto& c : cb_train.cases()) {
    Sample s;
    s.input = model.feature_scaler.apply(c.features);
    s.target = model.target_scaler.apply_scalar(c.solution);
    base.push_back(std::move(s));
  }
  std::vector<std::size_t> order(base.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const auto epoch_samples = [&](std::size_t, Rng& rng) {
    rng.shuffle(order);
    std::vector<Sample> samples;
    samples.reserve(order.size());
    for (std::size_t i : order) samples.push_back(base[i]);
    return samples;
  };

  Rng rng(derive_seed(seed, "regressor-train"));
  result.log = fit_scalar_network(model.network, config.training, epoch_samples, validation_mae,
                                  rng);
  return result;
}

double predict_regressor(const RegressorModel& model, std::span<const double> features) {
  if (features.size() != model.network.spec.input_dim) {
    throw std::invalid_argument("predict_regressor: feature dimension mismatch");
  }
  const Vector z = model.feature_scaler.identity()
                       ? Vector(features.begin(), features.end())
                       : model.feature_scaler.apply(features);
  return model.target_scaler.invert_scalar(forward(model.network, z)[0]);
}

}  // namespace cdh
