#include "cdh/trainer.hpp"

#include <stdexcept>

#include "cdh/losses.hpp"

namespace cdh {

void TrainConfig::validate() const {
  // zero epochs is allowed and returns the initialized model unchanged
  if (learning_rate <= 0.0) throw std::invalid_argument("TrainConfig: learning_rate must be > 0");
  if (batch_size < 1) throw std::invalid_argument("TrainConfig: batch_size must be >= 1");
}

TrainLog fit_scalar_network(
    MlpModel& model, const TrainConfig& config,
    const std::function<std::vector<Sample>(std::size_t epoch, Rng& rng)>& epoch_samples,
    const std::function<double(const MlpModel&)>& validation_mae, Rng& rng) {
  config.validate();
  if (model.spec.output_dim != 1) {
    throw std::invalid_argument("fit_scalar_network: output_dim must be 1");
  }

  TrainLog log;
  model.mode = Mode::kEval;
  log.initial_validation_mae = validation_mae(model);

  AdamState adam = AdamState::create(model, config.learning_rate);
  double best_mae = log.initial_validation_mae;
  std::vector<Matrix> best_weights = model.weights;
  std::vector<Vector> best_biases = model.biases;
  log.selected_epoch = 0;

  Gradients batch_grads = model.zero_gradients();
  ForwardTrace trace;

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const std::vector<Sample> samples = epoch_samples(epoch, rng);
    model.mode = Mode::kTrain;
    double loss_sum = 0.0;
    std::size_t in_batch = 0;
    auto flush = [&]() {
      if (in_batch == 0) return;
      batch_grads.scale(1.0 / static_cast<double>(in_batch));
      adam_step(model, batch_grads, adam);
      batch_grads.zero();
      in_batch = 0;
    };
    for (const Sample& s : samples) {
      const Vector out = forward(model, s.input, &rng, &trace);
      const double target[1] = {s.target};
      const MseResult m = mse_loss(out, target);
      loss_sum += m.loss;
      backward_accumulate(model, trace, m.gradient, batch_grads);
      if (++in_batch == config.batch_size) flush();
    }
    flush();

    model.mode = Mode::kEval;
    EpochLogEntry entry;
    entry.epoch = epoch;
    entry.train_loss = samples.empty() ? 0.0 : loss_sum / static_cast<double>(samples.size());
    entry.validation_mae = validation_mae(model);
    log.epochs.push_back(entry);

    if (entry.validation_mae < best_mae) {
      best_mae = entry.validation_mae;
      best_weights = model.weights;
      best_biases = model.biases;
      log.selected_epoch = epoch;
    }
  }

  model.weights = std::move(best_weights);
  model.biases = std::move(best_biases);
  model.mode = Mode::kEval;
  log.selected_validation_mae = best_mae;
  return log;
}

}  // namespace cdh
