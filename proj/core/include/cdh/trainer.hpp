#pragma once

#include <functional>

#include "cdh/adam.hpp"
#include "cdh/network.hpp"

namespace cdh {

struct TrainConfig {
  std::size_t epochs = 50;
  double learning_rate = 1e-4;
  std::size_t batch_size = 4;

  void validate() const;
};

struct EpochLogEntry {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double validation_mae = 0.0;
  std::size_t skipped = 0;  // infeasible samples (triplet training only)
};

struct TrainLog {
  double initial_validation_mae = 0.0;  // before the first epoch
  std::vector<EpochLogEntry> epochs;
  std::size_t selected_epoch = 0;  // 1-based; 0 means the initial snapshot
  double selected_validation_mae = 0.0;
};

// One labelled training example with an already-normalized input/target.
struct Sample {
  Vector input;
  double target = 0.0;
};

// Shared mini-batch loop for the scalar-output networks: each epoch pulls
// its sample list from `epoch_samples` (pair partners are resampled there),
// runs MSE/Adam updates, then scores the model with `validation_mae`. The
// snapshot with the lowest validation MAE is restored into `model`.
TrainLog fit_scalar_network(
    MlpModel& model, const TrainConfig& config,
    const std::function<std::vector<Sample>(std::size_t epoch, Rng& rng)>& epoch_samples,
    const std::function<double(const MlpModel&)>& validation_mae, Rng& rng);

}  // namespace cdh
