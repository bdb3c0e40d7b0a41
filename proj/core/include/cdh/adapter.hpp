#pragma once

#include "cdh/casebase.hpp"
#include "cdh/standardizer.hpp"
#include "cdh/trainer.hpp"

namespace cdh {

// A (source, partner) case pair: the network input is the concatenation
// of the two feature vectors, the target the solution difference
// sol(source) - sol(partner).
struct AdaptationPair {
  std::size_t source = 0;
  std::size_t partner = 0;
  Vector input;  // concat(f(source), f(partner)), length 2 * feature_dim
  double target_delta = 0.0;
};

// Difference predictor: maps concat(f(x), f(y)) to sol(x) - sol(y). The
// inner layers mirror the direct regressor's so the comparison stays
// architecture-for-architecture.
struct AdapterModel {
  MlpModel network;  // input_dim = 2 * feature_dim, output_dim = 1
  Standardizer feature_scaler;  // applied to each half of the input
  Standardizer delta_scaler;
  std::size_t feature_dim = 0;

  NetworkSpec inner_spec() const;  // hidden layout only, for parity checks
};

struct AdapterConfig {
  std::vector<std::size_t> hidden = {512, 64};
  double dropout = 0.2;
  TrainConfig training;
};

// Fresh uniformly random partner (never the source itself).
AdaptationPair make_training_pair(const CaseBase& cb_train, std::size_t source_index, Rng& rng);

// One pair per validation case, partner = its L1 nearest neighbor in the
// training set; fixed for a whole training run.
std::vector<AdaptationPair> make_validation_pairs(const CaseBase& cb_val,
                                                  const CaseBase& cb_train);

struct AdapterTrainResult {
  AdapterModel model;
  TrainLog log;
};

// Each epoch pairs every training case with a fresh random partner and
// minimizes the MSE of the predicted difference; the snapshot with the
// lowest validation-pair MAE is returned.
AdapterTrainResult train_adapter(const CaseBase& cb_train, const CaseBase& cb_val,
                                 const AdapterConfig& config, std::uint64_t seed);

// Predicted solution difference between a query and a retrieved case.
double predict_delta(const AdapterModel& model, std::span<const double> query_features,
                     const Case& retrieved);

// Applies a predicted difference to a retrieved solution.
double adapt(double retrieved_solution, double delta);

}  // namespace cdh
