#pragma once

#include "cdh/casebase.hpp"
#include "cdh/standardizer.hpp"
#include "cdh/trainer.hpp"

namespace cdh {

// Predicts the mean training solution regardless of input.
struct ConstantModel {
  double value = 0.0;
};

ConstantModel fit_constant(const CaseBase& cb_train);

// Direct regressor from features to solution. Its inner layers are the
// same as the adapter's; only the input width differs.
struct RegressorModel {
  MlpModel network;  // input_dim = feature_dim, output_dim = 1
  Standardizer feature_scaler;
  Standardizer target_scaler;

  NetworkSpec inner_spec() const;
};

struct RegressorConfig {
  std::vector<std::size_t> hidden = {512, 64};
  double dropout = 0.2;
  TrainConfig training;
};

struct RegressorTrainResult {
  RegressorModel model;
  TrainLog log;
};

RegressorTrainResult train_regressor(const CaseBase& cb_train, const CaseBase& cb_val,
                                     const RegressorConfig& config, std::uint64_t seed);

double predict_regressor(const RegressorModel& model, std::span<const double> features);

}  // namespace cdh
