#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cdh/network.hpp"
#include "cdh/standardizer.hpp"

namespace cdh {

// Self-describing model container. Parameters are 64-bit reals and the
// text rendering round-trips them exactly, so save -> load -> forward is
// bit-identical in eval mode.
struct Checkpoint {
  std::string kind = "mlp";  // mlp | regressor | adapter | siamese
  MlpModel model;
  Standardizer input_scaler;
  Standardizer target_scaler;
  std::uint64_t seed = 0;
  std::size_t selected_epoch = 0;
  // kind-specific annotations (feature_dim, embedding_dim, margin, ...)
  std::map<std::string, double> extras;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace cdh

#include "cdh/adapter.hpp"
#include "cdh/baselines.hpp"
#include "cdh/siamese.hpp"

namespace cdh {

// Typed wrappers. Loading validates the kind tag and the annotations:
// an adapter checkpoint must wire input_dim = 2 * feature_dim, a siamese
// checkpoint carries its loss parameters and embedding width.
void save_regressor(const RegressorModel& model, const std::string& path, std::uint64_t seed = 0,
                    std::size_t selected_epoch = 0);
RegressorModel load_regressor(const std::string& path);

void save_adapter(const AdapterModel& model, const std::string& path, std::uint64_t seed = 0,
                  std::size_t selected_epoch = 0);
AdapterModel load_adapter(const std::string& path);

void save_siamese(const SiameseModel& model, const std::string& path, std::uint64_t seed = 0,
                  std::size_t selected_epoch = 0);
SiameseModel load_siamese(const std::string& path);

}  // namespace cdh
