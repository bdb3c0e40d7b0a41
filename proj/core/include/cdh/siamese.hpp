#pragma once

#include "cdh/casebase.hpp"
#include "cdh/losses.hpp"
#include "cdh/retrieval.hpp"
#include "cdh/standardizer.hpp"
#include "cdh/trainer.hpp"
#include "cdh/triplet.hpp"

namespace cdh {

struct SiameseConfig {
  std::size_t embedding_dim = 32;
  std::vector<std::size_t> hidden = {64};
  double dropout = 0.2;
  TripletLossParams loss;
  TripletParams sampling;
  TrainConfig training;
};

// One embedder applied to every branch; branch weight sharing is
// structural.
struct SiameseModel {
  MlpModel embedder;
  Standardizer input_scaler;
  TripletLossParams loss_params;
  std::size_t embedding_dim = 0;

  Vector embed(std::span<const double> features) const;
};

struct SiameseTrainResult {
  SiameseModel model;
  TrainLog log;
  std::size_t skipped_anchors = 0;  // across all epochs
};

// Triplet-margin training: every epoch visits the anchors in seeded
// shuffled order, sampling one triplet per anchor and skipping infeasible
// ones. After each epoch the validation retrieval MAE (nearest training
// case in embedding space) is scored and the best snapshot is kept.
SiameseTrainResult train_siamese(const CaseBase& cb_train, const CaseBase& cb_val,
                                 const SiameseConfig& config, std::uint64_t seed);

// Embeds the whole case base once; retrieval then scans embeddings.
// Results are identical to the uncached path.
class EmbeddingIndex {
 public:
  EmbeddingIndex(const SiameseModel& model, const CaseBase& cb);

  RetrievalResult retrieve(std::span<const double> query_features) const;
  const Vector& embedding(std::size_t i) const { return embeddings_[i]; }

 private:
  const SiameseModel* model_;
  const CaseBase* cb_;
  std::vector<Vector> embeddings_;
};

// Uncached single-query retrieval by embedding-space L1 distance.
RetrievalResult retrieve_siamese(std::span<const double> query_features,
                                 const SiameseModel& model, const CaseBase& cb);

}  // namespace cdh
