#include "cdh/siamese.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "cdh/adam.hpp"

namespace cdh {

Vector SiameseModel::embed(std::span<const double> features) const {
  const Vector z = input_scaler.identity() ? Vector(features.begin(), features.end())
                                           : input_scaler.apply(features);
  return forward(embedder, z);
}

namespace {

double validation_retrieval_mae(const SiameseModel& model, const CaseBase& cb_train,
                                const CaseBase& cb_val) {
  std::vector<Vector> train_emb;
  train_emb.reserve(cb_train.size());
  for (const auto& c : cb_train.cases()) train_emb.push_back(model.embed(c.features));

  double err_sum = 0.0;
  for (const auto& v : cb_val.cases()) {
    const Vector q = model.embed(v.features);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < train_emb.size(); ++i) {
      const double d = l1_distance(q, train_emb[i]);
      if (d < best) {
        best = d;
        best_i = i;
      }
    }
    err_sum += std::abs(cb_train[best_i].solution - v.solution);
  }
  return err_sum / static_cast<double>(cb_val.size());
}

}  // namespace

SiameseTrainResult train_siamese(const CaseBase& cb_train, const CaseBase& cb_val,
                                 const SiameseConfig& config, std::uint64_t seed) {
  if (cb_train.empty() || cb_val.empty()) {
    throw std::invalid_argument("train_siamese: empty training or validation set");
  }
  if (cb_train.feature_dim() != cb_val.feature_dim()) {
    throw std::invalid_argument("train_siamese: feature dimension mismatch");
  }
  config.training.validate();
  config.loss.validate();

  SiameseTrainResult result;
  SiameseModel& model = result.model;
  model.loss_params = config.loss;
  model.embedding_dim = config.embedding_dim;
  {
    std::vector<std::vector<double>> rows;
    rows.reserve(cb_train.size());
    for (const auto& c : cb_train.cases()) rows.push_back(c.features);
    model.input_scaler = Standardizer::fit(rows);
  }
  model.embedder = MlpModel::he_uniform(
      make_spec(cb_train.feature_dim(), config.hidden, config.embedding_dim, config.dropout),
      derive_seed(seed, "siamese-init"));

  // standardized training features, computed once
  std::vector<Vector> inputs;
  inputs.reserve(cb_train.size());
  for (const auto& c : cb_train.cases()) inputs.push_back(model.input_scaler.apply(c.features));

  const TripletSampler sampler(cb_train, config.sampling);
  Rng rng(derive_seed(seed, "siamese-train"));

  TrainLog& log = result.log;
  log.initial_validation_mae = validation_retrieval_mae(model, cb_train, cb_val);
  double best_mae = log.initial_validation_mae;
  std::vector<Matrix> best_weights = model.embedder.weights;
  std::vector<Vector> best_biases = model.embedder.biases;
  log.selected_epoch = 0;

  AdamState adam = AdamState::create(model.embedder, config.training.learning_rate);
  Gradients batch = model.embedder.zero_gradients();
  ForwardTrace ta, tp, tn;

  std::vector<std::size_t> anchors(cb_train.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) anchors[i] = i;

  for (std::size_t epoch = 1; epoch <= config.training.epochs; ++epoch) {
    rng.shuffle(anchors);
    model.embedder.mode = Mode::kTrain;
    double loss_sum = 0.0;
    std::size_t sampled = 0, skipped = 0, in_batch = 0;
    auto flush = [&]() {
      if (in_batch == 0) return;
      batch.scale(1.0 / static_cast<double>(in_batch));
      adam_step(model.embedder, batch, adam);
      batch.zero();
      in_batch = 0;
    };
    for (std::size_t a : anchors) {
      const auto triplet = sampler.sample(a, rng);
      if (!triplet) {
        ++skipped;
        continue;
      }
      const Vector ea = forward(model.embedder, inputs[triplet->anchor], &rng, &ta);
      const Vector ep = forward(model.embedder, inputs[triplet->positive], &rng, &tp);
      const Vector en = forward(model.embedder, inputs[triplet->negative], &rng, &tn);
      const TripletLossResult loss = triplet_margin_loss(ea, ep, en, config.loss);
      loss_sum += loss.loss;
      ++sampled;
      if (loss.loss > 0.0) {
        backward_accumulate(model.embedder, ta, loss.grad_anchor, batch);
        backward_accumulate(model.embedder, tp, loss.grad_positive, batch);
        backward_accumulate(model.embedder, tn, loss.grad_negative, batch);
      }
      if (++in_batch == config.training.batch_size) flush();
    }
    flush();
    result.skipped_anchors += skipped;
    if (sampled == 0) {
      throw std::runtime_error("train_siamese: no valid triplet in epoch " +
                               std::to_string(epoch) + " (" + std::to_string(skipped) +
                               " anchors skipped); widen positive_tolerance or check labels");
    }

    model.embedder.mode = Mode::kEval;
    EpochLogEntry entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(sampled);
    entry.validation_mae = validation_retrieval_mae(model, cb_train, cb_val);
    entry.skipped = skipped;
    log.epochs.push_back(entry);

    if (entry.validation_mae < best_mae) {
      best_mae = entry.validation_mae;
      best_weights = model.embedder.weights;
      best_biases = model.embedder.biases;
      log.selected_epoch = epoch;
    }
  }

  model.embedder.weights = std::move(best_weights);
  model.embedder.biases = std::move(best_biases);
  model.embedder.mode = Mode::kEval;
  log.selected_validation_mae = best_mae;
  return result;
}

EmbeddingIndex::EmbeddingIndex(const SiameseModel& model, const CaseBase& cb)
    : model_(&model), cb_(&cb) {
  if (cb.empty()) throw std::invalid_argument("EmbeddingIndex: empty case base");
  embeddings_.reserve(cb.size());
  for (const auto& c : cb.cases()) embeddings_.push_back(model.embed(c.features));
}

RetrievalResult EmbeddingIndex::retrieve(std::span<const double> query_features) const {
  const Vector q = model_->embed(query_features);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < embeddings_.size(); ++i) {
    const double d = l1_distance(q, embeddings_[i]);
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return {best_i, best, (*cb_)[best_i].solution};
}

RetrievalResult retrieve_siamese(std::span<const double> query_features,
                                 const SiameseModel& model, const CaseBase& cb) {
  if (cb.empty()) throw std::invalid_argument("retrieve_siamese: empty case base");
  const Vector q = model.embed(query_features);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double d = l1_distance(q, model.embed(cb[i].features));
    if (d < best) {
      best = d;
      best_i = i;
    }
  }
  return {best_i, best, cb[best_i].solution};
}

}  // namespace cdh
