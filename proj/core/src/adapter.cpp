#include "cdh/adapter.hpp"

#include <cmath>
#include <stdexcept>

#include "cdh/retrieval.hpp"

namespace cdh {

NetworkSpec AdapterModel::inner_spec() const {
  NetworkSpec inner = network.spec;
  inner.input_dim = 1;  // inner layout comparison ignores the input width
  return inner;
}

AdaptationPair make_training_pair(const CaseBase& cb_train, std::size_t source_index, Rng& rng) {
  const std::size_t n = cb_train.size();
  if (n < 2) throw std::invalid_argument("make_training_pair: need at least two cases");
  if (source_index >= n) throw std::invalid_argument("make_training_pair: source out of range");
  std::size_t partner = rng.index(n - 1);
  if (partner >= source_index) ++partner;

  const Case& x = cb_train[source_index];
  const Case& y = cb_train[partner];
  AdaptationPair pair;
  pair.source = source_index;
  pair.partner = partner;
  pair.input.reserve(2 * cb_train.feature_dim());
  pair.input.insert(pair.input.end(), x.features.begin(), x.features.end());
  pair.input.insert(pair.input.end(), y.features.begin(), y.features.end());
  pair.target_delta = x.solution - y.solution;
  return pair;
}

std::vector<AdaptationPair> make_validation_pairs(const CaseBase& cb_val,
                                                  const CaseBase& cb_train) {
  if (cb_val.empty() || cb_train.empty()) {
    throw std::invalid_argument("make_validation_pairs: empty input");
  }
  if (cb_val.feature_dim() != cb_train.feature_dim()) {
    throw std::invalid_argument("make_validation_pairs: feature dimension mismatch");
  }
  std::vector<AdaptationPair> pairs;
  pairs.reserve(cb_val.size());
  for (std::size_t v = 0; v < cb_val.size(); ++v) {
    const Case& q = cb_val[v];
    const RetrievalResult nn = retrieve_l1(q.features, cb_train);
    AdaptationPair pair;
    pair.source = v;  // index into cb_val
    pair.partner = nn.case_index;
    pair.input.reserve(2 * cb_train.feature_dim());
    pair.input.insert(pair.input.end(), q.features.begin(), q.features.end());
    const Case& c = cb_train[nn.case_index];
    pair.input.insert(pair.input.end(), c.features.begin(), c.features.end());
    pair.target_delta = q.solution - c.solution;
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

namespace {

Vector standardize_pair_input(const AdapterModel& model, std::span<const double> input) {
  const std::size_t d = model.feature_dim;
  Vector z(2 * d);
  model.feature_scaler.apply(input.subspan(0, d), std::span<double>(z.data(), d));
  model.feature_scaler.apply(input.subspan(d, d), std::span<double>(z.data() + d, d));
  return z;
}

}  // namespace

AdapterTrainResult train_adapter(const CaseBase& cb_train, const CaseBase& cb_val,
                                 const AdapterConfig& config, std::uint64_t seed) {
  if (cb_train.size() < 2) {
    throw std::invalid_argument("train_adapter: need at least two training cases");
  }
  if (cb_val.empty()) throw std::invalid_argument("train_adapter: empty validation set");
  config.training.validate();

  const std::size_t d = cb_train.feature_dim();
  AdapterTrainResult result;
  AdapterModel& model = result.model;
  model.feature_dim = d;
  {
    std::vector<std::vector<double>> rows;
    rows.reserve(cb_train.size());
    for (const auto& c : cb_train.cases()) rows.push_back(c.features);
    model.feature_scaler = Standardizer::fit(rows);
  }
  // differences are symmetric around zero; scale by sqrt(2) * sd of labels
  {
    const auto sols = cb_train.solutions();
    const Standardizer label = Standardizer::fit_scalar(sols);
    model.delta_scaler = Standardizer::scale_only(std::sqrt(2.0) * label.stddev[0]);
  }
  model.network = MlpModel::he_uniform(make_spec(2 * d, config.hidden, 1, config.dropout),
                                       derive_seed(seed, "adapter-init"));

  const std::vector<AdaptationPair> val_pairs = make_validation_pairs(cb_val, cb_train);
  std::vector<Vector> val_inputs;
  val_inputs.reserve(val_pairs.size());
  for (const auto& p : val_pairs) val_inputs.push_back(standardize_pair_input(model, p.input));

  const auto validation_mae = [&](const MlpModel& net) {
    double sum = 0.0;
    for (std::size_t i = 0; i < val_pairs.size(); ++i) {
      const double z = forward(net, val_inputs[i])[0];
      sum += std::abs(model.delta_scaler.invert_scalar(z) - val_pairs[i].target_delta);
    }
    return sum / static_cast<double>(val_pairs.size());
  };

  std::vector<std::size_t> order(cb_train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  const auto epoch_samples = [&](std::size_t, Rng& rng) {
    rng.shuffle(order);
    std::vector<Sample> samples;
    samples.reserve(order.size());
    for (std::size_t src : order) {
      AdaptationPair pair = make_training_pair(cb_train, src, rng);
      Sample s;
      s.input = standardize_pair_input(model, pair.input);
      s.target = model.delta_scaler.apply_scalar(pair.target_delta);
      samples.push_back(std::move(s));
    }
    return samples;
  };

  Rng rng(derive_seed(seed, "adapter-train"));
  result.log = fit_scalar_network(model.network, config.training, epoch_samples, validation_mae,
                                  rng);
  return result;
}

double predict_delta(const AdapterModel& model, std::span<const double> query_features,
                     const Case& retrieved) {
  if (query_features.size() != model.feature_dim ||
      retrieved.features.size() != model.feature_dim) {
    throw std::invalid_argument("predict_delta: feature dimension mismatch");
  }
  Vector input;
  input.reserve(2 * model.feature_dim);
  input.insert(input.end(), query_features.begin(), query_features.end());
  input.insert(input.end(), retrieved.features.begin(), retrieved.features.end());
  const Vector z = standardize_pair_input(model, input);
  return model.delta_scaler.invert_scalar(forward(model.network, z)[0]);
}

double adapt(double retrieved_solution, double delta) {
  if (!std::isfinite(retrieved_solution) || !std::isfinite(delta)) {
    throw std::invalid_argument("adapt: non-finite input");
  }
  return retrieved_solution + delta;
}

}  // namespace cdh
