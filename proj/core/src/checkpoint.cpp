#include "cdh/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace cdh {

namespace {

using nlohmann::json;

json spec_to_json(const NetworkSpec& spec) {
  json hidden = json::array();
  for (const auto& h : spec.hidden) {
    hidden.push_back({{"width", h.width}, {"activation", "relu"}, {"dropout", h.dropout_rate}});
  }
  return {{"input_dim", spec.input_dim}, {"hidden", hidden}, {"output_dim", spec.output_dim}};
}

NetworkSpec spec_from_json(const json& j) {
  NetworkSpec spec;
  spec.input_dim = j.at("input_dim").get<std::size_t>();
  spec.output_dim = j.at("output_dim").get<std::size_t>();
  for (const auto& h : j.at("hidden")) {
    if (h.at("activation").get<std::string>() != "relu") {
      throw std::runtime_error("checkpoint: unknown activation");
    }
    spec.hidden.push_back(
        {h.at("width").get<std::size_t>(), Activation::kRelu, h.at("dropout").get<double>()});
  }
  spec.validate();
  return spec;
}

json scaler_to_json(const Standardizer& s) {
  return {{"mean", s.mean}, {"stddev", s.stddev}};
}

Standardizer scaler_from_json(const json& j) {
  Standardizer s;
  s.mean = j.at("mean").get<std::vector<double>>();
  s.stddev = j.at("stddev").get<std::vector<double>>();
  return s;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  json j;
  j["format"] = "cdh-checkpoint-v1";
  j["kind"] = ckpt.kind;
  j["spec"] = spec_to_json(ckpt.model.spec);
  json weights = json::array();
  for (const auto& w : ckpt.model.weights) weights.push_back(w.data);
  j["weights"] = weights;
  json biases = json::array();
  for (const auto& b : ckpt.model.biases) biases.push_back(b);
  j["biases"] = biases;
  j["input_scaler"] = scaler_to_json(ckpt.input_scaler);
  j["target_scaler"] = scaler_to_json(ckpt.target_scaler);
  j["seed"] = ckpt.seed;
  j["selected_epoch"] = ckpt.selected_epoch;
  j["extras"] = ckpt.extras;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << j.dump(1);
  out << '\n';
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("load_checkpoint: " + path + ": " + e.what());
  }
  if (j.value("format", "") != "cdh-checkpoint-v1") {
    throw std::runtime_error("load_checkpoint: " + path + ": unknown format");
  }
  Checkpoint ckpt;
  ckpt.kind = j.at("kind").get<std::string>();
  ckpt.model = MlpModel::zeros(spec_from_json(j.at("spec")));
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != ckpt.model.weights.size() || biases.size() != ckpt.model.biases.size()) {
    throw std::runtime_error("load_checkpoint: parameter layer count mismatch");
  }
  for (std::size_t l = 0; l < ckpt.model.weights.size(); ++l) {
    auto w = weights[l].get<std::vector<double>>();
    if (w.size() != ckpt.model.weights[l].data.size()) {
      throw std::runtime_error("load_checkpoint: weight shape mismatch at layer " +
                               std::to_string(l));
    }
    ckpt.model.weights[l].data = std::move(w);
    auto b = biases[l].get<std::vector<double>>();
    if (b.size() != ckpt.model.biases[l].size()) {
      throw std::runtime_error("load_checkpoint: bias shape mismatch at layer " +
                               std::to_string(l));
    }
    ckpt.model.biases[l] = std::move(b);
  }
  ckpt.input_scaler = scaler_from_json(j.at("input_scaler"));
  ckpt.target_scaler = scaler_from_json(j.at("target_scaler"));
  ckpt.seed = j.at("seed").get<std::uint64_t>();
  ckpt.selected_epoch = j.at("selected_epoch").get<std::size_t>();
  ckpt.extras = j.at("extras").get<std::map<std::string, double>>();
  return ckpt;
}

namespace {

Checkpoint expect_kind(const std::string& path, const std::string& kind) {
  Checkpoint ckpt = load_checkpoint(path);
  if (ckpt.kind != kind) {
    throw std::runtime_error("load " + kind + ": " + path + " holds a '" + ckpt.kind +
                             "' checkpoint");
  }
  return ckpt;
}

}  // namespace

void save_regressor(const RegressorModel& model, const std::string& path, std::uint64_t seed,
                    std::size_t selected_epoch) {
  Checkpoint ckpt;
  ckpt.kind = "regressor";
  ckpt.model = model.network;
  ckpt.input_scaler = model.feature_scaler;
  ckpt.target_scaler = model.target_scaler;
  ckpt.seed = seed;
  ckpt.selected_epoch = selected_epoch;
  ckpt.extras["feature_dim"] = static_cast<double>(model.network.spec.input_dim);
  save_checkpoint(ckpt, path);
}

RegressorModel load_regressor(const std::string& path) {
  Checkpoint ckpt = expect_kind(path, "regressor");
  RegressorModel model;
  model.network = std::move(ckpt.model);
  model.feature_scaler = std::move(ckpt.input_scaler);
  model.target_scaler = std::move(ckpt.target_scaler);
  return model;
}

void save_adapter(const AdapterModel& model, const std::string& path, std::uint64_t seed,
                  std::size_t selected_epoch) {
  Checkpoint ckpt;
  ckpt.kind = "adapter";
  ckpt.model = model.network;
  ckpt.input_scaler = model.feature_scaler;
  ckpt.target_scaler = model.delta_scaler;
  ckpt.seed = seed;
  ckpt.selected_epoch = selected_epoch;
  ckpt.extras["feature_dim"] = static_cast<double>(model.feature_dim);
  save_checkpoint(ckpt, path);
}

AdapterModel load_adapter(const std::string& path) {
  Checkpoint ckpt = expect_kind(path, "adapter");
  AdapterModel model;
  model.feature_dim = static_cast<std::size_t>(ckpt.extras.at("feature_dim"));
  if (ckpt.model.spec.input_dim != 2 * model.feature_dim) {
    throw std::runtime_error("load adapter: " + path + ": input_dim " +
                             std::to_string(ckpt.model.spec.input_dim) +
                             " does not equal 2 * feature_dim");
  }
  model.network = std::move(ckpt.model);
  model.feature_scaler = std::move(ckpt.input_scaler);
  model.delta_scaler = std::move(ckpt.target_scaler);
  return model;
}

void save_siamese(const SiameseModel& model, const std::string& path, std::uint64_t seed,
                  std::size_t selected_epoch) {
  Checkpoint ckpt;
  ckpt.kind = "siamese";
  ckpt.model = model.embedder;
  ckpt.input_scaler = model.input_scaler;
  ckpt.seed = seed;
  ckpt.selected_epoch = selected_epoch;
  ckpt.extras["embedding_dim"] = static_cast<double>(model.embedding_dim);
  ckpt.extras["margin"] = model.loss_params.margin;
  ckpt.extras["norm_order"] = static_cast<double>(model.loss_params.norm_order);
  save_checkpoint(ckpt, path);
}

SiameseModel load_siamese(const std::string& path) {
  Checkpoint ckpt = expect_kind(path, "siamese");
  SiameseModel model;
  model.embedding_dim = static_cast<std::size_t>(ckpt.extras.at("embedding_dim"));
  if (ckpt.model.spec.output_dim != model.embedding_dim) {
    throw std::runtime_error("load siamese: " + path + ": output_dim does not match embedding_dim");
  }
  model.loss_params.margin = ckpt.extras.at("margin");
  model.loss_params.norm_order = static_cast<int>(ckpt.extras.at("norm_order"));
  model.embedder = std::move(ckpt.model);
  model.input_scaler = std::move(ckpt.input_scaler);
  return model;
}

}  // namespace cdh
