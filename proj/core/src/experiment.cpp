#include "cdh/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "cdh/case_io.hpp"
#include "cdh/report.hpp"

namespace cdh {

std::string to_string(RetrievalBackend backend) {
  return backend == RetrievalBackend::kL1 ? "l1" : "siamese";
}

std::string to_string(Setting setting) {
  return setting == Setting::kNormal ? "normal" : "novel";
}

void ExperimentConfig::validate() const {
  if (training.epochs < 1) throw std::invalid_argument("ExperimentConfig: epochs must be >= 1");
  training.validate();
  triplet.validate();
  triplet_loss.validate();
  if (fold_count < 2) throw std::invalid_argument("ExperimentConfig: fold_count must be >= 2");
  if (dropout < 0.0 || dropout >= 1.0) {
    throw std::invalid_argument("ExperimentConfig: dropout must be in [0, 1)");
  }
  if (embedding_dim < 1) {
    throw std::invalid_argument("ExperimentConfig: embedding_dim must be >= 1");
  }
}

namespace {

struct SystemErrors {
  double constant = 0.0;
  double regressor = 0.0;
  double retrieve = 0.0;
  double adapt = 0.0;
  std::size_t count = 0;
};

struct FoldModels {
  ConstantModel constant;
  RegressorModel regressor;
  AdapterModel adapter;
  std::optional<SiameseModel> siamese;
};

FoldModels train_fold_models(const ExperimentConfig& config, const CaseBase& train,
                             const CaseBase& val, std::uint64_t fold_seed) {
  FoldModels models;
  models.constant = fit_constant(train);

  RegressorConfig reg_config{config.inner_hidden, config.dropout, config.training};
  models.regressor = train_regressor(train, val, reg_config, fold_seed).model;

  AdapterConfig adapter_config{config.inner_hidden, config.dropout, config.training};
  models.adapter = train_adapter(train, val, adapter_config, fold_seed).model;

  if (models.regressor.inner_spec() != models.adapter.inner_spec()) {
    throw std::logic_error("experiment: regressor and adapter inner specs diverged");
  }

  if (config.backend == RetrievalBackend::kSiamese) {
    SiameseConfig siamese_config;
    siamese_config.embedding_dim = config.embedding_dim;
    siamese_config.hidden = config.siamese_hidden;
    siamese_config.dropout = config.dropout;
    siamese_config.loss = config.triplet_loss;
    siamese_config.sampling = config.triplet;
    siamese_config.training = config.training;
    models.siamese = train_siamese(train, val, siamese_config, fold_seed).model;
  }
  return models;
}

// accumulates the four per-system absolute errors over one query set
SystemErrors score_queries(const ExperimentConfig& config, const FoldModels& models,
                           const CaseBase& train, const CaseBase& queries,
                           const EmbeddingIndex* index, const RunHooks& hooks) {
  SystemErrors err;
  err.count = queries.size();
  for (const auto& q : queries.cases()) {
    const RetrievalResult r = config.backend == RetrievalBackend::kL1
                                  ? retrieve_l1(q.features, train)
                                  : index->retrieve(q.features);
    const Case& retrieved = train[r.case_index];
    const double delta = hooks.delta_override
                             ? hooks.delta_override(q.features, q.solution, retrieved)
                             : predict_delta(models.adapter, q.features, retrieved);
    const double adapted = adapt(r.retrieved_solution, delta);

    err.constant += std::abs(models.constant.value - q.solution);
    err.regressor += std::abs(predict_regressor(models.regressor, q.features) - q.solution);
    err.retrieve += std::abs(r.retrieved_solution - q.solution);
    err.adapt += std::abs(adapted - q.solution);
  }
  return err;
}

const char* kSystems[4] = {"constant", "regressor", "retrieve", "adapt"};

double system_error(const SystemErrors& e, std::size_t s) {
  const double v[4] = {e.constant, e.regressor, e.retrieve, e.adapt};
  return v[s];
}

void append_range_rows(ExperimentReport& report, const ExperimentConfig& config,
                       const std::string& range, int fold, const SystemErrors& errors) {
  for (std::size_t s = 0; s < 4; ++s) {
    ReportRow row;
    row.setting = to_string(config.setting);
    row.query_range = range;
    row.system = kSystems[s];
    row.backend = to_string(config.backend);
    row.fold = fold;
    row.count = errors.count;
    if (errors.count > 0) row.mae = system_error(errors, s) / static_cast<double>(errors.count);
    report.rows.push_back(std::move(row));
  }
}

// fold -1 rows: unweighted mean of the per-fold MAEs, count = evaluations
void append_average_rows(ExperimentReport& report, const ExperimentConfig& config,
                         const std::vector<std::string>& ranges,
                         const std::vector<std::vector<SystemErrors>>& per_fold) {
  for (std::size_t g = 0; g < ranges.size(); ++g) {
    for (std::size_t s = 0; s < 4; ++s) {
      double sum = 0.0;
      std::size_t folds_with_data = 0, total = 0;
      for (const auto& fold_errors : per_fold) {
        const SystemErrors& e = fold_errors[g];
        total += e.count;
        if (e.count == 0) continue;
        sum += system_error(e, s) / static_cast<double>(e.count);
        ++folds_with_data;
      }
      ReportRow row;
      row.setting = to_string(config.setting);
      row.query_range = ranges[g];
      row.system = kSystems[s];
      row.backend = to_string(config.backend);
      row.fold = -1;
      row.count = total;
      if (folds_with_data > 0) row.mae = sum / static_cast<double>(folds_with_data);
      report.rows.push_back(std::move(row));
    }
  }
}

template <typename FoldFn>
std::vector<std::vector<SystemErrors>> run_folds(const ExperimentConfig& config,
                                                 const FoldFn& fold_fn) {
  const std::size_t folds = config.fold_count;
  std::size_t threads = config.threads == 0 ? std::thread::hardware_concurrency()
                                            : config.threads;
  if (threads == 0) threads = 1;
  threads = std::min(threads, folds);

  std::vector<std::vector<SystemErrors>> results(folds);
  if (threads <= 1) {
    for (std::size_t f = 0; f < folds; ++f) results[f] = fold_fn(f);
    return results;
  }
  std::vector<std::future<void>> workers;
  std::atomic<std::size_t> next{0};
  for (std::size_t t = 0; t < threads; ++t) {
    workers.push_back(std::async(std::launch::async, [&]() {
      while (true) {
        const std::size_t f = next.fetch_add(1);
        if (f >= folds) return;
        results[f] = fold_fn(f);
      }
    }));
  }
  for (auto& w : workers) w.get();
  return results;
}

}  // namespace

std::optional<double> ExperimentReport::find_mae(const std::string& query_range,
                                                 const std::string& system, int fold) const {
  for (const auto& row : rows) {
    if (row.query_range == query_range && row.system == system && row.fold == fold) {
      return row.mae;
    }
  }
  return std::nullopt;
}

ExperimentReport run_normal(const ExperimentConfig& config, const CaseBase& cb,
                            const RunHooks& hooks) {
  config.validate();
  if (config.setting != Setting::kNormal) {
    throw std::invalid_argument("run_normal: config setting must be normal");
  }
  const SplitPlan plan = SplitPlan::normal(config.fold_count);

  const auto fold_fn = [&](std::size_t fold) {
    const std::uint64_t split_seed = derive_seed(config.seed, "split", fold);
    const std::uint64_t model_seed = derive_seed(config.seed, "models", fold);
    const KFoldSplit split = kfold_split(cb, plan, fold, split_seed);
    const FoldModels models = train_fold_models(config, split.train, split.validation, model_seed);
    std::optional<EmbeddingIndex> index;
    if (models.siamese) index.emplace(*models.siamese, split.train);
    std::vector<SystemErrors> errors;
    errors.push_back(score_queries(config, models, split.train, split.test,
                                   index ? &*index : nullptr, hooks));
    return errors;
  };

  const auto per_fold = run_folds(config, fold_fn);

  ExperimentReport report;
  for (std::size_t f = 0; f < per_fold.size(); ++f) {
    append_range_rows(report, config, "all", static_cast<int>(f), per_fold[f][0]);
  }
  append_average_rows(report, config, {"all"}, per_fold);
  return report;
}

ExperimentReport run_novel(const ExperimentConfig& config, const CaseBase& cb,
                           const RunHooks& hooks) {
  config.validate();
  if (config.setting != Setting::kNovel) {
    throw std::invalid_argument("run_novel: config setting must be novel");
  }
  const SplitPlan plan = SplitPlan::novel(config.fold_count);

  const auto fold_fn = [&](std::size_t fold) {
    const std::uint64_t split_seed = derive_seed(config.seed, "split", fold);
    const std::uint64_t model_seed = derive_seed(config.seed, "models", fold);
    const NovelSplit split = novel_split(cb, plan, fold, split_seed);
    const FoldModels models = train_fold_models(config, split.train, split.validation, model_seed);
    std::optional<EmbeddingIndex> index;
    if (models.siamese) index.emplace(*models.siamese, split.train);
    std::vector<SystemErrors> errors;
    for (const auto& bucket : split.query_buckets) {
      if (bucket.empty()) {
        errors.push_back(SystemErrors{});
        continue;
      }
      errors.push_back(
          score_queries(config, models, split.train, bucket, index ? &*index : nullptr, hooks));
    }
    return errors;
  };

  const auto per_fold = run_folds(config, fold_fn);

  std::vector<std::string> ranges;
  for (const auto& b : plan.query_buckets) ranges.push_back(b.name);

  ExperimentReport report;
  for (std::size_t f = 0; f < per_fold.size(); ++f) {
    for (std::size_t g = 0; g < ranges.size(); ++g) {
      append_range_rows(report, config, ranges[g], static_cast<int>(f), per_fold[f][g]);
    }
  }
  append_average_rows(report, config, ranges, per_fold);
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config, const RunHooks& hooks) {
  config.validate();
  const CaseBase cb =
      config.data_file.empty() ? generate_synthetic(config.synth) : load_cases(config.data_file);
  ExperimentReport report = config.setting == Setting::kNormal ? run_normal(config, cb, hooks)
                                                               : run_novel(config, cb, hooks);
  if (!config.output_path.empty()) emit_report(report, config.output_path);
  return report;
}

}  // namespace cdh
