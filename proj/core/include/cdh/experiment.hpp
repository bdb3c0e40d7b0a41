#pragma once

#include <functional>
#include <optional>

#include "cdh/adapter.hpp"
#include "cdh/baselines.hpp"
#include "cdh/siamese.hpp"
#include "cdh/splits.hpp"
#include "cdh/synthetic.hpp"

namespace cdh {

enum class RetrievalBackend { kL1, kSiamese };

std::string to_string(RetrievalBackend backend);
std::string to_string(Setting setting);

struct ExperimentConfig {
  Setting setting = Setting::kNormal;
  RetrievalBackend backend = RetrievalBackend::kL1;
  std::size_t fold_count = 10;
  std::uint64_t seed = 42;

  // data source: a feature file, or the synthetic generator when empty
  std::string data_file;
  SynthConfig synth;

  std::string output_path;  // report destination; empty skips the file

  TrainConfig training;  // epochs 50, lr 1e-4, batch 4
  std::vector<std::size_t> inner_hidden = {512, 64};
  double dropout = 0.2;
  std::size_t embedding_dim = 32;
  std::vector<std::size_t> siamese_hidden = {64};
  TripletParams triplet;
  TripletLossParams triplet_loss;

  std::size_t threads = 1;  // folds run in parallel; 0 = hardware

  void validate() const;
};

struct ReportRow {
  std::string setting;
  std::string query_range;  // "all" in the normal setting, bucket name otherwise
  std::string system;       // constant | regressor | retrieve | adapt
  std::string backend;
  int fold = 0;  // -1 marks the fold average
  std::size_t count = 0;
  std::optional<double> mae;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;

  // nullopt when the row is missing or has no MAE (fold -1 = average)
  std::optional<double> find_mae(const std::string& query_range, const std::string& system,
                                 int fold = -1) const;
};

// Test seam: replaces the trained adapter's difference prediction. The
// query's true solution is passed through so a perfect oracle can be
// injected.
using DeltaOverride = std::function<double(std::span<const double> query_features,
                                           double query_solution, const Case& retrieved)>;

struct RunHooks {
  DeltaOverride delta_override;
};

// The two evaluation protocols. Folds are independent given their derived
// seeds; rows are keyed and sorted canonically, so reports are identical
// regardless of the thread count.
ExperimentReport run_normal(const ExperimentConfig& config, const CaseBase& cb,
                            const RunHooks& hooks = {});
ExperimentReport run_novel(const ExperimentConfig& config, const CaseBase& cb,
                           const RunHooks& hooks = {});

// Loads or generates the case base named by the config, runs the
// configured setting and writes the report when output_path is set.
ExperimentReport run_experiment(const ExperimentConfig& config, const RunHooks& hooks = {});

}  // namespace cdh
