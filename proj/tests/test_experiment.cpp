#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cdh/config_file.hpp"
#include "cdh/experiment.hpp"
#include "cdh/report.hpp"
#include "doctest.h"

using namespace cdh;

namespace {

ExperimentConfig small_config(Setting setting, RetrievalBackend backend) {
  ExperimentConfig config;
  config.setting = setting;
  config.backend = backend;
  config.fold_count = setting == Setting::kNormal ? 3 : 2;
  config.seed = 7;
  config.synth.case_count = 240;
  config.synth.feature_dim = 6;
  config.synth.seed = 11;
  config.training.epochs = 3;
  config.training.batch_size = 8;
  config.inner_hidden = {16};
  config.siamese_hidden = {8};
  config.embedding_dim = 4;
  return config;
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const RunHooks kOracleAdapter{
    [](std::span<const double>, double query_solution, const Case& retrieved) {
      return query_solution - retrieved.solution;
    }};

// Integer labels make sol(c) + (sol(q) - sol(c)) bitwise exact, so the
// perfect-adapter identity really is zero, not just machine-precision zero.
CaseBase with_integer_labels(const CaseBase& cb) {
  std::vector<Case> cases;
  cases.reserve(cb.size());
  for (const auto& c : cb.cases()) {
    Case copy = c;
    copy.solution = std::round(copy.solution);
    cases.push_back(std::move(copy));
  }
  return CaseBase::from_cases(std::move(cases), cb.feature_dim());
}

}  // namespace

TEST_CASE("run_normal: an oracle adapter yields exactly zero adapted MAE on every fold") {
  const ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kL1);
  const CaseBase cb = with_integer_labels(generate_synthetic(config.synth));
  const ExperimentReport report = run_normal(config, cb, kOracleAdapter);
  for (int fold = 0; fold < 3; ++fold) {
    const auto mae = report.find_mae("all", "adapt", fold);
    REQUIRE(mae.has_value());
    CHECK(*mae == 0.0);
  }
  CHECK(*report.find_mae("all", "adapt") == 0.0);
}

TEST_CASE("run_novel: the oracle adapter zeroes every bucket") {
  const ExperimentConfig config = small_config(Setting::kNovel, RetrievalBackend::kL1);
  const CaseBase cb = with_integer_labels(generate_synthetic(config.synth));
  const ExperimentReport report = run_novel(config, cb, kOracleAdapter);
  for (const auto& range : {"<20", "50-70", ">70"}) {
    const auto mae = report.find_mae(range, "adapt");
    REQUIRE(mae.has_value());
    CHECK(*mae == 0.0);
  }
}

TEST_CASE("oracle adapter on fractional labels is zero to machine precision") {
  const ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kL1);
  const CaseBase cb = generate_synthetic(config.synth);  // labels on a 0.1 grid
  const ExperimentReport report = run_normal(config, cb, kOracleAdapter);
  const auto mae = report.find_mae("all", "adapt");
  REQUIRE(mae.has_value());
  CHECK(*mae < 1e-12);
}

TEST_CASE("run_normal: identical configs give identical reports") {
  const ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kL1);
  const CaseBase cb = generate_synthetic(config.synth);
  const ExperimentReport a = run_normal(config, cb);
  const ExperimentReport b = run_normal(config, cb);
  CHECK(report_to_csv(a) == report_to_csv(b));
}

TEST_CASE("reports are independent of the fold thread count") {
  ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kL1);
  const CaseBase cb = generate_synthetic(config.synth);
  config.threads = 1;
  const ExperimentReport serial = run_normal(config, cb);
  config.threads = 3;
  const ExperimentReport parallel = run_normal(config, cb);
  CHECK(report_to_csv(serial) == report_to_csv(parallel));
}

TEST_CASE("report completeness: every configured combination appears exactly once") {
  const ExperimentConfig config = small_config(Setting::kNovel, RetrievalBackend::kL1);
  const CaseBase cb = generate_synthetic(config.synth);
  const ExperimentReport report = run_novel(config, cb);
  const std::vector<std::string> systems = {"constant", "regressor", "retrieve", "adapt"};
  const std::vector<std::string> ranges = {"<20", "50-70", ">70"};
  for (const auto& range : ranges) {
    for (const auto& system : systems) {
      for (int fold = -1; fold < 2; ++fold) {
        std::size_t hits = 0;
        for (const auto& row : report.rows) {
          if (row.query_range == range && row.system == system && row.fold == fold) ++hits;
        }
        CHECK(hits == 1);
      }
    }
  }
  CHECK(report.rows.size() == ranges.size() * systems.size() * 3);
}

TEST_CASE("stage coupling: with L1 retrieval the adapt row never loses to retrieve plus noise") {
  // the adapt error is computed from the same retrieved case; with the
  // oracle adapter adapt == 0 while retrieve stays positive
  const ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kL1);
  const CaseBase cb = generate_synthetic(config.synth);
  const ExperimentReport report = run_normal(config, cb, kOracleAdapter);
  const auto retrieve = report.find_mae("all", "retrieve");
  REQUIRE(retrieve.has_value());
  CHECK(*retrieve > 0.0);
}

TEST_CASE("siamese backend runs end to end") {
  const ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kSiamese);
  const CaseBase cb = generate_synthetic(config.synth);
  const ExperimentReport report = run_normal(config, cb);
  CHECK(report.find_mae("all", "retrieve").has_value());
  for (const auto& row : report.rows) CHECK(row.backend == "siamese");
}

TEST_CASE("empty novel bucket appears with count 0 and no MAE") {
  ExperimentConfig config = small_config(Setting::kNovel, RetrievalBackend::kL1);
  config.synth.label_lo = 20.0;
  config.synth.label_hi = 69.0;  // the >70 bucket stays empty
  const CaseBase cb = generate_synthetic(config.synth);
  const ExperimentReport report = run_novel(config, cb);
  bool saw_empty = false;
  for (const auto& row : report.rows) {
    if (row.query_range == ">70") {
      CHECK(row.count == 0);
      CHECK_FALSE(row.mae.has_value());
      saw_empty = true;
    }
  }
  CHECK(saw_empty);
}

TEST_CASE("emit_report / parse_report round-trip") {
  ExperimentReport report;
  report.rows.push_back({"normal", "all", "constant", "l1", 0, 24, 11.1234});
  report.rows.push_back({"normal", "all", "adapt", "l1", -1, 72, 3.05});
  report.rows.push_back({"novel", ">70", "retrieve", "siamese", 2, 0, std::nullopt});

  const auto path =
      (std::filesystem::temp_directory_path() / "cdh_report_rt.csv").string();
  emit_report(report, path);
  const ExperimentReport parsed = parse_report(path);
  std::filesystem::remove(path);

  REQUIRE(parsed.rows.size() == report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(parsed.rows[i].setting == report.rows[i].setting);
    CHECK(parsed.rows[i].query_range == report.rows[i].query_range);
    CHECK(parsed.rows[i].system == report.rows[i].system);
    CHECK(parsed.rows[i].backend == report.rows[i].backend);
    CHECK(parsed.rows[i].fold == report.rows[i].fold);
    CHECK(parsed.rows[i].count == report.rows[i].count);
    CHECK(parsed.rows[i].mae.has_value() == report.rows[i].mae.has_value());
    if (parsed.rows[i].mae) {
      CHECK(*parsed.rows[i].mae == doctest::Approx(*report.rows[i].mae).epsilon(1e-9));
    }
  }
}

TEST_CASE("report MAE is rendered with four decimals; empty report is header-only") {
  ExperimentReport report;
  report.rows.push_back({"normal", "all", "constant", "l1", 0, 10, 5.96684});
  const std::string csv = report_to_csv(report);
  CHECK(csv.find("5.9668") != std::string::npos);

  const ExperimentReport empty;
  CHECK(report_to_csv(empty) == "setting,query_range,system,backend,fold,count,mae\n");
}

TEST_CASE("render_table prints an aligned header") {
  ExperimentReport report;
  report.rows.push_back({"normal", "all", "adapt", "l1", -1, 100, 8.1397});
  std::ostringstream out;
  render_table(report, out);
  CHECK(out.str().find("setting") != std::string::npos);
  CHECK(out.str().find("8.1397") != std::string::npos);
  CHECK(out.str().find("avg") != std::string::npos);
}

TEST_CASE("config file parsing") {
  const std::string text = R"(
# comment
[experiment]
setting = novel
backend = siamese
folds = 4
seed = 9
output = out.csv
[data]
synth_cases = 321
synth_dim = 12
synth_noise = 0.1
frequency = 0.02,0.06
amplitude = 0.02,0.25
[network]
hidden = 128,32
dropout = 0.1
embedding_dim = 16
siamese_hidden = 48
[training]
epochs = 7
learning_rate = 2e-4
batch_size = 16
[retrieval]
positive_tolerance = 0.75
negative_gap = 12
margin = 2
)";
  const ExperimentConfig c = parse_config_text(text, "test");
  CHECK(c.setting == Setting::kNovel);
  CHECK(c.backend == RetrievalBackend::kSiamese);
  CHECK(c.fold_count == 4);
  CHECK(c.seed == 9);
  CHECK(c.output_path == "out.csv");
  CHECK(c.synth.case_count == 321);
  CHECK(c.synth.feature_dim == 12);
  CHECK(c.synth.noise_sigma == 0.1);
  CHECK(c.synth.freq_lo == 0.02);
  CHECK(c.synth.freq_hi == 0.06);
  CHECK(c.synth.amp_lo == 0.02);
  CHECK(c.synth.amp_hi == 0.25);
  CHECK(c.inner_hidden == std::vector<std::size_t>{128, 32});
  CHECK(c.dropout == 0.1);
  CHECK(c.embedding_dim == 16);
  CHECK(c.siamese_hidden == std::vector<std::size_t>{48});
  CHECK(c.training.epochs == 7);
  CHECK(c.training.learning_rate == 2e-4);
  CHECK(c.training.batch_size == 16);
  CHECK(c.triplet.positive_tolerance == 0.75);
  CHECK(c.triplet.negative_gap == 12.0);
  CHECK(c.triplet_loss.margin == 2.0);
}

TEST_CASE("config file rejects unknown keys with a line number") {
  CHECK_THROWS_WITH_AS(parse_config_text("[experiment]\nbogus = 1\n", "cfg"),
                       doctest::Contains("cfg:2"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("[nosuch]\n", "cfg"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("key = 1\n", "cfg"), std::runtime_error);
}

TEST_CASE("run_experiment writes the configured report file deterministically") {
  ExperimentConfig config = small_config(Setting::kNormal, RetrievalBackend::kL1);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string p1 = (dir / "cdh_run1.csv").string();
  const std::string p2 = (dir / "cdh_run2.csv").string();
  config.output_path = p1;
  run_experiment(config);
  config.output_path = p2;
  run_experiment(config);
  CHECK(slurp(p1) == slurp(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}
