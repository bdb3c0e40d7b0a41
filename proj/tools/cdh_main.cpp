#include <cstdio>
#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "cdh/case_io.hpp"
#include "cdh/config_file.hpp"
#include "cdh/gradcheck.hpp"
#include "cdh/report.hpp"

namespace {

int cmd_synth(const cdh::SynthConfig& config, const std::string& out_path) {
  const cdh::CaseBase cb = cdh::generate_synthetic(config);
  cdh::save_cases(cb, out_path);
  std::cout << "wrote " << cb.size() << " cases (dim " << cb.feature_dim() << ") to " << out_path
            << "\n";
  return 0;
}

int cmd_run(const cdh::ExperimentConfig& config) {
  const cdh::ExperimentReport report = cdh::run_experiment(config);
  cdh::render_table(report, std::cout);
  if (!config.output_path.empty()) {
    std::cout << "report written to " << config.output_path << "\n";
  }
  return 0;
}

int cmd_check(std::size_t networks, std::uint64_t seed, double step, double tolerance) {
  const cdh::GradientSuiteResult result = cdh::run_gradient_suite(networks, seed, step, tolerance);
  for (const auto& line : result.lines) {
    std::printf("[%s] %-44s max rel err %.3e\n", line.pass ? "PASS" : "FAIL", line.name.c_str(),
                line.max_rel_error);
  }
  std::printf("%s: %zu checks, max relative error %.3e (tolerance %.1e)\n",
              result.pass ? "OK" : "FAILED", result.lines.size(), result.max_rel_error, tolerance);
  return result.pass ? 0 : 1;
}

int cmd_report(const std::string& path) {
  const cdh::ExperimentReport report = cdh::parse_report(path);
  cdh::render_table(report, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"case-based regression with learned difference adaptation"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic feature file");
  cdh::SynthConfig synth_config;
  std::string synth_out;
  synth->add_option("--n", synth_config.case_count, "number of cases")->required();
  synth->add_option("--dim", synth_config.feature_dim, "feature dimension")->required();
  synth->add_option("--seed", synth_config.seed, "generator seed")->required();
  synth->add_option("--out", synth_out, "output feature file")->required();
  synth->add_option("--noise", synth_config.noise_sigma, "noise sigma (default 0.05)");
  synth->add_option("--label-mean", synth_config.label_mean, "label mean (default 35)");
  synth->add_option("--label-sd", synth_config.label_sd, "label sd (default 15)");
  synth->add_option("--label-lo", synth_config.label_lo, "label lower bound (default 1)");
  synth->add_option("--label-hi", synth_config.label_hi, "label upper bound (default 100)");

  // run
  auto* run = app.add_subcommand("run", "run an evaluation setting and write a report");
  std::string run_config_path, run_data, run_setting, run_backend, run_out;
  cdh::ExperimentConfig run_defaults;
  std::size_t run_folds = 0;
  std::uint64_t run_seed = run_defaults.seed;
  std::uint64_t run_synth_seed = run_defaults.synth.seed;
  std::size_t run_epochs = 0, run_batch = 0, run_threads = 0;
  double run_lr = 0.0;
  bool run_threads_set = false;
  run->add_option("--config", run_config_path, "config file (key = value sections)");
  run->add_option("--data", run_data, "feature file; omit to use the synthetic generator");
  run->add_option("--setting", run_setting, "normal | novel");
  run->add_option("--backend", run_backend, "l1 | siamese");
  run->add_option("--folds", run_folds, "fold count");
  run->add_option("--seed", run_seed, "experiment seed");
  run->add_option("--synth-seed", run_synth_seed, "synthetic data seed (default 42)");
  run->add_option("--out", run_out, "report file");
  run->add_option("--epochs", run_epochs, "training epochs");
  run->add_option("--lr", run_lr, "learning rate");
  run->add_option("--batch", run_batch, "batch size");
  run->add_option("--threads", run_threads, "parallel folds (0 = hardware)")
      ->each([&](const std::string&) { run_threads_set = true; });

  // check
  auto* check = app.add_subcommand("check", "finite-difference gradient suite");
  std::size_t check_networks = 20;
  std::uint64_t check_seed = 7;
  double check_step = 1e-5, check_tol = 1e-4;
  check->add_option("--networks", check_networks, "number of random networks (default 20)");
  check->add_option("--seed", check_seed, "suite seed (default 7)");
  check->add_option("--step", check_step, "finite-difference step (default 1e-5)");
  check->add_option("--tol", check_tol, "relative tolerance (default 1e-4)");

  // report
  auto* report = app.add_subcommand("report", "re-render a saved report");
  std::string report_path;
  report->add_option("file", report_path, "report csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(synth_config, synth_out);
    if (check->parsed()) return cmd_check(check_networks, check_seed, check_step, check_tol);
    if (report->parsed()) return cmd_report(report_path);

    cdh::ExperimentConfig config;
    if (!run_config_path.empty()) config = cdh::parse_config_file(run_config_path);
    if (!run_data.empty()) config.data_file = run_data;
    if (!run_setting.empty()) {
      if (run_setting == "normal") {
        config.setting = cdh::Setting::kNormal;
      } else if (run_setting == "novel") {
        config.setting = cdh::Setting::kNovel;
      } else {
        throw std::runtime_error("--setting must be normal or novel");
      }
    }
    if (!run_backend.empty()) {
      if (run_backend == "l1") {
        config.backend = cdh::RetrievalBackend::kL1;
      } else if (run_backend == "siamese") {
        config.backend = cdh::RetrievalBackend::kSiamese;
      } else {
        throw std::runtime_error("--backend must be l1 or siamese");
      }
    }
    if (run_folds > 0) config.fold_count = run_folds;
    if (run->count("--seed") > 0) config.seed = run_seed;
    if (run->count("--synth-seed") > 0) config.synth.seed = run_synth_seed;
    if (!run_out.empty()) config.output_path = run_out;
    if (run_epochs > 0) config.training.epochs = run_epochs;
    if (run_lr > 0.0) config.training.learning_rate = run_lr;
    if (run_batch > 0) config.training.batch_size = run_batch;
    if (run_threads_set) config.threads = run_threads;
    return cmd_run(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
