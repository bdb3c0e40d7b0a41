#include <benchmark/benchmark.h>

#include "cdh/adam.hpp"
#include "cdh/adapter.hpp"
#include "cdh/losses.hpp"
#include "cdh/retrieval.hpp"
#include "cdh/synthetic.hpp"
#include "cdh/triplet.hpp"

namespace {

cdh::CaseBase reference_cases() {
  cdh::SynthConfig config;
  config.seed = 42;
  return cdh::generate_synthetic(config);
}

void BM_ForwardEval(benchmark::State& state) {
  const auto model =
      cdh::MlpModel::he_uniform(cdh::make_spec(32, {512, 64}, 1, 0.2), 1);
  cdh::Rng rng(2);
  cdh::Vector x(32);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cdh::forward(model, x));
  }
}
BENCHMARK(BM_ForwardEval);

void BM_ForwardBackwardTrain(benchmark::State& state) {
  auto model = cdh::MlpModel::he_uniform(cdh::make_spec(32, {512, 64}, 1, 0.2), 1);
  model.mode = cdh::Mode::kTrain;
  cdh::Rng rng(2);
  cdh::Vector x(32);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  cdh::ForwardTrace trace;
  cdh::Gradients grads = model.zero_gradients();
  const cdh::Vector target{0.5};
  for (auto _ : state) {
    const cdh::Vector out = cdh::forward(model, x, &rng, &trace);
    const auto loss = cdh::mse_loss(out, target);
    cdh::backward_accumulate(model, trace, loss.gradient, grads);
    benchmark::DoNotOptimize(grads.weights[0].data.data());
  }
}
BENCHMARK(BM_ForwardBackwardTrain);

void BM_AdamStep(benchmark::State& state) {
  auto model = cdh::MlpModel::he_uniform(cdh::make_spec(32, {512, 64}, 1, 0.2), 1);
  auto adam = cdh::AdamState::create(model, 1e-4);
  cdh::Gradients grads = model.zero_gradients();
  for (auto& w : grads.weights) {
    for (auto& v : w.data) v = 1e-3;
  }
  for (auto _ : state) {
    cdh::adam_step(model, grads, adam);
  }
  benchmark::DoNotOptimize(model.weights[0].data.data());
}
BENCHMARK(BM_AdamStep);

void BM_RetrieveL1(benchmark::State& state) {
  const cdh::CaseBase cb = reference_cases();
  cdh::Rng rng(3);
  cdh::Vector q(cb.feature_dim());
  for (auto& v : q) v = rng.uniform(-0.3, 0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(cdh::retrieve_l1(q, cb));
  }
  state.SetItemsProcessed(state.iterations() * cb.size());
}
BENCHMARK(BM_RetrieveL1);

void BM_SampleTriplet(benchmark::State& state) {
  const cdh::CaseBase cb = reference_cases();
  const cdh::TripletSampler sampler(cb, {});
  cdh::Rng rng(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sampler.sample(rng.index(cb.size()), rng));
  }
}
BENCHMARK(BM_SampleTriplet);

void BM_GenerateSynthetic(benchmark::State& state) {
  cdh::SynthConfig config;
  config.case_count = static_cast<std::size_t>(state.range(0));
  config.seed = 42;
  for (auto _ : state) {
    benchmark::DoNotOptimize(cdh::generate_synthetic(config));
  }
  state.SetItemsProcessed(state.iterations() * config.case_count);
}
BENCHMARK(BM_GenerateSynthetic)->Arg(1000)->Arg(4000);

}  // namespace

BENCHMARK_MAIN();
