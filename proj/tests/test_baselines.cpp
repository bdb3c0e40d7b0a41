#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cdh/adapter.hpp"
#include "cdh/baselines.hpp"
#include "cdh/synthetic.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cdh;

namespace {

CaseBase synth(std::size_t n, std::size_t dim, std::uint64_t seed) {
  SynthConfig config;
  config.case_count = n;
  config.feature_dim = dim;
  config.seed = seed;
  return generate_synthetic(config);
}

CaseBase with_solutions(const std::vector<double>& sols) {
  std::vector<Case> cases;
  for (std::size_t i = 0; i < sols.size(); ++i) {
    cases.push_back({"c" + std::to_string(i), {static_cast<double>(i) * 0.1}, sols[i]});
  }
  return CaseBase::from_cases(std::move(cases), 1);
}

}  // namespace

TEST_CASE("fit_constant") {
  CHECK(fit_constant(with_solutions({10.0, 20.0, 30.0})).value == 20.0);
  CHECK(fit_constant(with_solutions({42.0})).value == 42.0);
  CHECK_THROWS_AS(fit_constant(CaseBase{}), std::invalid_argument);
}

TEST_CASE("fit_constant matches a compensated-summation oracle on 10000 values") {
  Rng rng(3);
  std::vector<double> sols(10000);
  for (auto& s : sols) s = rng.uniform(1.0, 100.0);
  const CaseBase cb = with_solutions(sols);
  const double got = fit_constant(cb).value;
  CHECK(std::abs(got - oracle::kahan_mean(sols)) < 1e-9);
}

TEST_CASE("constant prediction is input-independent by construction") {
  const ConstantModel m = fit_constant(with_solutions({1.0, 2.0, 3.0}));
  CHECK(m.value == 2.0);
}

TEST_CASE("predict_regressor: zero-parameter model predicts zero and is deterministic") {
  RegressorModel model;
  model.network = MlpModel::zeros(make_spec(4, {8}, 1, 0.0));
  const Vector x{0.1, 0.2, 0.3, 0.4};
  CHECK(predict_regressor(model, x) == 0.0);
  CHECK(predict_regressor(model, x) == predict_regressor(model, x));
  CHECK_THROWS_AS(predict_regressor(model, Vector{1.0}), std::invalid_argument);
}

TEST_CASE("predict_regressor matches the forward-pass oracle") {
  RegressorModel model;
  model.network = MlpModel::he_uniform(make_spec(3, {12}, 1, 0.0), 7);
  Rng rng(11);
  for (int i = 0; i < 30; ++i) {
    Vector x(3);
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    const double want = oracle::naive_forward(model.network, x)[0];
    CHECK(predict_regressor(model, x) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("train_regressor: constant targets converge and the log is complete") {
  CaseBase cb = with_solutions(std::vector<double>(120, 33.0));
  std::vector<std::size_t> tr, va;
  for (std::size_t i = 0; i < cb.size(); ++i) (i % 6 == 5 ? va : tr).push_back(i);
  RegressorConfig config;
  config.hidden = {16};
  config.training.epochs = 10;
  const RegressorTrainResult r = train_regressor(cb.subset(tr), cb.subset(va), config, 13);
  CHECK(r.log.epochs.size() == 10);
  CHECK(r.log.selected_validation_mae <= r.log.initial_validation_mae);
  // target scaler centers on the constant, so predictions start at 33
  CHECK(predict_regressor(r.model, cb[0].features) == doctest::Approx(33.0).epsilon(0.05));
}

TEST_CASE("train_regressor beats the constant baseline on learnable synthetic data") {
  const CaseBase cb = synth(500, 8, 17);
  std::vector<std::size_t> tr, va, te;
  for (std::size_t i = 0; i < cb.size(); ++i) {
    if (i % 5 == 4) {
      te.push_back(i);
    } else if (i % 5 == 3) {
      va.push_back(i);
    } else {
      tr.push_back(i);
    }
  }
  const CaseBase train = cb.subset(tr), val = cb.subset(va), test = cb.subset(te);
  RegressorConfig config;
  config.hidden = {64, 16};
  config.training.epochs = 25;
  config.training.learning_rate = 1e-3;  // small-run rate
  const RegressorTrainResult r = train_regressor(train, val, config, 19);
  const ConstantModel constant = fit_constant(train);

  double reg_err = 0.0, const_err = 0.0;
  for (const auto& q : test.cases()) {
    reg_err += std::abs(predict_regressor(r.model, q.features) - q.solution);
    const_err += std::abs(constant.value - q.solution);
  }
  CHECK(reg_err < const_err);
}

TEST_CASE("structural parity: regressor and adapter report identical inner specs") {
  const CaseBase cb = synth(90, 4, 23);
  std::vector<std::size_t> tr, va;
  for (std::size_t i = 0; i < cb.size(); ++i) (i % 6 == 5 ? va : tr).push_back(i);
  const CaseBase train = cb.subset(tr), val = cb.subset(va);

  RegressorConfig rc;
  rc.hidden = {24, 8};
  rc.training.epochs = 2;
  AdapterConfig ac;
  ac.hidden = {24, 8};
  ac.training.epochs = 2;
  const auto reg = train_regressor(train, val, rc, 29);
  const auto ada = train_adapter(train, val, ac, 29);
  CHECK(reg.model.inner_spec() == ada.model.inner_spec());
  CHECK(reg.model.network.spec.input_dim == 4);
  CHECK(ada.model.network.spec.input_dim == 8);  // 2 * feature_dim
}

TEST_CASE("train_regressor determinism: identical seeds give identical parameters") {
  const CaseBase cb = synth(100, 4, 31);
  std::vector<std::size_t> tr, va;
  for (std::size_t i = 0; i < cb.size(); ++i) (i % 6 == 5 ? va : tr).push_back(i);
  RegressorConfig config;
  config.hidden = {12};
  config.training.epochs = 4;
  const auto a = train_regressor(cb.subset(tr), cb.subset(va), config, 37);
  const auto b = train_regressor(cb.subset(tr), cb.subset(va), config, 37);
  for (std::size_t l = 0; l < a.model.network.weights.size(); ++l) {
    CHECK(a.model.network.weights[l].data == b.model.network.weights[l].data);
  }
}
