#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <filesystem>

#include "cdh/adam.hpp"
#include "cdh/checkpoint.hpp"
#include "cdh/gradcheck.hpp"
#include "cdh/losses.hpp"
#include "cdh/network.hpp"
#include "doctest.h"
#include "support/oracles.hpp"

using namespace cdh;

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(make_spec(0, {4}, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(2, {0}, 1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(2, {4}, 0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_spec(2, {4}, 1, 1.0), std::invalid_argument);
  CHECK_NOTHROW(make_spec(2, {4}, 1, 0.2));
}

TEST_CASE("forward on all-zero parameters is the zero vector") {
  const MlpModel m = MlpModel::zeros(make_spec(3, {5, 4}, 2, 0.0));
  const Vector out = forward(m, Vector{0.5, -1.0, 2.0});
  REQUIRE(out.size() == 2);
  CHECK(out[0] == 0.0);
  CHECK(out[1] == 0.0);
}

TEST_CASE("identity single dense layer passes the input through") {
  MlpModel m = MlpModel::zeros(NetworkSpec{2, {}, 2});
  m.weights[0](0, 0) = 1.0;
  m.weights[0](1, 1) = 1.0;
  const Vector out = forward(m, Vector{1.5, -2.0});
  CHECK(out[0] == 1.5);
  CHECK(out[1] == -2.0);
}

TEST_CASE("forward rejects a dimension mismatch") {
  const MlpModel m = MlpModel::zeros(make_spec(3, {4}, 1, 0.0));
  CHECK_THROWS_AS(forward(m, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("forward matches the straight-line oracle on a seeded 2-16-1 network") {
  const MlpModel m = MlpModel::he_uniform(make_spec(2, {16}, 1, 0.0), 7);
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const Vector x{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const Vector got = forward(m, x);
    const auto want = oracle::naive_forward(m, x);
    REQUIRE(got.size() == 1);
    CHECK(got[0] == doctest::Approx(want[0]).epsilon(1e-12));
  }
}

TEST_CASE("eval-mode forward is pure") {
  const MlpModel m = MlpModel::he_uniform(make_spec(4, {8, 8}, 2, 0.2), 11);
  const Vector x{0.1, -0.2, 0.3, -0.4};
  const Vector a = forward(m, x);
  const Vector b = forward(m, x);
  CHECK(a == b);
}

TEST_CASE("train mode requires a random source") {
  MlpModel m = MlpModel::he_uniform(make_spec(2, {4}, 1, 0.2), 3);
  m.mode = Mode::kTrain;
  CHECK_THROWS_AS(forward(m, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("backward: single linear layer y = w.x") {
  // loss = y, so upstream gradient is 1
  MlpModel m = MlpModel::zeros(NetworkSpec{1, {}, 1});
  m.weights[0](0, 0) = 3.0;
  ForwardTrace trace;
  forward(m, Vector{2.0}, nullptr, &trace);
  const Gradients g = backward(m, trace, Vector{1.0});
  CHECK(g.weights[0](0, 0) == 2.0);  // dL/dw = x
  CHECK(g.biases[0][0] == 1.0);      // dL/db = 1
  CHECK(g.input[0] == 3.0);          // dL/dx = w
}

TEST_CASE("backward: zero upstream gradient gives all-zero gradients") {
  const MlpModel m = MlpModel::he_uniform(make_spec(3, {6}, 2, 0.0), 5);
  ForwardTrace trace;
  forward(m, Vector{0.2, 0.4, -0.6}, nullptr, &trace);
  const Gradients g = backward(m, trace, Vector{0.0, 0.0});
  for (const auto& w : g.weights) {
    for (double v : w.data) CHECK(v == 0.0);
  }
  for (const auto& b : g.biases) {
    for (double v : b) CHECK(v == 0.0);
  }
}

TEST_CASE("backward without a matching forward is rejected") {
  const MlpModel m = MlpModel::he_uniform(make_spec(3, {4}, 1, 0.0), 5);
  ForwardTrace empty;
  CHECK_THROWS_AS(backward(m, empty, Vector{1.0}), std::invalid_argument);

  // trace from a different architecture
  const MlpModel other = MlpModel::he_uniform(make_spec(3, {4, 4}, 1, 0.0), 6);
  ForwardTrace trace;
  forward(other, Vector{1.0, 2.0, 3.0}, nullptr, &trace);
  CHECK_THROWS_AS(backward(m, trace, Vector{1.0}), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences on a random 4-8-1 network") {
  const MlpModel m = MlpModel::he_uniform(make_spec(4, {8}, 1, 0.0), 17);
  Rng rng(23);
  Vector x(4), t(1);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  t[0] = rng.uniform(-1.0, 1.0);
  const GradCheckReport r = finite_diff_check_mse(m, x, t, 1e-5, 1e-4);
  CHECK(r.pass);
  CHECK(r.max_rel_error < 1e-4);
}

TEST_CASE("gradient correctness holds across random deeper networks") {
  // networks up to 3 hidden layers, widths <= 32, inputs bounded by 1
  const GradientSuiteResult suite = run_gradient_suite(8, 99, 1e-5, 1e-4);
  CHECK(suite.pass);
}

TEST_CASE("finite_diff_check flags a corrupted gradient") {
  const MlpModel m = MlpModel::he_uniform(make_spec(3, {6}, 1, 0.0), 29);
  Rng rng(31);
  Vector x(3), t(1);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  t[0] = 0.3;
  ForwardTrace trace;
  const Vector out = forward(m, x, nullptr, &trace);
  const MseResult loss = mse_loss(out, t);
  Gradients g = backward(m, trace, loss.gradient);
  // double the largest-magnitude entry so the fault cannot hide in a dead unit
  double* worst = &g.weights[0].data[0];
  for (auto& w : g.weights) {
    for (auto& v : w.data) {
      if (std::abs(v) > std::abs(*worst)) worst = &v;
    }
  }
  REQUIRE(std::abs(*worst) > 1e-3);
  *worst *= 2.0;
  const ScalarLossFn fn = [&](const MlpModel& probe) {
    return mse_loss(forward(probe, x), t).loss;
  };
  const GradCheckReport r = finite_diff_check(m, fn, g, 1e-5, 1e-4);
  CHECK_FALSE(r.pass);
}

TEST_CASE("finite_diff_check requires eval mode") {
  MlpModel m = MlpModel::he_uniform(make_spec(2, {4}, 1, 0.2), 3);
  m.mode = Mode::kTrain;
  const ScalarLossFn fn = [](const MlpModel&) { return 0.0; };
  CHECK_THROWS_AS(finite_diff_check(m, fn, m.zero_gradients(), 1e-5, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("dropout replays the forward mask in backward") {
  MlpModel m = MlpModel::he_uniform(make_spec(2, {32}, 1, 0.5), 41);
  m.mode = Mode::kTrain;
  Rng rng(43);
  ForwardTrace trace;
  const Vector x{0.7, -0.3};
  forward(m, x, &rng, &trace);
  const Gradients g = backward(m, trace, Vector{1.0});
  // rows of the output layer whose unit was dropped must get zero gradient
  for (std::size_t j = 0; j < 32; ++j) {
    if (trace.dropout_scale[0][j] == 0.0) {
      CHECK(g.weights[1](0, j) == 0.0);
    }
  }
}

TEST_CASE("dropout expectation: train-mode average converges to the eval output") {
  MlpModel m = MlpModel::he_uniform(make_spec(3, {16}, 1, 0.2), 53);
  const Vector x{0.5, -0.5, 0.25};
  const double eval_out = forward(m, x)[0];

  m.mode = Mode::kTrain;
  Rng rng(59);
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = forward(m, x, &rng)[0];
    sum += y;
    sumsq += y * y;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  const double se = std::sqrt(var / n);
  CHECK(std::abs(mean - eval_out) < 3.0 * se + 1e-12);
}

TEST_CASE("mse_loss") {
  CHECK(mse_loss(Vector{3.0}, Vector{3.0}).loss == 0.0);
  CHECK(mse_loss(Vector{0.0, 0.0}, Vector{1.0, 1.0}).loss == 1.0);
  const MseResult r = mse_loss(Vector{2.0}, Vector{5.0});
  CHECK(r.loss == 9.0);
  CHECK(r.gradient[0] == -6.0);
  CHECK_THROWS_AS(mse_loss(Vector{1.0}, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("mae") {
  CHECK(mae(Vector{1.0, 2.0}, Vector{1.0, 2.0}) == 0.0);
  CHECK(mae(Vector{0.0}, Vector{10.0}) == 10.0);
  CHECK(mae(Vector{1.0, 4.0}, Vector{2.0, 2.0}) == 1.5);
  CHECK_THROWS_AS(mae(Vector{}, Vector{}), std::invalid_argument);
  CHECK_THROWS_AS(mae(Vector{1.0}, Vector{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("triplet margin loss") {
  const TripletLossParams params;
  SUBCASE("identical vectors clamp to the margin") {
    const Vector v{1.0, 2.0};
    CHECK(triplet_margin_loss(v, v, v, params).loss == 1.0);
  }
  SUBCASE("an easy negative clamps to zero with zero gradients") {
    const auto r = triplet_margin_loss(Vector{0.0}, Vector{1.0}, Vector{4.0}, params);
    CHECK(r.loss == 0.0);
    CHECK(r.grad_anchor[0] == 0.0);
    CHECK(r.grad_positive[0] == 0.0);
    CHECK(r.grad_negative[0] == 0.0);
  }
  SUBCASE("a hard negative is penalized") {
    CHECK(triplet_margin_loss(Vector{0.0}, Vector{2.0}, Vector{1.0}, params).loss == 2.0);
  }
  SUBCASE("non-negativity and the clamp condition on random vectors") {
    Rng rng(61);
    for (int i = 0; i < 500; ++i) {
      Vector a(3), p(3), n(3);
      for (int j = 0; j < 3; ++j) {
        a[j] = rng.uniform(-2.0, 2.0);
        p[j] = rng.uniform(-2.0, 2.0);
        n[j] = rng.uniform(-2.0, 2.0);
      }
      const auto r = triplet_margin_loss(a, p, n, params);
      CHECK(r.loss >= 0.0);
      double dap = 0.0, dan = 0.0;
      for (int j = 0; j < 3; ++j) {
        dap += std::abs(a[j] - p[j]);
        dan += std::abs(a[j] - n[j]);
      }
      if (dan >= dap + params.margin) CHECK(r.loss == 0.0);
    }
  }
  SUBCASE("dimension mismatch is rejected") {
    CHECK_THROWS_AS(triplet_margin_loss(Vector{0.0}, Vector{1.0, 2.0}, Vector{1.0}, params),
                    std::invalid_argument);
  }
}

TEST_CASE("adam: zero gradients leave parameters unchanged") {
  MlpModel m = MlpModel::he_uniform(make_spec(2, {4}, 1, 0.0), 67);
  const auto weights_before = m.weights;
  AdamState s = AdamState::create(m, 1e-3);
  adam_step(m, m.zero_gradients(), s);
  CHECK(s.step_count == 1);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    CHECK(m.weights[l].data == weights_before[l].data);
  }
}

TEST_CASE("adam: first step moves by about the learning rate against the gradient") {
  MlpModel m = MlpModel::zeros(NetworkSpec{1, {}, 1});
  AdamState s = AdamState::create(m, 1e-3);
  Gradients g = m.zero_gradients();
  g.weights[0](0, 0) = 7.5;
  adam_step(m, g, s);
  CHECK(m.weights[0](0, 0) == doctest::Approx(-1e-3).epsilon(1e-6));
}

TEST_CASE("adam: trajectory matches the scalar recurrence oracle") {
  MlpModel m = MlpModel::zeros(NetworkSpec{1, {}, 1});
  AdamState s = AdamState::create(m, 1e-2);
  Gradients g = m.zero_gradients();
  oracle::ScalarAdam ref;
  double expected = 0.0;
  for (int step = 0; step < 3; ++step) {
    g.weights[0](0, 0) = 2.0;
    adam_step(m, g, s);
    expected += ref.step(2.0, 1e-2);
    CHECK(m.weights[0](0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(s.step_count == 3);
}

TEST_CASE("adam rejects mismatched gradient shapes") {
  MlpModel m = MlpModel::he_uniform(make_spec(2, {4}, 1, 0.0), 71);
  const MlpModel other = MlpModel::he_uniform(make_spec(2, {5}, 1, 0.0), 72);
  AdamState s = AdamState::create(m, 1e-3);
  CHECK_THROWS_AS(adam_step(m, other.zero_gradients(), s), std::invalid_argument);
}

TEST_CASE("checkpoint round-trip is bit-exact in eval mode") {
  Checkpoint ckpt;
  ckpt.kind = "mlp";
  ckpt.model = MlpModel::he_uniform(make_spec(5, {16, 8}, 2, 0.2), 73);
  ckpt.seed = 73;
  ckpt.selected_epoch = 12;
  ckpt.extras["feature_dim"] = 5;

  const auto path = std::filesystem::temp_directory_path() / "cdh_test_ckpt.json";
  save_checkpoint(ckpt, path.string());
  const Checkpoint loaded = load_checkpoint(path.string());
  std::filesystem::remove(path);

  CHECK(loaded.kind == "mlp");
  CHECK(loaded.seed == 73);
  CHECK(loaded.selected_epoch == 12);
  CHECK(loaded.extras.at("feature_dim") == 5);
  CHECK(loaded.model.spec == ckpt.model.spec);

  Rng rng(79);
  for (int i = 0; i < 10; ++i) {
    Vector x(5);
    for (auto& v : x) v = rng.uniform(-3.0, 3.0);
    const Vector a = forward(ckpt.model, x);
    const Vector b = forward(loaded.model, x);
    CHECK(a == b);  // exact doubles, not approximate
  }
}

TEST_CASE("identical seeds produce identical parameters") {
  const MlpModel a = MlpModel::he_uniform(make_spec(6, {12, 4}, 1, 0.1), 1234);
  const MlpModel b = MlpModel::he_uniform(make_spec(6, {12, 4}, 1, 0.1), 1234);
  for (std::size_t l = 0; l < a.weights.size(); ++l) {
    CHECK(a.weights[l].data == b.weights[l].data);
  }
}

TEST_CASE("typed checkpoints validate their annotations") {
  const auto dir = std::filesystem::temp_directory_path();

  SUBCASE("adapter round-trip keeps the 2x input wiring") {
    AdapterModel model;
    model.feature_dim = 4;
    model.network = MlpModel::he_uniform(make_spec(8, {6}, 1, 0.1), 3);
    model.feature_scaler.mean = {0.1, 0.2, 0.3, 0.4};
    model.feature_scaler.stddev = {1.0, 2.0, 1.5, 0.5};
    model.delta_scaler = Standardizer::scale_only(21.2);
    const auto path = (dir / "cdh_adapter.json").string();
    save_adapter(model, path, 3, 7);
    const AdapterModel loaded = load_adapter(path);
    std::filesystem::remove(path);
    CHECK(loaded.feature_dim == 4);
    CHECK(loaded.network.spec == model.network.spec);
    CHECK(loaded.delta_scaler.stddev == model.delta_scaler.stddev);
    const Case retrieved{"r", {0.1, 0.2, 0.3, 0.4}, 30.0};
    const Vector q{0.5, 0.6, 0.7, 0.8};
    CHECK(predict_delta(loaded, q, retrieved) == predict_delta(model, q, retrieved));
  }

  SUBCASE("siamese round-trip keeps loss params and embeds identically") {
    SiameseModel model;
    model.embedding_dim = 5;
    model.loss_params.margin = 1.5;
    model.embedder = MlpModel::he_uniform(make_spec(3, {10}, 5, 0.2), 9);
    model.input_scaler.mean = {0.0, 0.1, -0.1};
    model.input_scaler.stddev = {1.5, 0.8, 1.1};
    const auto path = (dir / "cdh_siamese.json").string();
    save_siamese(model, path);
    const SiameseModel loaded = load_siamese(path);
    std::filesystem::remove(path);
    CHECK(loaded.embedding_dim == 5);
    CHECK(loaded.loss_params.margin == 1.5);
    CHECK(loaded.embed(Vector{0.2, -0.4, 0.6}) == model.embed(Vector{0.2, -0.4, 0.6}));
  }

  SUBCASE("kind mismatch is rejected") {
    RegressorModel model;
    model.network = MlpModel::he_uniform(make_spec(4, {6}, 1, 0.0), 11);
    const auto path = (dir / "cdh_reg.json").string();
    save_regressor(model, path);
    CHECK_THROWS_AS(load_adapter(path), std::runtime_error);
    const RegressorModel loaded = load_regressor(path);
    CHECK(loaded.network.spec == model.network.spec);
    std::filesystem::remove(path);
  }
}
