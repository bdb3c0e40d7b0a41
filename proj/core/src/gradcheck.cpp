#include "cdh/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

#include "cdh/losses.hpp"

namespace cdh {

namespace {

double rel_error(double a, double n) {
  // Central differences carry cancellation noise of roughly
  // eps * |loss| / step. Differences below 1e-7 are that noise, not a
  // gradient mismatch (matters when the true gradient is exactly zero).
  if (std::abs(a - n) <= 1e-7) return 0.0;
  const double denom = std::max({std::abs(a), std::abs(n), 1e-8});
  return std::abs(a - n) / denom;
}

double check_block(std::vector<double>& params, const std::vector<double>& analytic,
                   MlpModel& model, const ScalarLossFn& loss, double h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + h;
    const double up = loss(model);
    params[i] = saved - h;
    const double down = loss(model);
    params[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    worst = std::max(worst, rel_error(analytic[i], numeric));
  }
  return worst;
}

}  // namespace

GradCheckReport finite_diff_check(const MlpModel& model, const ScalarLossFn& loss,
                                  const Gradients& analytic, double step, double tolerance) {
  if (model.mode != Mode::kEval) {
    throw std::invalid_argument("finite_diff_check: model must be in eval mode");
  }
  MlpModel probe = model;  // perturbed copy; the input model stays untouched
  GradCheckReport report;
  for (std::size_t l = 0; l < probe.weights.size(); ++l) {
    GradCheckEntry we;
    we.layer = l;
    we.is_bias = false;
    we.max_rel_error =
        check_block(probe.weights[l].data, analytic.weights[l].data, probe, loss, step);
    we.pass = we.max_rel_error < tolerance;
    report.entries.push_back(we);

    GradCheckEntry be;
    be.layer = l;
    be.is_bias = true;
    be.max_rel_error = check_block(probe.biases[l], analytic.biases[l], probe, loss, step);
    be.pass = be.max_rel_error < tolerance;
    report.entries.push_back(be);
  }
  for (const auto& e : report.entries) {
    report.max_rel_error = std::max(report.max_rel_error, e.max_rel_error);
    report.pass = report.pass && e.pass;
  }
  return report;
}

GradCheckReport finite_diff_check_mse(const MlpModel& model, const Vector& input,
                                      const Vector& target, double step, double tolerance) {
  ForwardTrace trace;
  const Vector out = forward(model, input, nullptr, &trace);
  const MseResult m = mse_loss(out, target);
  const Gradients analytic = backward(model, trace, m.gradient);
  const ScalarLossFn loss = [&](const MlpModel& probe) {
    return mse_loss(forward(probe, input), target).loss;
  };
  return finite_diff_check(model, loss, analytic, step, tolerance);
}

GradientSuiteResult run_gradient_suite(std::size_t network_count, std::uint64_t seed,
                                       double step, double tolerance) {
  GradientSuiteResult result;
  Rng rng(seed);
  for (std::size_t k = 0; k < network_count; ++k) {
    // up to 3 hidden layers, widths <= 32, inputs bounded by 1
    const std::size_t input_dim = 2 + rng.index(7);
    const std::size_t output_dim = 1 + rng.index(3);
    const std::size_t depth = 1 + rng.index(3);
    std::vector<std::size_t> widths;
    for (std::size_t d = 0; d < depth; ++d) widths.push_back(2 + rng.index(31));
    const double dropout = k % 2 == 0 ? 0.2 : 0.0;  // identity in eval mode either way

    MlpModel model = MlpModel::he_uniform(make_spec(input_dim, widths, output_dim, dropout),
                                          rng.raw());
    Vector input(input_dim), target(output_dim);
    for (auto& x : input) x = rng.uniform(-1.0, 1.0);
    for (auto& t : target) t = rng.uniform(-1.0, 1.0);

    const GradCheckReport r = finite_diff_check_mse(model, input, target, step, tolerance);
    GradientSuiteResult::Line line;
    line.name = "network " + std::to_string(k) + " (" + std::to_string(input_dim) + "->" +
                std::to_string(output_dim) + ", depth " + std::to_string(depth) + ")";
    line.max_rel_error = r.max_rel_error;
    line.pass = r.pass;
    result.lines.push_back(line);
  }

  // Triplet margin loss away from the hinge boundary and the |.| kinks:
  // keep every coordinate difference and the hinge value bounded away
  // from zero, then finite-difference each embedding coordinate.
  {
    TripletLossParams params;
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const std::size_t dim = 2 + rng.index(7);
      Vector a(dim), p(dim), n(dim);
      bool ok = false;
      while (!ok) {
        for (std::size_t i = 0; i < dim; ++i) {
          a[i] = rng.uniform(-1.0, 1.0);
          p[i] = rng.uniform(-1.0, 1.0);
          n[i] = rng.uniform(-1.0, 1.0);
        }
        const auto r0 = triplet_margin_loss(a, p, n, params);
        ok = r0.loss > 0.05;
        for (std::size_t i = 0; i < dim && ok; ++i) {
          ok = std::abs(a[i] - p[i]) > 0.05 && std::abs(a[i] - n[i]) > 0.05;
        }
      }
      const auto base = triplet_margin_loss(a, p, n, params);
      auto probe = [&](Vector& v, std::size_t i, const Vector& analytic) {
        const double saved = v[i];
        v[i] = saved + step;
        const double up = triplet_margin_loss(a, p, n, params).loss;
        v[i] = saved - step;
        const double down = triplet_margin_loss(a, p, n, params).loss;
        v[i] = saved;
        worst = std::max(worst, rel_error(analytic[i], (up - down) / (2.0 * step)));
      };
      for (std::size_t i = 0; i < dim; ++i) {
        probe(a, i, base.grad_anchor);
        probe(p, i, base.grad_positive);
        probe(n, i, base.grad_negative);
      }
    }
    GradientSuiteResult::Line line;
    line.name = "triplet margin loss (away from kinks)";
    line.max_rel_error = worst;
    line.pass = worst < tolerance;
    result.lines.push_back(line);
  }

  for (const auto& line : result.lines) {
    result.max_rel_error = std::max(result.max_rel_error, line.max_rel_error);
    result.pass = result.pass && line.pass;
  }
  return result;
}

}  // namespace cdh
