#pragma once

#include <functional>
#include <string>

#include "cdh/network.hpp"

namespace cdh {

using ScalarLossFn = std::function<double(const MlpModel&)>;

struct GradCheckEntry {
  std::size_t layer = 0;
  bool is_bias = false;
  double max_rel_error = 0.0;
  bool pass = true;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_rel_error = 0.0;
  bool pass = true;
};

// Compares an analytic gradient against central finite differences of the
// loss, parameter by parameter. Relative error uses max(|a|, |n|, 1e-8) as
// the denominator. The model must be in eval mode so the loss is
// deterministic.
GradCheckReport finite_diff_check(const MlpModel& model, const ScalarLossFn& loss,
                                  const Gradients& analytic, double step, double tolerance);

// Convenience wrapper: loss = MSE(forward(model, input), target), with the
// analytic gradient obtained from backward().
GradCheckReport finite_diff_check_mse(const MlpModel& model, const Vector& input,
                                      const Vector& target, double step, double tolerance);

// The standing gradient gate: random dense+relu+dropout(eval) networks
// checked against finite differences, plus the triplet margin loss checked
// away from its kinks. Used by the CLI `check` subcommand and the
// acceptance suite.
struct GradientSuiteResult {
  struct Line {
    std::string name;
    double max_rel_error = 0.0;
    bool pass = true;
  };
  std::vector<Line> lines;
  bool pass = true;
  double max_rel_error = 0.0;
};

GradientSuiteResult run_gradient_suite(std::size_t network_count, std::uint64_t seed,
                                       double step, double tolerance);

}  // namespace cdh
