#pragma once

#include <span>

#include "cdh/network.hpp"

namespace cdh {

struct MseResult {
  double loss = 0.0;
  Vector gradient;  // d(loss)/d(predicted), length = predicted length
};

// Mean of squared differences; gradient 2(p - t)/n.
MseResult mse_loss(std::span<const double> predicted, std::span<const double> target);

// Mean absolute error. Rejects empty input.
double mae(std::span<const double> predicted, std::span<const double> target);

struct TripletLossParams {
  double margin = 1.0;
  int norm_order = 1;  // L1

  void validate() const;
};

struct TripletLossResult {
  double loss = 0.0;
  Vector grad_anchor;
  Vector grad_positive;
  Vector grad_negative;
};

// max(d(a,p) - d(a,n) + margin, 0) with d the L1 distance. Gradients are
// zero when the hinge clamps; the subgradient at |.| kinks is 0.
TripletLossResult triplet_margin_loss(std::span<const double> anchor,
                                      std::span<const double> positive,
                                      std::span<const double> negative,
                                      const TripletLossParams& params);

}  // namespace cdh
