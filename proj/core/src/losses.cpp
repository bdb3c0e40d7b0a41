#include "cdh/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace cdh {

MseResult mse_loss(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != target.size()) {
    throw std::invalid_argument("mse_loss: length mismatch");
  }
  if (predicted.empty()) throw std::invalid_argument("mse_loss: empty input");
  const double n = static_cast<double>(predicted.size());
  MseResult r;
  r.gradient.resize(predicted.size());
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - target[i];
    r.loss += d * d;
    r.gradient[i] = 2.0 * d / n;
  }
  r.loss /= n;
  return r;
}

double mae(std::span<const double> predicted, std::span<const double> target) {
  if (predicted.size() != target.size()) {
    throw std::invalid_argument("mae: length mismatch");
  }
  if (predicted.empty()) throw std::invalid_argument("mae: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    sum += std::abs(predicted[i] - target[i]);
  }
  return sum / static_cast<double>(predicted.size());
}

void TripletLossParams::validate() const {
  if (margin <= 0.0) throw std::invalid_argument("TripletLossParams: margin must be > 0");
  if (norm_order != 1) throw std::invalid_argument("TripletLossParams: only L1 is supported");
}

namespace {
double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
}  // namespace

TripletLossResult triplet_margin_loss(std::span<const double> anchor,
                                      std::span<const double> positive,
                                      std::span<const double> negative,
                                      const TripletLossParams& params) {
  params.validate();
  if (anchor.size() != positive.size() || anchor.size() != negative.size()) {
    throw std::invalid_argument("triplet_margin_loss: embedding dimension mismatch");
  }
  const std::size_t n = anchor.size();
  double dap = 0.0, dan = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    dap += std::abs(anchor[i] - positive[i]);
    dan += std::abs(anchor[i] - negative[i]);
  }
  TripletLossResult r;
  r.grad_anchor.assign(n, 0.0);
  r.grad_positive.assign(n, 0.0);
  r.grad_negative.assign(n, 0.0);
  const double hinge = dap - dan + params.margin;
  if (hinge <= 0.0) return r;  // clamped: loss 0, gradients 0
  r.loss = hinge;
  for (std::size_t i = 0; i < n; ++i) {
    const double sap = sign0(anchor[i] - positive[i]);
    const double san = sign0(anchor[i] - negative[i]);
    r.grad_anchor[i] = sap - san;
    r.grad_positive[i] = -sap;
    r.grad_negative[i] = san;
  }
  return r;
}

}  // namespace cdh
