#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace cdh {

// Per-coordinate affine normalization fitted on training data. A
// default-constructed instance is the identity, so models built directly
// from raw parameters behave as plain networks.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> stddev;

  bool identity() const { return mean.empty(); }

  static Standardizer fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("Standardizer::fit: no rows");
    const std::size_t dim = rows.front().size();
    Standardizer s;
    s.mean.assign(dim, 0.0);
    s.stddev.assign(dim, 1.0);
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < dim; ++j) s.mean[j] += r[j];
    }
    const double n = static_cast<double>(rows.size());
    for (auto& m : s.mean) m /= n;
    std::vector<double> var(dim, 0.0);
    for (const auto& r : rows) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = r[j] - s.mean[j];
        var[j] += d * d;
      }
    }
    for (std::size_t j = 0; j < dim; ++j) {
      const double sd = std::sqrt(var[j] / n);
      s.stddev[j] = sd > 1e-12 ? sd : 1.0;
    }
    return s;
  }

  static Standardizer fit_scalar(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("Standardizer::fit_scalar: no values");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    Standardizer s;
    s.mean = {mean};
    s.stddev = {var > 1e-24 ? std::sqrt(var) : 1.0};
    return s;
  }

  static Standardizer scale_only(double scale) {
    Standardizer s;
    s.mean = {0.0};
    s.stddev = {scale > 1e-12 ? scale : 1.0};
    return s;
  }

  void apply(std::span<const double> in, std::span<double> out) const {
    if (identity()) {
      for (std::size_t j = 0; j < in.size(); ++j) out[j] = in[j];
      return;
    }
    if (in.size() != mean.size()) {
      throw std::invalid_argument("Standardizer::apply: dimension mismatch");
    }
    for (std::size_t j = 0; j < in.size(); ++j) out[j] = (in[j] - mean[j]) / stddev[j];
  }

  std::vector<double> apply(std::span<const double> in) const {
    std::vector<double> out(in.size());
    apply(in, out);
    return out;
  }

  double apply_scalar(double v) const {
    return identity() ? v : (v - mean[0]) / stddev[0];
  }

  double invert_scalar(double v) const {
    return identity() ? v : v * stddev[0] + mean[0];
  }
};

}  // namespace cdh
