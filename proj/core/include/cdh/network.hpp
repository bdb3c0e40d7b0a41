#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cdh/rng.hpp"

namespace cdh {

// Row-major dense matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  double* row(std::size_t i) { return data.data() + i * cols; }
};

using Vector = std::vector<double>;

enum class Activation { kRelu };

enum class Mode { kTrain, kEval };

struct HiddenLayerSpec {
  std::size_t width = 0;
  Activation activation = Activation::kRelu;
  double dropout_rate = 0.0;  // applied after the activation, inverted scaling

  bool operator==(const HiddenLayerSpec&) const = default;
};

struct NetworkSpec {
  std::size_t input_dim = 0;
  std::vector<HiddenLayerSpec> hidden;
  std::size_t output_dim = 1;  // linear output, no activation

  bool operator==(const NetworkSpec&) const = default;

  // throws std::invalid_argument when any dimension or rate is out of range
  void validate() const;

  std::size_t layer_count() const { return hidden.size() + 1; }
  std::size_t layer_input_dim(std::size_t layer) const;
  std::size_t layer_output_dim(std::size_t layer) const;
};

// Convenience: hidden widths with one shared activation/dropout.
NetworkSpec make_spec(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths,
                      std::size_t output_dim, double dropout_rate);

// Parameter gradients shaped exactly like a model's parameters, plus the
// gradient with respect to the input.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
  Vector input;

  void add_scaled(const Gradients& other, double scale);
  void scale(double factor);
  void zero();
};

// Activations and dropout scales recorded by a forward pass; backward
// replays the same masks instead of resampling them.
struct ForwardTrace {
  Vector input;
  std::vector<Vector> pre_activation;    // one per layer
  std::vector<Vector> post_activation;   // one per layer (after dropout)
  std::vector<Vector> dropout_scale;     // per hidden layer: 0 or 1/(1-rate)
  Mode mode = Mode::kEval;

  const Vector& output() const { return post_activation.back(); }
};

struct MlpModel {
  NetworkSpec spec;
  std::vector<Matrix> weights;  // weights[l] is (out x in)
  std::vector<Vector> biases;
  Mode mode = Mode::kEval;

  static MlpModel zeros(const NetworkSpec& spec);
  // He-uniform initialization for relu layers, seeded.
  static MlpModel he_uniform(const NetworkSpec& spec, std::uint64_t seed);

  std::size_t parameter_count() const;
  Gradients zero_gradients() const;
};

// Evaluates the network. In train mode dropout needs a random source and
// the caller must pass rng; in eval mode dropout is the identity and rng
// may be null. When trace is non-null the activations and masks needed by
// backward() are captured.
Vector forward(const MlpModel& model, std::span<const double> input, Rng* rng = nullptr,
               ForwardTrace* trace = nullptr);

// Gradients of a scalar loss given d(loss)/d(output). The trace must come
// from a forward() call on the same model.
Gradients backward(const MlpModel& model, const ForwardTrace& trace,
                   std::span<const double> upstream_gradient);

// Same computation, added into an existing accumulator without allocating;
// the training loops run this once per sample.
void backward_accumulate(const MlpModel& model, const ForwardTrace& trace,
                         std::span<const double> upstream_gradient, Gradients& out);

}  // namespace cdh
