#include "cdh/network.hpp"

#include <cmath>
#include <stdexcept>

namespace cdh {

void NetworkSpec::validate() const {
  if (input_dim < 1) throw std::invalid_argument("NetworkSpec: input_dim must be >= 1");
  if (output_dim < 1) throw std::invalid_argument("NetworkSpec: output_dim must be >= 1");
  for (const auto& layer : hidden) {
    if (layer.width < 1) throw std::invalid_argument("NetworkSpec: hidden width must be >= 1");
    if (layer.dropout_rate < 0.0 || layer.dropout_rate >= 1.0) {
      throw std::invalid_argument("NetworkSpec: dropout_rate must be in [0, 1)");
    }
  }
}

std::size_t NetworkSpec::layer_input_dim(std::size_t layer) const {
  return layer == 0 ? input_dim : hidden[layer - 1].width;
}

std::size_t NetworkSpec::layer_output_dim(std::size_t layer) const {
  return layer == hidden.size() ? output_dim : hidden[layer].width;
}

NetworkSpec make_spec(std::size_t input_dim, const std::vector<std::size_t>& hidden_widths,
                      std::size_t output_dim, double dropout_rate) {
  NetworkSpec spec;
  spec.input_dim = input_dim;
  spec.output_dim = output_dim;
  for (std::size_t w : hidden_widths) {
    spec.hidden.push_back({w, Activation::kRelu, dropout_rate});
  }
  spec.validate();
  return spec;
}

void Gradients::add_scaled(const Gradients& other, double scale) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    auto& w = weights[l].data;
    const auto& ow = other.weights[l].data;
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += scale * ow[i];
    auto& b = biases[l];
    const auto& ob = other.biases[l];
    for (std::size_t i = 0; i < b.size(); ++i) b[i] += scale * ob[i];
  }
}

void Gradients::scale(double factor) {
  for (auto& w : weights)
    for (auto& x : w.data) x *= factor;
  for (auto& b : biases)
    for (auto& x : b) x *= factor;
}

void Gradients::zero() {
  for (auto& w : weights) std::fill(w.data.begin(), w.data.end(), 0.0);
  for (auto& b : biases) std::fill(b.begin(), b.end(), 0.0);
  std::fill(input.begin(), input.end(), 0.0);
}

MlpModel MlpModel::zeros(const NetworkSpec& spec) {
  spec.validate();
  MlpModel m;
  m.spec = spec;
  for (std::size_t l = 0; l < spec.layer_count(); ++l) {
    m.weights.emplace_back(spec.layer_output_dim(l), spec.layer_input_dim(l));
    m.biases.emplace_back(spec.layer_output_dim(l), 0.0);
  }
  return m;
}

MlpModel MlpModel::he_uniform(const NetworkSpec& spec, std::uint64_t seed) {
  MlpModel m = zeros(spec);
  Rng rng(seed);
  for (auto& w : m.weights) {
    const double limit = std::sqrt(6.0 / static_cast<double>(w.cols));
    for (auto& x : w.data) x = rng.uniform(-limit, limit);
  }
  return m;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& w : weights) n += w.data.size();
  for (const auto& b : biases) n += b.size();
  return n;
}

Gradients MlpModel::zero_gradients() const {
  Gradients g;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    g.weights.emplace_back(weights[l].rows, weights[l].cols);
    g.biases.emplace_back(biases[l].size(), 0.0);
  }
  g.input.assign(spec.input_dim, 0.0);
  return g;
}

Vector forward(const MlpModel& model, std::span<const double> input, Rng* rng,
               ForwardTrace* trace) {
  if (input.size() != model.spec.input_dim) {
    throw std::invalid_argument("forward: input length " + std::to_string(input.size()) +
                                " does not match input_dim " +
                                std::to_string(model.spec.input_dim));
  }
  const bool train = model.mode == Mode::kTrain;
  if (train && rng == nullptr) {
    throw std::invalid_argument("forward: train mode requires a random source for dropout");
  }
  if (trace) {
    trace->input.assign(input.begin(), input.end());
    trace->pre_activation.clear();
    trace->post_activation.clear();
    trace->dropout_scale.clear();
    trace->mode = model.mode;
  }

  Vector current(input.begin(), input.end());
  const std::size_t layers = model.spec.layer_count();
  for (std::size_t l = 0; l < layers; ++l) {
    const Matrix& w = model.weights[l];
    const Vector& b = model.biases[l];
    Vector z(w.rows);
    const double* __restrict x = current.data();
    const std::size_t cols = w.cols;
    for (std::size_t i = 0; i < w.rows; ++i) {
      const double* __restrict wr = w.row(i);
      // four fixed partial sums so the reduction can vectorize without
      // changing the summation order between runs
      double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
      std::size_t j = 0;
      for (; j + 4 <= cols; j += 4) {
        s0 += wr[j] * x[j];
        s1 += wr[j + 1] * x[j + 1];
        s2 += wr[j + 2] * x[j + 2];
        s3 += wr[j + 3] * x[j + 3];
      }
      double sum = b[i] + ((s0 + s1) + (s2 + s3));
      for (; j < cols; ++j) sum += wr[j] * x[j];
      z[i] = sum;
    }
    if (trace) trace->pre_activation.push_back(z);

    if (l + 1 < layers) {
      const auto& layer = model.spec.hidden[l];
      for (auto& x : z) x = x > 0.0 ? x : 0.0;  // relu
      if (layer.dropout_rate > 0.0) {
        Vector scale(z.size(), 1.0);
        if (train) {
          const double keep = 1.0 - layer.dropout_rate;
          for (std::size_t i = 0; i < z.size(); ++i) {
            scale[i] = rng->uniform() < layer.dropout_rate ? 0.0 : 1.0 / keep;
            z[i] *= scale[i];
          }
        }
        if (trace) trace->dropout_scale.push_back(std::move(scale));
      } else if (trace) {
        trace->dropout_scale.emplace_back(z.size(), 1.0);
      }
    }
    if (trace) trace->post_activation.push_back(z);
    current = std::move(z);
  }
  return current;
}

void backward_accumulate(const MlpModel& model, const ForwardTrace& trace,
                         std::span<const double> upstream_gradient, Gradients& out) {
  const std::size_t layers = model.spec.layer_count();
  if (trace.pre_activation.size() != layers || trace.input.size() != model.spec.input_dim) {
    throw std::invalid_argument("backward: trace does not match the model; call forward first");
  }
  if (upstream_gradient.size() != model.spec.output_dim) {
    throw std::invalid_argument("backward: upstream gradient length must equal output_dim");
  }
  if (out.weights.size() != layers) {
    throw std::invalid_argument("backward: accumulator shape mismatch");
  }

  Vector delta(upstream_gradient.begin(), upstream_gradient.end());
  Vector prev;

  for (std::size_t l = layers; l-- > 0;) {
    const Matrix& w = model.weights[l];
    const Vector& in = l == 0 ? trace.input : trace.post_activation[l - 1];
    Matrix& gw = out.weights[l];
    Vector& gb = out.biases[l];
    prev.assign(w.cols, 0.0);
    const double* __restrict inp = in.data();
    double* __restrict pv = prev.data();
    for (std::size_t i = 0; i < w.rows; ++i) {
      const double d = delta[i];
      gb[i] += d;
      if (d == 0.0) continue;
      double* __restrict gwr = gw.row(i);
      const double* __restrict wr = w.row(i);
      for (std::size_t j = 0; j < w.cols; ++j) {
        gwr[j] += d * inp[j];
        pv[j] += d * wr[j];
      }
    }

    if (l > 0) {
      // chain through dropout scale and the relu derivative
      const Vector& scale = trace.dropout_scale[l - 1];
      const Vector& pre = trace.pre_activation[l - 1];
      for (std::size_t j = 0; j < prev.size(); ++j) {
        prev[j] *= scale[j];
        if (pre[j] <= 0.0) prev[j] = 0.0;
      }
    }
    std::swap(delta, prev);
  }
  for (std::size_t j = 0; j < out.input.size(); ++j) out.input[j] += delta[j];
}

Gradients backward(const MlpModel& model, const ForwardTrace& trace,
                   std::span<const double> upstream_gradient) {
  Gradients grads = model.zero_gradients();
  backward_accumulate(model, trace, upstream_gradient, grads);
  return grads;
}

}  // namespace cdh
