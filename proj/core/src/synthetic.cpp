#include "cdh/synthetic.hpp"

#include <cmath>
#include <stdexcept>

#include "cdh/rng.hpp"

namespace cdh {

void SynthConfig::validate() const {
  if (case_count < 1) throw std::invalid_argument("SynthConfig: case_count must be >= 1");
  if (feature_dim < 1) throw std::invalid_argument("SynthConfig: feature_dim must be >= 1");
  if (noise_sigma < 0.0) throw std::invalid_argument("SynthConfig: noise_sigma must be >= 0");
  if (label_sd <= 0.0) throw std::invalid_argument("SynthConfig: label_sd must be > 0");
  if (label_hi <= label_lo) throw std::invalid_argument("SynthConfig: label range is empty");
  if (freq_lo <= 0.0 || freq_hi < freq_lo) {
    throw std::invalid_argument("SynthConfig: frequencies must satisfy 0 < lo <= hi");
  }
  if (amp_lo < 0.0 || amp_hi < amp_lo || amp_hi > 1.0) {
    throw std::invalid_argument("SynthConfig: amplitudes must satisfy 0 <= lo <= hi <= 1");
  }
  if (amp_power <= 0.0) throw std::invalid_argument("SynthConfig: amp_power must be > 0");
}

CaseBase generate_synthetic(const SynthConfig& config) {
  config.validate();

  const std::size_t dim = config.feature_dim;
  std::vector<double> freq(dim), phase(dim), amp(dim);
  {
    Rng spectrum(derive_seed(config.seed, "synth-spectrum"));
    for (std::size_t j = 0; j < dim; ++j) {
      freq[j] = spectrum.uniform(config.freq_lo, config.freq_hi);
      phase[j] = spectrum.uniform(0.0, 6.283185307179586476925286766559);
      amp[j] = config.amp_lo +
               (config.amp_hi - config.amp_lo) * std::pow(spectrum.uniform(), config.amp_power);
    }
  }

  Rng labels(derive_seed(config.seed, "synth-labels"));
  Rng noise(derive_seed(config.seed, "synth-noise"));

  std::vector<Case> cases;
  cases.reserve(config.case_count);
  for (std::size_t i = 0; i < config.case_count; ++i) {
    // truncated normal by rejection
    double t = 0.0;
    do {
      t = config.label_mean + config.label_sd * labels.normal();
    } while (t < config.label_lo || t > config.label_hi);

    Case c;
    c.id = "case-" + std::to_string(i);
    c.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      double f = amp[j] * std::sin(freq[j] * t + phase[j]);
      if (config.noise_sigma > 0.0) f += config.noise_sigma * noise.normal();
      c.features[j] = f;
    }
    c.solution = std::round(t * 10.0) / 10.0;
    cases.push_back(std::move(c));
  }
  return CaseBase::from_cases(std::move(cases), dim);
}

}  // namespace cdh
