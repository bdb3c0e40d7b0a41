#pragma once

#include <cstdint>

#include "cdh/casebase.hpp"

namespace cdh {

// Synthetic feature-vector generator. Labels follow a truncated normal;
// feature j is a_j * sin(w_j * t + phi_j) plus Gaussian sensor noise.
// Frequencies are radians per label unit. Amplitudes are drawn as
// lo + (hi - lo) * u^amp_power, so a few dimensions carry most of the
// signal and the rest sit near the noise floor, the way deep-feature
// spectra behave.
struct SynthConfig {
  std::size_t case_count = 2000;
  std::size_t feature_dim = 32;
  double label_mean = 35.0;
  double label_sd = 15.0;
  double label_lo = 1.0;
  double label_hi = 100.0;
  double noise_sigma = 0.05;
  std::uint64_t seed = 0;
  double freq_lo = 0.03;
  double freq_hi = 0.08;
  double amp_lo = 0.005;
  double amp_hi = 0.15;
  double amp_power = 2.0;

  void validate() const;
  double max_frequency() const { return freq_hi; }
};

// Deterministic in the seed: the spectrum (frequencies, phases,
// amplitudes) is drawn once, then labels and noise per case. Solutions are
// the drawn label rounded to one decimal.
CaseBase generate_synthetic(const SynthConfig& config);

}  // namespace cdh
