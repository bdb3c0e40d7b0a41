#pragma once

#include <string>

#include "cdh/experiment.hpp"

namespace cdh {

// Sectioned key = value text. Unknown sections or keys are rejected with
// the line number. Keys not present keep the built-in defaults.
//
//   [experiment] setting backend folds seed output threads
//   [data]       file | synth_cases synth_dim synth_noise synth_seed
//                label_mean label_sd label_lo label_hi
//                frequency amplitude amp_power   (ranges as lo,hi)
//   [network]    hidden dropout embedding_dim siamese_hidden
//   [training]   epochs learning_rate batch_size
//   [retrieval]  positive_tolerance negative_gap margin
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);

}  // namespace cdh
