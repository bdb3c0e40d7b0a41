#include "cdh/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cdh {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& origin, std::size_t line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    fail(origin, line, "not a number: '" + v + "'");
  }
}

std::uint64_t to_u64(const std::string& v, const std::string& origin, std::size_t line) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) {
    fail(origin, line, "not a non-negative integer: '" + v + "'");
  }
  return out;
}

std::vector<double> to_doubles(const std::string& v, const std::string& origin,
                               std::size_t line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), origin, line));
  return out;
}

std::pair<double, double> to_range(const std::string& v, const std::string& origin,
                                   std::size_t line) {
  const auto parts = to_doubles(v, origin, line);
  if (parts.size() != 2) fail(origin, line, "expected lo,hi");
  return {parts[0], parts[1]};
}

std::vector<std::size_t> to_widths(const std::string& v, const std::string& origin,
                                   std::size_t line) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<std::size_t>(to_u64(trim(item), origin, line)));
  }
  if (out.empty()) fail(origin, line, "expected a comma-separated width list");
  return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line = trim(line.substr(0, hash));
    }
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, lineno, "unterminated section header");
      section = line.substr(1, line.size() - 2);
      if (section != "experiment" && section != "data" && section != "network" &&
          section != "training" && section != "retrieval") {
        fail(origin, lineno, "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail(origin, lineno, "key outside of any section");
    if (value.empty()) fail(origin, lineno, "empty value for " + key);

    if (section == "experiment") {
      if (key == "setting") {
        if (value == "normal") {
          config.setting = Setting::kNormal;
        } else if (value == "novel") {
          config.setting = Setting::kNovel;
        } else {
          fail(origin, lineno, "setting must be normal or novel");
        }
      } else if (key == "backend") {
        if (value == "l1") {
          config.backend = RetrievalBackend::kL1;
        } else if (value == "siamese") {
          config.backend = RetrievalBackend::kSiamese;
        } else {
          fail(origin, lineno, "backend must be l1 or siamese");
        }
      } else if (key == "folds") {
        config.fold_count = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else if (key == "seed") {
        config.seed = to_u64(value, origin, lineno);
      } else if (key == "output") {
        config.output_path = value;
      } else if (key == "threads") {
        config.threads = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [experiment]");
      }
    } else if (section == "data") {
      if (key == "file") {
        config.data_file = value;
      } else if (key == "synth_cases") {
        config.synth.case_count = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else if (key == "synth_dim") {
        config.synth.feature_dim = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else if (key == "synth_noise") {
        config.synth.noise_sigma = to_double(value, origin, lineno);
      } else if (key == "synth_seed") {
        config.synth.seed = to_u64(value, origin, lineno);
      } else if (key == "label_mean") {
        config.synth.label_mean = to_double(value, origin, lineno);
      } else if (key == "label_sd") {
        config.synth.label_sd = to_double(value, origin, lineno);
      } else if (key == "label_lo") {
        config.synth.label_lo = to_double(value, origin, lineno);
      } else if (key == "label_hi") {
        config.synth.label_hi = to_double(value, origin, lineno);
      } else if (key == "frequency") {
        std::tie(config.synth.freq_lo, config.synth.freq_hi) = to_range(value, origin, lineno);
      } else if (key == "amplitude") {
        std::tie(config.synth.amp_lo, config.synth.amp_hi) = to_range(value, origin, lineno);
      } else if (key == "amp_power") {
        config.synth.amp_power = to_double(value, origin, lineno);
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [data]");
      }
    } else if (section == "network") {
      if (key == "hidden") {
        config.inner_hidden = to_widths(value, origin, lineno);
      } else if (key == "dropout") {
        config.dropout = to_double(value, origin, lineno);
      } else if (key == "embedding_dim") {
        config.embedding_dim = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else if (key == "siamese_hidden") {
        config.siamese_hidden = to_widths(value, origin, lineno);
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [network]");
      }
    } else if (section == "training") {
      if (key == "epochs") {
        config.training.epochs = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else if (key == "learning_rate") {
        config.training.learning_rate = to_double(value, origin, lineno);
      } else if (key == "batch_size") {
        config.training.batch_size = static_cast<std::size_t>(to_u64(value, origin, lineno));
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [training]");
      }
    } else {  // retrieval
      if (key == "positive_tolerance") {
        config.triplet.positive_tolerance = to_double(value, origin, lineno);
      } else if (key == "negative_gap") {
        config.triplet.negative_gap = to_double(value, origin, lineno);
      } else if (key == "margin") {
        config.triplet_loss.margin = to_double(value, origin, lineno);
      } else {
        fail(origin, lineno, "unknown key '" + key + "' in [retrieval]");
      }
    }
  }
  return config;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

}  // namespace cdh
