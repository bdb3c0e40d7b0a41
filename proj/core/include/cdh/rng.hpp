#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace cdh {

// Seeded random source with fully specified output. The engine is
// std::mt19937_64 (pinned by the standard); the distributions are
// implemented here because the standard leaves theirs unspecified,
// and reports must be byte-identical across runs of the same build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // uniform double in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller, one value per call (spare cached)
  double normal();

  // uniform integer in [0, n)
  std::size_t index(std::size_t n);

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[index(i)]);
    }
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives an independent stream seed from a master seed and a label,
// so that one component's draws never shift another's.
std::uint64_t derive_seed(std::uint64_t master, std::string_view component);
std::uint64_t derive_seed(std::uint64_t master, std::string_view component,
                          std::uint64_t index);

}  // namespace cdh
