#include "cdh/retrieval.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cdh {

double l1_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("l1_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::abs(x[i] - y[i]);
  return sum;
}

RetrievalResult retrieve_l1(std::span<const double> query_features, const CaseBase& cb,
                            const std::optional<std::string>& exclude_id) {
  if (query_features.size() != cb.feature_dim()) {
    throw std::invalid_argument("retrieve_l1: query dimension mismatch");
  }
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = cb.size();
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const Case& c = cb[i];
    if (exclude_id && c.id == *exclude_id) continue;
    const double d = l1_distance(query_features, c.features);
    if (d < best) {
      best = d;
      best_index = i;
    }
  }
  if (best_index == cb.size()) {
    throw std::invalid_argument("retrieve_l1: case base is empty after exclusion");
  }
  return {best_index, best, cb[best_index].solution};
}

}  // namespace cdh
