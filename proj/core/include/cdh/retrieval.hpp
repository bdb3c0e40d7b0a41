#pragma once

#include <optional>
#include <span>
#include <string>

#include "cdh/casebase.hpp"

namespace cdh {

// Sum of coordinate-wise absolute differences.
double l1_distance(std::span<const double> x, std::span<const double> y);

struct RetrievalResult {
  std::size_t case_index = 0;
  double distance = 0.0;
  double retrieved_solution = 0.0;
};

// Brute-force 1-nearest-neighbor under L1 over raw features. Ties break to
// the lowest index. `exclude_id` removes one case (retrieval from a base
// containing the query itself).
RetrievalResult retrieve_l1(std::span<const double> query_features, const CaseBase& cb,
                            const std::optional<std::string>& exclude_id = std::nullopt);

}  // namespace cdh
