#pragma once

#include <string>
#include <vector>

namespace cdh {

// One problem/solution unit: a dense feature vector plus a numeric label.
struct Case {
  std::string id;
  std::vector<double> features;
  double solution = 0.0;
};

// Immutable ordered collection of cases sharing one feature dimension.
// Order is stable; the index is the tie-break key everywhere.
class CaseBase {
 public:
  CaseBase() = default;

  // Validates dimensions, id uniqueness and label finiteness.
  static CaseBase from_cases(std::vector<Case> cases, std::size_t feature_dim);

  std::size_t size() const { return cases_.size(); }
  bool empty() const { return cases_.empty(); }
  std::size_t feature_dim() const { return feature_dim_; }
  const Case& at(std::size_t i) const { return cases_.at(i); }
  const Case& operator[](std::size_t i) const { return cases_[i]; }
  const std::vector<Case>& cases() const { return cases_; }

  std::vector<double> solutions() const;

  // New case base with the given rows, in the given order.
  CaseBase subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<Case> cases_;
  std::size_t feature_dim_ = 0;
};

}  // namespace cdh
