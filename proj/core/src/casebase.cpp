#include "cdh/casebase.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace cdh {

CaseBase CaseBase::from_cases(std::vector<Case> cases, std::size_t feature_dim) {
  if (feature_dim == 0) throw std::invalid_argument("CaseBase: feature_dim must be >= 1");
  std::unordered_set<std::string> ids;
  ids.reserve(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const Case& c = cases[i];
    if (c.features.size() != feature_dim) {
      throw std::invalid_argument("CaseBase: case " + c.id + " has " +
                                  std::to_string(c.features.size()) + " features, expected " +
                                  std::to_string(feature_dim));
    }
    if (!std::isfinite(c.solution)) {
      throw std::invalid_argument("CaseBase: case " + c.id + " has a non-finite solution");
    }
    if (!ids.insert(c.id).second) {
      throw std::invalid_argument("CaseBase: duplicate id " + c.id);
    }
  }
  CaseBase cb;
  cb.cases_ = std::move(cases);
  cb.feature_dim_ = feature_dim;
  return cb;
}

std::vector<double> CaseBase::solutions() const {
  std::vector<double> out;
  out.reserve(cases_.size());
  for (const auto& c : cases_) out.push_back(c.solution);
  return out;
}

CaseBase CaseBase::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Case> picked;
  picked.reserve(indices.size());
  for (std::size_t i : indices) picked.push_back(cases_.at(i));
  CaseBase cb;
  cb.cases_ = std::move(picked);
  cb.feature_dim_ = feature_dim_;
  return cb;
}

}  // namespace cdh
