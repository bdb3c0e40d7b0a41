#include "cdh/triplet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cdh {

void TripletParams::validate() const {
  if (positive_tolerance < 0.0) {
    throw std::invalid_argument("TripletParams: positive_tolerance must be >= 0");
  }
  if (negative_gap <= 0.0) throw std::invalid_argument("TripletParams: negative_gap must be > 0");
}

TripletSampler::TripletSampler(const CaseBase& cb, const TripletParams& params)
    : cb_(&cb), params_(params) {
  params_.validate();
  const std::size_t n = cb.size();
  by_solution_.resize(n);
  std::iota(by_solution_.begin(), by_solution_.end(), 0);
  std::sort(by_solution_.begin(), by_solution_.end(), [&](std::size_t a, std::size_t b) {
    if (cb[a].solution != cb[b].solution) return cb[a].solution < cb[b].solution;
    return a < b;
  });
  sorted_solutions_.reserve(n);
  rank_.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    sorted_solutions_.push_back(cb[by_solution_[pos]].solution);
    rank_[by_solution_[pos]] = pos;
  }
}

std::optional<Triplet> TripletSampler::sample(std::size_t anchor_index, Rng& rng) const {
  if (anchor_index >= cb_->size()) {
    throw std::invalid_argument("TripletSampler: anchor index out of range");
  }
  const double sol = (*cb_)[anchor_index].solution;
  const auto begin = sorted_solutions_.begin();
  const auto end = sorted_solutions_.end();

  // The binary-search keys (sol +- tolerance, sol +- gap) can land one ulp
  // off the exact predicate, so each boundary is adjusted against the
  // predicate itself; the walks cover at most one run of equal values.
  const std::size_t n = sorted_solutions_.size();
  const auto near = [&](std::size_t pos) {
    return std::abs(sorted_solutions_[pos] - sol) <= params_.positive_tolerance;
  };
  const auto far = [&](std::size_t pos) {
    return std::abs(sorted_solutions_[pos] - sol) >= params_.negative_gap;
  };

  // positives: solutions within the tolerance, anchor excluded
  std::size_t pos_lo = std::lower_bound(begin, end, sol - params_.positive_tolerance) - begin;
  std::size_t pos_hi = std::upper_bound(begin, end, sol + params_.positive_tolerance) - begin;
  while (pos_lo > 0 && near(pos_lo - 1)) --pos_lo;
  while (pos_lo < pos_hi && !near(pos_lo)) ++pos_lo;
  while (pos_hi < n && near(pos_hi)) ++pos_hi;
  while (pos_hi > pos_lo && !near(pos_hi - 1)) --pos_hi;
  const std::size_t positive_count = pos_hi - pos_lo - 1;  // anchor sits inside this window

  // negatives: solutions at least negative_gap away, on either side
  std::size_t below = std::upper_bound(begin, end, sol - params_.negative_gap) - begin;
  std::size_t above_begin = std::lower_bound(begin, end, sol + params_.negative_gap) - begin;
  while (below < n && sorted_solutions_[below] < sol && far(below)) ++below;
  while (below > 0 && !far(below - 1)) --below;
  while (above_begin > 0 && sorted_solutions_[above_begin - 1] > sol && far(above_begin - 1)) {
    --above_begin;
  }
  while (above_begin < n && !far(above_begin)) ++above_begin;
  const std::size_t negative_count = below + (n - above_begin);

  if (positive_count == 0 || negative_count == 0) return std::nullopt;

  const std::size_t anchor_rank = rank_[anchor_index];
  std::size_t p = pos_lo + rng.index(positive_count);
  if (p >= anchor_rank) ++p;

  const std::size_t r = rng.index(negative_count);
  const std::size_t q = r < below ? r : above_begin + (r - below);

  return Triplet{anchor_index, by_solution_[p], by_solution_[q]};
}

std::optional<Triplet> sample_triplet(const CaseBase& cb, std::size_t anchor_index, Rng& rng,
                                      const TripletParams& params) {
  return TripletSampler(cb, params).sample(anchor_index, rng);
}

}  // namespace cdh
