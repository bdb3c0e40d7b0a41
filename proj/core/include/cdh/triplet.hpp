#pragma once

#include <optional>

#include "cdh/casebase.hpp"
#include "cdh/rng.hpp"

namespace cdh {

// Indices into one case base. For every sampled triplet:
// |sol(positive) - sol(anchor)| <= positive_tolerance and
// |sol(negative) - sol(anchor)| >= negative_gap.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
};

struct TripletParams {
  double positive_tolerance = 0.5;  // "same age" for real-valued labels
  double negative_gap = 10.0;

  void validate() const;
};

// Uniform pool sampling over a solution-sorted index: positives are the
// cases within the tolerance of the anchor's solution (anchor excluded),
// negatives the cases at least `negative_gap` away. Returns nothing when
// either pool is empty (the caller counts skips).
class TripletSampler {
 public:
  TripletSampler(const CaseBase& cb, const TripletParams& params);

  std::optional<Triplet> sample(std::size_t anchor_index, Rng& rng) const;

  const TripletParams& params() const { return params_; }

 private:
  const CaseBase* cb_;
  TripletParams params_;
  std::vector<std::size_t> by_solution_;  // case indices sorted by solution
  std::vector<double> sorted_solutions_;
  std::vector<std::size_t> rank_;  // position of case i in by_solution_
};

// One-off convenience around a sampler; tests and small callers.
std::optional<Triplet> sample_triplet(const CaseBase& cb, std::size_t anchor_index, Rng& rng,
                                      const TripletParams& params = {});

}  // namespace cdh
