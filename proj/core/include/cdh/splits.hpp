#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cdh/casebase.hpp"

namespace cdh {

// Closed, open or half-open label interval.
struct LabelRange {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool lo_inclusive = true;
  bool hi_inclusive = true;

  bool contains(double v) const {
    if (v < lo || (v == lo && !lo_inclusive)) return false;
    if (v > hi || (v == hi && !hi_inclusive)) return false;
    return true;
  }
};

struct QueryBucket {
  std::string name;
  LabelRange range;
};

enum class Setting { kNormal, kNovel };

struct SplitPlan {
  Setting setting = Setting::kNormal;
  std::size_t fold_count = 10;
  // train range and buckets apply to the novel setting only
  LabelRange train_range{20.0, 50.0, true, true};
  std::vector<QueryBucket> query_buckets;

  // normal: test and validation blocks are 1/fold_count each
  static SplitPlan normal(std::size_t fold_count = 10);
  // novel: train range [20,50]; buckets <20, (50,70], >70
  static SplitPlan novel(std::size_t fold_count = 10);

  // fractions implied by the block rule: (train, validation, test)
  double train_fraction() const;
  double validation_fraction() const;
  double test_fraction() const;

  void validate() const;
};

struct KFoldSplit {
  CaseBase train;
  CaseBase validation;
  CaseBase test;
};

// One seeded shuffle partitions the cases into fold_count contiguous
// blocks; block k is the test set of fold k, block (k+1) mod fold_count the
// validation set, the rest the training set. Block i spans
// [floor(i*n/k), floor((i+1)*n/k)), so block sizes differ by at most one
// and the remainder is spread evenly.
KFoldSplit kfold_split(const CaseBase& cb, const SplitPlan& plan, std::size_t fold,
                       std::uint64_t seed);

struct NovelSplit {
  CaseBase train;
  CaseBase validation;
  std::vector<CaseBase> query_buckets;  // aligned with plan.query_buckets
  std::vector<std::string> bucket_names;
  std::vector<std::size_t> empty_buckets;  // indices of buckets with no case
};

// In-range cases (seeded shuffle) are split across fold_count blocks with
// block `fold` as validation and the rest as training; out-of-range cases
// are routed to the first bucket whose predicate matches, in case-base
// order.
NovelSplit novel_split(const CaseBase& cb, const SplitPlan& plan, std::size_t fold,
                       std::uint64_t seed);

}  // namespace cdh
