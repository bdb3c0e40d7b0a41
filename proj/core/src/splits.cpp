#include "cdh/splits.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "cdh/rng.hpp"

namespace cdh {

SplitPlan SplitPlan::normal(std::size_t fold_count) {
  SplitPlan plan;
  plan.setting = Setting::kNormal;
  plan.fold_count = fold_count;
  plan.validate();
  return plan;
}

SplitPlan SplitPlan::novel(std::size_t fold_count) {
  SplitPlan plan;
  plan.setting = Setting::kNovel;
  plan.fold_count = fold_count;
  plan.train_range = {20.0, 50.0, true, true};
  const double inf = std::numeric_limits<double>::infinity();
  plan.query_buckets = {
      {"<20", {-inf, 20.0, false, false}},
      {"50-70", {50.0, 70.0, false, true}},
      {">70", {70.0, inf, false, false}},
  };
  plan.validate();
  return plan;
}

double SplitPlan::train_fraction() const {
  const double k = static_cast<double>(fold_count);
  return setting == Setting::kNormal ? (k - 2.0) / k : (k - 1.0) / k;
}

double SplitPlan::validation_fraction() const {
  return 1.0 / static_cast<double>(fold_count);
}

double SplitPlan::test_fraction() const {
  return setting == Setting::kNormal ? 1.0 / static_cast<double>(fold_count) : 0.0;
}

void SplitPlan::validate() const {
  const std::size_t min_folds = setting == Setting::kNormal ? 3 : 2;
  if (fold_count < min_folds) {
    throw std::invalid_argument("SplitPlan: fold_count must be >= " + std::to_string(min_folds));
  }
  const double sum = train_fraction() + validation_fraction() + test_fraction();
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("SplitPlan: fractions must sum to 1");
  }
  if (setting == Setting::kNovel) {
    for (const auto& b : query_buckets) {
      // buckets must be disjoint from the training range
      if (train_range.contains(b.range.lo) && b.range.lo_inclusive) {
        throw std::invalid_argument("SplitPlan: bucket " + b.name + " overlaps the train range");
      }
    }
  }
}

namespace {

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  return idx;
}

std::size_t block_begin(std::size_t i, std::size_t n, std::size_t k) {
  return i * n / k;
}

}  // namespace

KFoldSplit kfold_split(const CaseBase& cb, const SplitPlan& plan, std::size_t fold,
                       std::uint64_t seed) {
  plan.validate();
  if (plan.setting != Setting::kNormal) {
    throw std::invalid_argument("kfold_split: plan setting must be normal");
  }
  if (fold >= plan.fold_count) {
    throw std::invalid_argument("kfold_split: fold " + std::to_string(fold) +
                                " out of range for " + std::to_string(plan.fold_count));
  }
  const std::size_t n = cb.size();
  const std::size_t k = plan.fold_count;
  if (n < k) throw std::invalid_argument("kfold_split: fewer cases than folds");

  const auto idx = shuffled_indices(n, seed);
  const std::size_t test_block = fold;
  const std::size_t val_block = (fold + 1) % k;

  std::vector<std::size_t> train, val, test;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t begin = block_begin(b, n, k);
    const std::size_t end = block_begin(b + 1, n, k);
    auto& dest = b == test_block ? test : (b == val_block ? val : train);
    for (std::size_t i = begin; i < end; ++i) dest.push_back(idx[i]);
  }
  return {cb.subset(train), cb.subset(val), cb.subset(test)};
}

NovelSplit novel_split(const CaseBase& cb, const SplitPlan& plan, std::size_t fold,
                       std::uint64_t seed) {
  plan.validate();
  if (plan.setting != Setting::kNovel) {
    throw std::invalid_argument("novel_split: plan setting must be novel");
  }
  if (fold >= plan.fold_count) {
    throw std::invalid_argument("novel_split: fold " + std::to_string(fold) +
                                " out of range for " + std::to_string(plan.fold_count));
  }

  std::vector<std::size_t> in_range;
  std::vector<std::vector<std::size_t>> buckets(plan.query_buckets.size());
  for (std::size_t i = 0; i < cb.size(); ++i) {
    const double sol = cb[i].solution;
    if (plan.train_range.contains(sol)) {
      in_range.push_back(i);
      continue;
    }
    for (std::size_t b = 0; b < plan.query_buckets.size(); ++b) {
      if (plan.query_buckets[b].range.contains(sol)) {
        buckets[b].push_back(i);
        break;
      }
    }
  }
  if (in_range.empty()) {
    throw std::invalid_argument("novel_split: no case falls in the training range");
  }

  // shuffle positions within the in-range subpopulation
  const auto order = shuffled_indices(in_range.size(), seed);
  const std::size_t m = in_range.size();
  const std::size_t k = plan.fold_count;
  std::vector<std::size_t> train, val;
  for (std::size_t b = 0; b < k; ++b) {
    const std::size_t begin = block_begin(b, m, k);
    const std::size_t end = block_begin(b + 1, m, k);
    auto& dest = b == fold ? val : train;
    for (std::size_t i = begin; i < end; ++i) dest.push_back(in_range[order[i]]);
  }

  NovelSplit split;
  split.train = cb.subset(train);
  split.validation = cb.subset(val);
  for (std::size_t b = 0; b < buckets.size(); ++b) {
    split.query_buckets.push_back(cb.subset(buckets[b]));
    split.bucket_names.push_back(plan.query_buckets[b].name);
    if (buckets[b].empty()) split.empty_buckets.push_back(b);
  }
  return split;
}

}  // namespace cdh
