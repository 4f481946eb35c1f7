#pragma once

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace ppc {

// Disjoint training splits, one per target, so that classifiers for
// different targets see different data.
struct SplitPlan {
  std::size_t n_items = 0;
  std::vector<std::vector<std::size_t>> assignments;  // target -> item indices
};

// Contiguous near-equal folds; the first n_items % n_targets folds get one
// extra item. Target t trains on fold t.
inline SplitPlan plan_targeted_bagging(std::size_t n_items, std::size_t n_targets) {
  if (n_targets < 1) throw std::invalid_argument("targeted bagging needs at least one target");
  if (n_items < n_targets) throw std::invalid_argument("targeted bagging needs at least one item per target");
  SplitPlan plan;
  plan.n_items = n_items;
  const std::size_t base = n_items / n_targets;
  const std::size_t extra = n_items % n_targets;
  std::size_t begin = 0;
  for (std::size_t t = 0; t < n_targets; ++t) {
    const std::size_t size = base + (t < extra ? 1 : 0);
    std::vector<std::size_t> fold(size);
    std::iota(fold.begin(), fold.end(), begin);
    plan.assignments.push_back(std::move(fold));
    begin += size;
  }
  return plan;
}

}  // namespace ppc
