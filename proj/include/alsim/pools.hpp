#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "alsim/rng.hpp"
#include "alsim/types.hpp"

namespace alsim {

/// Append-only training set D with per-class and per-source bookkeeping.
/// Examples present before the stream starts (Scenario 1 preloads) are
/// marked via mark_initial() and excluded from the human-cost accounting.
class TrainingSet {
 public:
  explicit TrainingSet(int class_count);

  /// Appends one example. Throws std::invalid_argument on a label outside
  /// 1..C (invalid-label error).
  void add(const LabeledExample& ex);

  /// Declares everything added so far as preloaded initial data.
  void mark_initial();

  long size() const { return static_cast<long>(examples_.size()); }
  int class_count() const { return class_count_; }
  const std::vector<LabeledExample>& examples() const { return examples_; }

  /// Per-class example counts; sums to size().
  const std::vector<long>& class_counts() const { return class_counts_; }

  long initial_size() const { return initial_size_; }
  /// Count of examples with the given source added after mark_initial().
  long streamed_count(LabelSource source) const;

 private:
  int class_count_;
  std::vector<LabeledExample> examples_;
  std::vector<long> class_counts_;
  long initial_size_ = 0;
  long source_counts_[3] = {0, 0, 0};
};

/// Unlabeled pool U. Items enter when pseudo-labeling fails and leave only
/// through draw_half(); the same instance identity may be held at most once.
class UnlabeledPool {
 public:
  /// Throws std::invalid_argument if the instance id is already pooled
  /// (duplicate-identity error).
  void add(const Instance& x);

  /// Removes and returns floor(size()/2) items sampled uniformly without
  /// replacement; the relative order of the remaining items is preserved.
  std::vector<Instance> draw_half(Rng& rng);

  long size() const { return static_cast<long>(items_.size()); }
  const std::vector<Instance>& items() const { return items_; }

 private:
  std::vector<Instance> items_;
  std::unordered_set<std::uint64_t> ids_;
};

}  // namespace alsim
