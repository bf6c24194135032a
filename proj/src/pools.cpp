#include "alsim/pools.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace alsim {

TrainingSet::TrainingSet(int class_count)
    : class_count_(class_count), class_counts_(class_count, 0) {}

void TrainingSet::add(const LabeledExample& ex) {
  if (ex.label < 1 || ex.label > class_count_) {
    throw std::invalid_argument("invalid label " + std::to_string(ex.label) +
                                ": must be in 1.." +
                                std::to_string(class_count_));
  }
  examples_.push_back(ex);
  ++class_counts_[ex.label - 1];
  ++source_counts_[static_cast<int>(ex.source)];
}

void TrainingSet::mark_initial() {
  initial_size_ = size();
  source_counts_[0] = source_counts_[1] = source_counts_[2] = 0;
}

long TrainingSet::streamed_count(LabelSource source) const {
  return source_counts_[static_cast<int>(source)];
}

void UnlabeledPool::add(const Instance& x) {
  if (!ids_.insert(x.id).second) {
    throw std::invalid_argument("duplicate instance identity " +
                                std::to_string(x.id) + " in unlabeled pool");
  }
  items_.push_back(x);
}

std::vector<Instance> UnlabeledPool::draw_half(Rng& rng) {
  const std::size_t n = items_.size();
  const std::size_t k = n / 2;
  std::vector<Instance> drawn;
  drawn.reserve(k);
  if (k == 0) return drawn;

  // Partial Fisher-Yates over an index array picks k distinct positions;
  // a stable erase keeps the survivors in their original order.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(idx[i], idx[j]);
  }

  std::vector<bool> taken(n, false);
  for (std::size_t i = 0; i < k; ++i) {
    drawn.push_back(items_[idx[i]]);
    taken[idx[i]] = true;
    ids_.erase(items_[idx[i]].id);
  }

  std::vector<Instance> remaining;
  remaining.reserve(n - k);
  for (std::size_t i = 0; i < n; ++i) {
    if (!taken[i]) remaining.push_back(std::move(items_[i]));
  }
  items_ = std::move(remaining);
  return drawn;
}

}  // namespace alsim
