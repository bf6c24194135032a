#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "alsim/config.hpp"

namespace alsim {

/// State snapshot taken after a training round (and once more at episode
/// end). Counts are cumulative; identifier/classifier/human count only
/// examples added after the stream started, so
/// identifier + classifier + human + initial == n_d always holds.
struct RoundRecord {
  int round = 0;  // 1-based; the final snapshot gets round = rounds + 1
  long human_cost = 0;
  long n_d = 0;
  std::vector<long> class_counts;
  double test_accuracy = 0.0;
  double delta_e = 0.0;
  long identifier_count = 0;
  long classifier_count = 0;
  long human_count = 0;
  long initial_count = 0;
  long classifier_correct = 0;
  long u_size = 0;
};

/// A gate pass observed before the first training round; used for the
/// cross-method determinism check.
struct QueryEvent {
  long tick = 0;
  std::uint64_t event_id = 0;  // the object's pose seed
};

/// Everything one episode produced.
struct RunLog {
  Method method = Method::RobotAssistedAl;
  ScenarioKind scenario = ScenarioKind::Base;
  std::uint64_t seed = 0;
  std::vector<RoundRecord> records;
  std::vector<QueryEvent> queried_pre_train;
  /// Instance ids of every example in D, append order (preloads first).
  std::vector<std::uint64_t> example_ids;
  long first_train_tick = -1;  // -1 when no training round ever fired
  long ticks = 0;
  std::vector<std::string> config_echo;
};

}  // namespace alsim
