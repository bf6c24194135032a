#pragma once

#include <cstdint>
#include <vector>

#include "alsim/config.hpp"
#include "alsim/runlog.hpp"
#include "alsim/world.hpp"

namespace alsim {

/// Concrete stream recipe for one scenario: arrival probabilities plus the
/// Scenario-1 preload description (empty range for the other scenarios).
struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::Base;
  std::vector<double> flow_probabilities;
  int initial_per_class = 0;
  int initial_class_first = 0;  // 1-based inclusive; 0 = no preload
  int initial_class_last = 0;
};

/// Derives the scenario recipe from the config: uniform arrivals for Base
/// and Scenario 1, the 1:5 split (rare lower half) for Scenario 2, with
/// explicit stream.probabilities taking precedence when given.
ScenarioSpec make_scenario(ScenarioKind kind, const RunConfig& cfg);

/// Fixed class-balanced evaluation set drawn from the same view model as
/// the stream but from a disjoint seed substream.
std::vector<Instance> build_testset(const World& world, int per_class,
                                    std::uint64_t seed);

/// Runs one full episode of the chosen method under the given scenario.
/// The pretrained parameters and the test set are derived from the world
/// seed, so every method and episode seed shares them. Throws StallError
/// when the stream fails to fill D within 10x the expected tick budget.
RunLog run_episode(const World& world, const ScenarioSpec& scenario,
                   Method method, const RunConfig& cfg, std::uint64_t seed);

/// Same episode with the shared fixtures supplied by the caller.
RunLog run_episode(const World& world, const ScenarioSpec& scenario,
                   Method method, const RunConfig& cfg, std::uint64_t seed,
                   const PretrainedParams& pretrained,
                   const std::vector<Instance>& testset);

/// Cartesian product of methods x seeds, all sharing the world, the
/// pretrained parameters, and the test set.
std::vector<RunLog> run_comparison(const World& world,
                                   const ScenarioSpec& scenario,
                                   const std::vector<Method>& methods,
                                   const std::vector<std::uint64_t>& seeds,
                                   const RunConfig& cfg);

/// The world described by the config's world section.
World make_world_from(const RunConfig& cfg);

/// Shared-fixture seeds derived from the world seed.
std::uint64_t pretrain_seed(const World& world);
std::uint64_t testset_seed(const World& world);

}  // namespace alsim
