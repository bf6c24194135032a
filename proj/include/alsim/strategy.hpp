#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "alsim/learner.hpp"
#include "alsim/types.hpp"

namespace alsim {

/// Episode-local decision thresholds. delta_e grows by delta_e_step once
/// per completed training round; delta_v stays fixed.
struct StrategyState {
  double delta_e = 0.2;
  double delta_e_step = 0.01;
  double delta_v = 0.97;

  void anneal() { delta_e += delta_e_step; }
};

/// Result of the two-path pseudo-labeling of one bundle.
struct PseudoLabelOutcome {
  enum class Kind { Identifier, Classifier, None };
  Kind kind = Kind::None;
  ClassLabel label = 0;
  double confidence = 0.0;  // max posterior, Classifier path only
};

/// Query gate: true iff the posterior entropy of the overhead shot strictly
/// exceeds delta_e.
bool should_query(const ModelParams& params, const Instance& overhead,
                  const StrategyState& state);

/// Index of the view with maximum posterior entropy (the target x*); the
/// overhead shot is not a candidate. Ties break to the lowest index.
std::size_t select_target(const ModelParams& params, const WeakBundle& bundle);

/// Majority vote over per-view detector outputs, ignoring misses; ties
/// break to the smallest label id. Empty when every view missed.
std::optional<ClassLabel> identifier_vote(
    const std::vector<std::optional<ClassLabel>>& detections);

/// Classifier path: v = max over views of the max posterior. Fires only
/// when v strictly exceeds delta_v; the label is the argmax class of the
/// view attaining v (ties: lowest view index, then lowest class id).
PseudoLabelOutcome classifier_pseudo(const ModelParams& params,
                                     const WeakBundle& bundle, double delta_v);

struct EnsembleResult {
  PseudoLabelOutcome outcome;
  std::size_t target_index = 0;
};

/// Two-path pseudo-labeling: the identifier vote takes precedence, the
/// classifier path is consulted only when every detection missed. The
/// resulting label attaches to the target view from select_target,
/// whichever view produced it.
EnsembleResult ensemble_label(
    const ModelParams& params, const WeakBundle& bundle,
    const std::vector<std::optional<ClassLabel>>& detections, double delta_v);

/// Perfect oracle: pairs each instance with its true class, source Human,
/// and charges one unit of annotation cost per instance.
std::vector<LabeledExample> human_label(const std::vector<Instance>& drawn,
                                        long& cost_counter);

}  // namespace alsim
