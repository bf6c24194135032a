#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

namespace alsim {

/// Object class id, 1-based: valid labels are 1..C for a world with C classes.
using ClassLabel = int;

/// Who produced a training label. Identifier and Classifier are the two
/// pseudo-label paths; Human is the oracle of last resort and the only
/// source that counts toward annotation cost.
enum class LabelSource { Identifier, Classifier, Human };

inline const char* to_string(LabelSource s) {
  switch (s) {
    case LabelSource::Identifier: return "identifier";
    case LabelSource::Classifier: return "classifier";
    case LabelSource::Human: return "human";
  }
  return "?";
}

/// One captured view of a streamed object. `true_class` is latent ground
/// truth: the learner and the decision layer never read it directly, only
/// through the identifier detector and the human oracle.
struct Instance {
  Eigen::VectorXd features;
  ClassLabel true_class = 0;
  double view_angle = 0.0;          // radians in [0, 2*pi)
  bool identifier_visible = false;  // marker geometrically capturable here
  std::uint64_t id = 0;             // unique identity within a simulation
};

/// The series of views captured of one object plus the overhead shot.
/// All share one latent class: that shared-but-unknown label is the weak
/// label the pseudo-labeling paths exploit.
struct WeakBundle {
  std::vector<Instance> views;
  Instance overhead;

  ClassLabel true_class() const { return overhead.true_class; }
};

struct LabeledExample {
  Instance instance;
  ClassLabel label = 0;
  LabelSource source = LabelSource::Human;
};

}  // namespace alsim
