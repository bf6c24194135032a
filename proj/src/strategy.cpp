#include "alsim/strategy.hpp"

#include <map>

namespace alsim {

bool should_query(const ModelParams& params, const Instance& overhead,
                  const StrategyState& state) {
  return entropy(predict_proba(params, overhead)) > state.delta_e;
}

std::size_t select_target(const ModelParams& params,
                          const WeakBundle& bundle) {
  std::size_t best = 0;
  double best_entropy = -1.0;
  for (std::size_t v = 0; v < bundle.views.size(); ++v) {
    const double e = entropy(predict_proba(params, bundle.views[v]));
    if (e > best_entropy) {
      best_entropy = e;
      best = v;
    }
  }
  return best;
}

std::optional<ClassLabel> identifier_vote(
    const std::vector<std::optional<ClassLabel>>& detections) {
  std::map<ClassLabel, int> freq;
  for (const auto& det : detections) {
    if (det) ++freq[*det];
  }
  if (freq.empty()) return std::nullopt;
  ClassLabel best = 0;
  int best_count = 0;
  for (const auto& [label, count] : freq) {  // ascending label id
    if (count > best_count) {
      best = label;
      best_count = count;
    }
  }
  return best;
}

PseudoLabelOutcome classifier_pseudo(const ModelParams& params,
                                     const WeakBundle& bundle,
                                     double delta_v) {
  double v_max = -1.0;
  ClassLabel v_label = 0;
  for (const Instance& view : bundle.views) {
    const Eigen::VectorXd p = predict_proba(params, view);
    int arg = 0;
    const double conf = p.maxCoeff(&arg);  // lowest class id on ties
    if (conf > v_max) {
      v_max = conf;
      v_label = arg + 1;
    }
  }
  PseudoLabelOutcome out;
  if (v_max > delta_v) {
    out.kind = PseudoLabelOutcome::Kind::Classifier;
    out.label = v_label;
    out.confidence = v_max;
  }
  return out;
}

EnsembleResult ensemble_label(
    const ModelParams& params, const WeakBundle& bundle,
    const std::vector<std::optional<ClassLabel>>& detections,
    double delta_v) {
  EnsembleResult result;
  result.target_index = select_target(params, bundle);
  if (auto voted = identifier_vote(detections)) {
    result.outcome.kind = PseudoLabelOutcome::Kind::Identifier;
    result.outcome.label = *voted;
    return result;
  }
  result.outcome = classifier_pseudo(params, bundle, delta_v);
  return result;
}

std::vector<LabeledExample> human_label(const std::vector<Instance>& drawn,
                                        long& cost_counter) {
  std::vector<LabeledExample> labeled;
  labeled.reserve(drawn.size());
  for (const Instance& x : drawn) {
    labeled.push_back({x, x.true_class, LabelSource::Human});
  }
  cost_counter += static_cast<long>(drawn.size());
  return labeled;
}

}  // namespace alsim
