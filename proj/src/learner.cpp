#include "alsim/learner.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace alsim {

Eigen::VectorXd class_scores(const ModelParams& params, const Instance& x) {
  if (x.features.size() != params.weights.cols()) {
    throw std::invalid_argument(
        "feature dimension " + std::to_string(x.features.size()) +
        " does not match model dimension " +
        std::to_string(params.weights.cols()));
  }
  return params.weights * x.features + params.biases;
}

Eigen::VectorXd predict_proba(const ModelParams& params, const Instance& x) {
  Eigen::VectorXd s = class_scores(params, x);
  const double m = s.maxCoeff();
  Eigen::VectorXd p = (s.array() - m).exp();
  p /= p.sum();
  return p;
}

double entropy(const Eigen::VectorXd& p) {
  double sum = 0.0;
  for (int c = 0; c < p.size(); ++c) {
    if (p[c] < -1e-6 || p[c] > 1.0 + 1e-6) {
      throw std::invalid_argument("invalid distribution: entry " +
                                  std::to_string(p[c]) + " outside [0, 1]");
    }
    sum += p[c];
  }
  if (std::fabs(sum - 1.0) > 1e-6) {
    throw std::invalid_argument("invalid distribution: entries sum to " +
                                std::to_string(sum));
  }
  double e = 0.0;
  for (int c = 0; c < p.size(); ++c) {
    if (p[c] > 0.0) e -= p[c] * std::log(p[c]);
  }
  return e;
}

double alpha(long n_d, long t1, long t2) {
  if (n_d < t1) return 0.0;
  if (n_d >= t2) return 1.0;
  return static_cast<double>(n_d - t1) / static_cast<double>(t2 - t1);
}

namespace {

double cross_entropy_from_scores(const Eigen::VectorXd& s, ClassLabel label) {
  const double m = s.maxCoeff();
  const double lse = m + std::log((s.array() - m).exp().sum());
  return lse - s[label - 1];
}

}  // namespace

double loss(const ModelParams& params, std::span<const LabeledExample> batch,
            long n_d, const TrainConfig& cfg) {
  double hard_sum = 0.0, pseudo_sum = 0.0;
  long hard_n = 0, pseudo_n = 0;
  for (const LabeledExample& ex : batch) {
    const double ce =
        cross_entropy_from_scores(class_scores(params, ex.instance), ex.label);
    if (ex.source == LabelSource::Classifier) {
      pseudo_sum += ce;
      ++pseudo_n;
    } else {
      hard_sum += ce;
      ++hard_n;
    }
  }
  double total = 0.0;
  if (hard_n > 0) total += hard_sum / hard_n;
  if (pseudo_n > 0) total += alpha(n_d, cfg.t1, cfg.t2) * pseudo_sum / pseudo_n;
  return total;
}

LossGradient loss_gradient(const ModelParams& params,
                           std::span<const LabeledExample> batch, long n_d,
                           const TrainConfig& cfg) {
  long hard_n = 0, pseudo_n = 0;
  for (const LabeledExample& ex : batch) {
    (ex.source == LabelSource::Classifier ? pseudo_n : hard_n) += 1;
  }
  const double a = alpha(n_d, cfg.t1, cfg.t2);

  LossGradient g{Eigen::MatrixXd::Zero(params.weights.rows(),
                                       params.weights.cols()),
                 Eigen::VectorXd::Zero(params.biases.size())};
  for (const LabeledExample& ex : batch) {
    Eigen::VectorXd ds = predict_proba(params, ex.instance);
    ds[ex.label - 1] -= 1.0;  // softmax CE: dL/ds = p - onehot
    const double w = ex.source == LabelSource::Classifier
                         ? (pseudo_n > 0 ? a / pseudo_n : 0.0)
                         : (hard_n > 0 ? 1.0 / hard_n : 0.0);
    if (w == 0.0) continue;
    g.weights.noalias() += w * ds * ex.instance.features.transpose();
    g.biases += w * ds;
  }
  return g;
}

ModelParams train(const PretrainedParams& pretrained, const TrainingSet& d,
                  const TrainConfig& cfg, Rng& rng) {
  if (d.size() == 0) {
    throw std::invalid_argument("cannot train on an empty training set");
  }
  ModelParams params = pretrained;
  Eigen::MatrixXd vel_w =
      Eigen::MatrixXd::Zero(params.weights.rows(), params.weights.cols());
  Eigen::VectorXd vel_b = Eigen::VectorXd::Zero(params.biases.size());

  const long n_d = d.size();
  const std::size_t batch_size = static_cast<std::size_t>(
      std::min<long>(cfg.batch_size, n_d));
  std::vector<LabeledExample> batch;
  batch.reserve(batch_size);

  for (int it = 0; it < cfg.n_iter; ++it) {
    batch.clear();
    for (std::size_t i = 0; i < batch_size; ++i) {
      batch.push_back(d.examples()[rng.uniform_index(d.examples().size())]);
    }
    const LossGradient g = loss_gradient(params, batch, n_d, cfg);
    vel_w = cfg.momentum * vel_w + g.weights;
    vel_b = cfg.momentum * vel_b + g.biases;
    params.weights -= cfg.learning_rate * vel_w;
    params.biases -= cfg.learning_rate * vel_b;
  }
  return params;
}

PretrainedParams pretrain(std::uint64_t seed, int class_count,
                          int feature_dim) {
  Rng rng(seed_mix(seed, seed_tag::kPretrain));
  PretrainedParams params{Eigen::MatrixXd(class_count, feature_dim),
                          Eigen::VectorXd(class_count)};
  for (int c = 0; c < class_count; ++c) {
    for (int j = 0; j < feature_dim; ++j) {
      params.weights(c, j) = rng.uniform(-0.01, 0.01);
    }
  }
  for (int c = 0; c < class_count; ++c) {
    params.biases[c] = rng.uniform(-0.01, 0.01);
  }
  return params;
}

}  // namespace alsim
