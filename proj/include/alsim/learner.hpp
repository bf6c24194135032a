#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>

#include "alsim/pools.hpp"
#include "alsim/rng.hpp"
#include "alsim/types.hpp"

namespace alsim {

/// Linear softmax classifier parameters: class scores are W x + b.
struct ModelParams {
  Eigen::MatrixXd weights;  // C x d
  Eigen::VectorXd biases;   // C

  int class_count() const { return static_cast<int>(weights.rows()); }
  int feature_dim() const { return static_cast<int>(weights.cols()); }
};

/// Frozen pre-trained parameters theta'; every training round restarts
/// from them, and all methods of one comparison share the same object.
using PretrainedParams = ModelParams;

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  int batch_size = 64;  // clipped to n(D)
  int n_iter = 100;
  long t1 = 1000;  // pseudo-label loss ramp start
  long t2 = 2000;  // pseudo-label loss ramp end
};

/// Affine class scores W x + b.
Eigen::VectorXd class_scores(const ModelParams& params, const Instance& x);

/// Softmax posterior over classes; entries in (0,1), summing to 1.
/// Throws std::invalid_argument on a feature-dimension mismatch.
Eigen::VectorXd predict_proba(const ModelParams& params, const Instance& x);

/// Shannon entropy -sum p log p in nats, with 0 log 0 := 0. Throws
/// std::invalid_argument when p is off the simplex by more than 1e-6.
double entropy(const Eigen::VectorXd& p);

/// Ramp weighting the classifier-pseudo-label loss term: 0 below t1, 1 from
/// t2 on, linear in between. t1 == t2 degenerates to a step at t1.
double alpha(long n_d, long t1, long t2);

/// Composite loss: mean cross-entropy over identifier/human-labeled
/// examples plus alpha(n_d) times the mean cross-entropy over
/// classifier-labeled ones. An empty group contributes zero.
double loss(const ModelParams& params, std::span<const LabeledExample> batch,
            long n_d, const TrainConfig& cfg);

struct LossGradient {
  Eigen::MatrixXd weights;
  Eigen::VectorXd biases;
};

/// Analytic gradient of loss() with respect to the parameters.
LossGradient loss_gradient(const ModelParams& params,
                           std::span<const LabeledExample> batch, long n_d,
                           const TrainConfig& cfg);

/// Momentum SGD from the pretrained parameters: n_iter steps on mini-batches
/// sampled uniformly with replacement from D. Throws std::invalid_argument
/// on an empty training set.
ModelParams train(const PretrainedParams& pretrained, const TrainingSet& d,
                  const TrainConfig& cfg, Rng& rng);

/// Small-magnitude deterministic initialization standing in for generic
/// pre-training; entries uniform in [-0.01, 0.01].
PretrainedParams pretrain(std::uint64_t seed, int class_count,
                          int feature_dim);

}  // namespace alsim
