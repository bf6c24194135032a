#include <cmath>
#include <stdexcept>
#include <vector>

#include "alsim/learner.hpp"
#include "doctest.h"

using namespace alsim;

namespace {

Instance make_instance(const Eigen::VectorXd& features, ClassLabel cls = 1) {
  Instance x;
  x.features = features;
  x.true_class = cls;
  return x;
}

ModelParams random_params(int classes, int dim, std::uint64_t seed,
                          double scale = 1.0) {
  Rng rng(seed);
  ModelParams p{Eigen::MatrixXd(classes, dim), Eigen::VectorXd(classes)};
  for (int c = 0; c < classes; ++c) {
    for (int j = 0; j < dim; ++j) p.weights(c, j) = scale * rng.normal();
    p.biases[c] = scale * rng.normal();
  }
  return p;
}

Eigen::VectorXd random_simplex(int n, Rng& rng) {
  Eigen::VectorXd p(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    p[i] = -std::log(1.0 - rng.uniform());
    sum += p[i];
  }
  return p / sum;
}

std::vector<LabeledExample> random_batch(int classes, int dim, int size,
                                         Rng& rng) {
  std::vector<LabeledExample> batch;
  for (int i = 0; i < size; ++i) {
    Eigen::VectorXd f(dim);
    for (int j = 0; j < dim; ++j) f[j] = rng.normal();
    const ClassLabel label = 1 + static_cast<int>(rng.uniform_index(classes));
    const LabelSource source =
        rng.uniform() < 0.4 ? LabelSource::Classifier
                            : (rng.uniform() < 0.5 ? LabelSource::Human
                                                   : LabelSource::Identifier);
    batch.push_back({make_instance(f, label), label, source});
  }
  return batch;
}

// central-difference gradient of loss(); the independent oracle for the
// analytic gradient
LossGradient fd_gradient(const ModelParams& params,
                         std::span<const LabeledExample> batch, long n_d,
                         const TrainConfig& cfg, double h = 1e-5) {
  LossGradient g{Eigen::MatrixXd(params.weights.rows(), params.weights.cols()),
                 Eigen::VectorXd(params.biases.size())};
  ModelParams probe = params;
  for (int c = 0; c < params.weights.rows(); ++c) {
    for (int j = 0; j < params.weights.cols(); ++j) {
      probe.weights(c, j) = params.weights(c, j) + h;
      const double up = loss(probe, batch, n_d, cfg);
      probe.weights(c, j) = params.weights(c, j) - h;
      const double down = loss(probe, batch, n_d, cfg);
      probe.weights(c, j) = params.weights(c, j);
      g.weights(c, j) = (up - down) / (2.0 * h);
    }
  }
  for (int c = 0; c < params.biases.size(); ++c) {
    probe.biases[c] = params.biases[c] + h;
    const double up = loss(probe, batch, n_d, cfg);
    probe.biases[c] = params.biases[c] - h;
    const double down = loss(probe, batch, n_d, cfg);
    probe.biases[c] = params.biases[c];
    g.biases[c] = (up - down) / (2.0 * h);
  }
  return g;
}

double gradient_rel_error(const LossGradient& a, const LossGradient& b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  diff += (a.weights - b.weights).squaredNorm() +
          (a.biases - b.biases).squaredNorm();
  na += a.weights.squaredNorm() + a.biases.squaredNorm();
  nb += b.weights.squaredNorm() + b.biases.squaredNorm();
  return std::sqrt(diff) / std::max({std::sqrt(na), std::sqrt(nb), 1e-12});
}

}  // namespace

TEST_CASE("zero parameters give the uniform posterior") {
  const int classes = 10;
  ModelParams zeros{Eigen::MatrixXd::Zero(classes, 4),
                    Eigen::VectorXd::Zero(classes)};
  const auto p = predict_proba(zeros, make_instance(Eigen::VectorXd::Ones(4)));
  for (int c = 0; c < classes; ++c) {
    CHECK(p[c] == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("posterior sums to one and is shift invariant") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelParams params = random_params(7, 5, 100 + trial);
    Eigen::VectorXd f(5);
    for (int j = 0; j < 5; ++j) f[j] = rng.normal();
    const Instance x = make_instance(f);
    const Eigen::VectorXd p = predict_proba(params, x);
    CHECK(std::fabs(p.sum() - 1.0) < 1e-9);
    CHECK(p.minCoeff() > 0.0);

    ModelParams shifted = params;
    shifted.biases.array() += 3.7;  // constant on every class score
    const Eigen::VectorXd q = predict_proba(shifted, x);
    CHECK((p - q).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("posterior rejects mismatched feature dimension") {
  const ModelParams params = random_params(3, 4, 1);
  CHECK_THROWS_AS(
      predict_proba(params, make_instance(Eigen::VectorXd::Zero(5))),
      std::invalid_argument);
}

TEST_CASE("entropy matches direct evaluation") {
  SUBCASE("uniform distribution attains log C") {
    const int classes = 100;
    const Eigen::VectorXd uniform =
        Eigen::VectorXd::Constant(classes, 1.0 / classes);
    CHECK(entropy(uniform) == doctest::Approx(std::log(100.0)).epsilon(1e-9));
    CHECK(entropy(uniform) == doctest::Approx(4.605170185988091).epsilon(1e-9));
  }

  SUBCASE("one-hot distribution has zero entropy") {
    Eigen::VectorXd onehot = Eigen::VectorXd::Zero(6);
    onehot[2] = 1.0;
    CHECK(entropy(onehot) == 0.0);
  }

  SUBCASE("worked example") {
    Eigen::VectorXd p(3);
    p << 0.7, 0.2, 0.1;
    const double direct =
        -(0.7 * std::log(0.7) + 0.2 * std::log(0.2) + 0.1 * std::log(0.1));
    CHECK(entropy(p) == doctest::Approx(direct).epsilon(1e-12));
    CHECK(entropy(p) == doctest::Approx(0.8018185525).epsilon(1e-9));
  }

  SUBCASE("off-simplex input is rejected") {
    Eigen::VectorXd bad(2);
    bad << 0.6, 0.6;
    CHECK_THROWS_AS(entropy(bad), std::invalid_argument);
    bad << 1.2, -0.2;
    CHECK_THROWS_AS(entropy(bad), std::invalid_argument);
  }

  SUBCASE("bounds hold on random distributions") {
    Rng rng(55);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + static_cast<int>(rng.uniform_index(19));
      const double e = entropy(random_simplex(n, rng));
      CHECK(e >= 0.0);
      CHECK(e <= std::log(static_cast<double>(n)) + 1e-12);
    }
  }
}

TEST_CASE("pseudo-label ramp follows the three branches") {
  CHECK(alpha(999, 1000, 2000) == 0.0);
  CHECK(alpha(1000, 1000, 2000) == 0.0);
  CHECK(alpha(1500, 1000, 2000) == 0.5);
  CHECK(alpha(2000, 1000, 2000) == 1.0);
  CHECK(alpha(5000, 1000, 2000) == 1.0);

  SUBCASE("degenerate ramp is a step") {
    CHECK(alpha(99, 100, 100) == 0.0);
    CHECK(alpha(100, 100, 100) == 1.0);
  }

  SUBCASE("non-decreasing and continuous on the ramp") {
    double prev = -1.0;
    for (long n = 0; n <= 2500; n += 10) {
      const double a = alpha(n, 1000, 2000);
      CHECK(a >= prev);
      prev = a;
    }
    CHECK(alpha(1001, 1000, 2000) == doctest::Approx(0.001));
    CHECK(alpha(1999, 1000, 2000) == doctest::Approx(0.999));
  }
}

TEST_CASE("loss splits by label source with the alpha weight") {
  const TrainConfig cfg{0.01, 0.9, 64, 100, 1000, 2000};
  const ModelParams params = random_params(4, 3, 77);
  Rng rng(78);

  auto ce = [&](const LabeledExample& ex) {
    return -std::log(predict_proba(params, ex.instance)[ex.label - 1]);
  };

  SUBCASE("human-only batch is the plain mean cross-entropy") {
    auto batch = random_batch(4, 3, 6, rng);
    for (auto& ex : batch) ex.source = LabelSource::Human;
    double expect = 0.0;
    for (const auto& ex : batch) expect += ce(ex);
    expect /= batch.size();
    CHECK(loss(params, batch, 150, cfg) == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("classifier-only batch vanishes below T1") {
    auto batch = random_batch(4, 3, 5, rng);
    for (auto& ex : batch) ex.source = LabelSource::Classifier;
    CHECK(loss(params, batch, 999, cfg) == 0.0);
  }

  SUBCASE("mixed batch at the ramp midpoint") {
    auto batch = random_batch(4, 3, 8, rng);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i].source = i < 3 ? LabelSource::Classifier : LabelSource::Human;
    }
    double hard = 0.0, pseudo = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      (i < 3 ? pseudo : hard) += ce(batch[i]);
    }
    const double expect = hard / 5.0 + 0.5 * pseudo / 3.0;
    CHECK(loss(params, batch, 1500, cfg) ==
          doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("decomposition: mixed equals hard part plus classifier part") {
    for (int trial = 0; trial < 20; ++trial) {
      const auto batch = random_batch(4, 3, 10, rng);
      std::vector<LabeledExample> hard, pseudo;
      for (const auto& ex : batch) {
        (ex.source == LabelSource::Classifier ? pseudo : hard).push_back(ex);
      }
      const long n_d = 500 + static_cast<long>(rng.uniform_index(2000));
      double expect = 0.0;
      if (!hard.empty()) expect += loss(params, hard, n_d, cfg);
      if (!pseudo.empty()) expect += loss(params, pseudo, n_d, cfg);
      CHECK(loss(params, batch, n_d, cfg) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("analytic gradient matches central differences") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int classes = 2 + static_cast<int>(rng.uniform_index(4));  // <= 5
    const int dim = 2 + static_cast<int>(rng.uniform_index(7));      // <= 8
    const int size = 1 + static_cast<int>(rng.uniform_index(8));
    const ModelParams params = random_params(classes, dim, 3000 + trial, 0.5);
    const auto batch = random_batch(classes, dim, size, rng);
    const long n_d = static_cast<long>(rng.uniform_index(2500));
    const TrainConfig cfg{0.01, 0.9, 64, 100, 1000, 2000};
    const LossGradient analytic = loss_gradient(params, batch, n_d, cfg);
    const LossGradient numeric = fd_gradient(params, batch, n_d, cfg);
    CHECK(gradient_rel_error(analytic, numeric) <= 1e-4);
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("training runs momentum SGD from the pretrained parameters") {
  TrainingSet d(2);
  Rng data_rng(4);
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd f(2);
    const int cls = i % 2;
    f << (cls == 0 ? 1.0 : -1.0) + 0.1 * data_rng.normal(),
        0.1 * data_rng.normal();
    Instance x = make_instance(f, cls + 1);
    x.id = i;
    d.add({x, cls + 1, LabelSource::Human});
  }
  const PretrainedParams pre = pretrain(9, 2, 2);

  SUBCASE("zero iterations return the pretrained parameters unchanged") {
    TrainConfig cfg;
    cfg.n_iter = 0;
    Rng rng(1);
    const ModelParams out = train(pre, d, cfg, rng);
    CHECK((out.weights.array() == pre.weights.array()).all());
    CHECK((out.biases.array() == pre.biases.array()).all());
  }

  SUBCASE("separable data is fit perfectly") {
    TrainConfig cfg;
    cfg.n_iter = 500;
    Rng rng(2);
    const ModelParams out = train(pre, d, cfg, rng);
    CHECK(out.weights.allFinite());
    CHECK(out.biases.allFinite());
    long correct = 0;
    for (const auto& ex : d.examples()) {
      int arg = 0;
      predict_proba(out, ex.instance).maxCoeff(&arg);
      if (arg + 1 == ex.label) ++correct;
    }
    CHECK(correct == d.size());
  }

  SUBCASE("identical seeds give bit-identical parameters") {
    TrainConfig cfg;
    Rng rng_a(77), rng_b(77);
    const ModelParams a = train(pre, d, cfg, rng_a);
    const ModelParams b = train(pre, d, cfg, rng_b);
    CHECK((a.weights.array() == b.weights.array()).all());
    CHECK((a.biases.array() == b.biases.array()).all());
  }

  SUBCASE("an empty training set is rejected") {
    TrainingSet empty(2);
    TrainConfig cfg;
    Rng rng(1);
    CHECK_THROWS_AS(train(pre, empty, cfg, rng), std::invalid_argument);
  }
}

TEST_CASE("pretraining is deterministic and small") {
  const PretrainedParams a = pretrain(5, 8, 6);
  const PretrainedParams b = pretrain(5, 8, 6);
  CHECK((a.weights.array() == b.weights.array()).all());
  CHECK((a.biases.array() == b.biases.array()).all());
  CHECK(a.weights.cwiseAbs().maxCoeff() <= 0.1);
  CHECK(a.biases.cwiseAbs().maxCoeff() <= 0.1);

  const PretrainedParams c = pretrain(6, 8, 6);
  CHECK_FALSE((a.weights.array() == c.weights.array()).all());
}
