#include "alsim/runner.hpp"

#include <cmath>
#include <string>

#include "alsim/errors.hpp"
#include "alsim/metrics.hpp"
#include "alsim/pools.hpp"
#include "alsim/strategy.hpp"

namespace alsim {

namespace {

std::uint64_t method_tag(Method m) {
  return static_cast<std::uint64_t>(m) + 1;
}

std::vector<double> scenario_probabilities(ScenarioKind kind, int classes) {
  std::vector<double> p(classes, 1.0 / classes);
  if (kind == ScenarioKind::Scenario2) {
    // Rare lower half, common upper half, 1:5, summing to 1 for even C.
    const int split = classes / 2;
    for (int c = 0; c < classes; ++c) {
      p[c] = (c < split ? 1.0 : 5.0) / (3.0 * classes);
    }
  }
  return p;
}

StreamConfig stream_config_for(const ScenarioSpec& scenario,
                               const RunConfig& cfg) {
  return {scenario.flow_probabilities, cfg.stream.visibility_halfwidth,
          cfg.stream.overhead_visible_prob, cfg.stream.miss_rate};
}

void preload_initial(TrainingSet& d, const World& world,
                     const ScenarioSpec& scenario, const StreamConfig& stream,
                     std::uint64_t preload_seed) {
  if (scenario.initial_per_class <= 0 || scenario.initial_class_first <= 0) {
    d.mark_initial();
    return;
  }
  Rng rng(preload_seed);
  for (int c = scenario.initial_class_first; c <= scenario.initial_class_last;
       ++c) {
    for (int i = 0; i < scenario.initial_per_class; ++i) {
      ObjectEvent ev{c, rng.uniform(0.0, 6.283185307179586), rng.next_u64()};
      const double angle = rng.uniform(-kSweepArc / 2.0, kSweepArc / 2.0);
      LabeledExample ex{render_view(world, ev, angle, /*slot=*/1, stream),
                        static_cast<ClassLabel>(c), LabelSource::Human};
      d.add(ex);
    }
  }
  d.mark_initial();
}

RoundRecord snapshot(int round, long human_cost, const TrainingSet& d,
                     double test_accuracy, double delta_e, long u_size) {
  const PseudoLabelStats stats = pseudo_stats(d);
  RoundRecord rec;
  rec.round = round;
  rec.human_cost = human_cost;
  rec.n_d = d.size();
  rec.class_counts = d.class_counts();
  rec.test_accuracy = test_accuracy;
  rec.delta_e = delta_e;
  rec.identifier_count = stats.identifier_count;
  rec.classifier_count = d.streamed_count(LabelSource::Classifier);
  rec.human_count = stats.human_count;
  rec.initial_count = d.initial_size();
  rec.classifier_correct = stats.classifier_correct;
  rec.u_size = u_size;
  return rec;
}

}  // namespace

ScenarioSpec make_scenario(ScenarioKind kind, const RunConfig& cfg) {
  ScenarioSpec spec;
  spec.kind = kind;
  spec.flow_probabilities =
      cfg.stream.probabilities.empty()
          ? scenario_probabilities(kind, cfg.world.classes)
          : cfg.stream.probabilities;
  if (kind == ScenarioKind::Scenario1) {
    spec.initial_per_class = cfg.stream.initial_per_class;
    spec.initial_class_first = cfg.resolved_initial_first();
    spec.initial_class_last = cfg.resolved_initial_last();
  }
  return spec;
}

World make_world_from(const RunConfig& cfg) {
  return make_world(cfg.world.classes, cfg.world.dim, cfg.world.view_sigma,
                    cfg.world.noise_sigma, cfg.world.seed);
}

std::uint64_t pretrain_seed(const World& world) { return world.seed; }

std::uint64_t testset_seed(const World& world) {
  return seed_mix(world.seed, seed_tag::kTestset);
}

std::vector<Instance> build_testset(const World& world, int per_class,
                                    std::uint64_t seed) {
  if (per_class < 1) {
    throw std::invalid_argument("test set needs per_class >= 1");
  }
  StreamConfig geometry;  // only the visibility flag depends on this
  Rng rng(seed);
  std::vector<Instance> testset;
  testset.reserve(static_cast<std::size_t>(per_class) * world.class_count);
  for (int c = 1; c <= world.class_count; ++c) {
    for (int i = 0; i < per_class; ++i) {
      ObjectEvent ev{c, rng.uniform(0.0, 6.283185307179586), rng.next_u64()};
      const double angle = rng.uniform(-kSweepArc / 2.0, kSweepArc / 2.0);
      testset.push_back(render_view(world, ev, angle, /*slot=*/1, geometry));
    }
  }
  return testset;
}

RunLog run_episode(const World& world, const ScenarioSpec& scenario,
                   Method method, const RunConfig& cfg, std::uint64_t seed) {
  const PretrainedParams pretrained =
      pretrain(pretrain_seed(world), world.class_count, world.feature_dim);
  const std::vector<Instance> testset =
      build_testset(world, cfg.eval.test_per_class, testset_seed(world));
  return run_episode(world, scenario, method, cfg, seed, pretrained, testset);
}

RunLog run_episode(const World& world, const ScenarioSpec& scenario,
                   Method method, const RunConfig& cfg, std::uint64_t seed,
                   const PretrainedParams& pretrained,
                   const std::vector<Instance>& testset) {
  const StreamConfig stream = stream_config_for(scenario, cfg);
  const TrainConfig train_cfg = cfg.train_config();
  const int n_sub = cfg.algorithm.n_sub;

  RunLog log;
  log.method = method;
  log.scenario = scenario.kind;
  log.seed = seed;
  log.config_echo = cfg.echo_lines();

  TrainingSet d(world.class_count);
  preload_initial(d, world, scenario, stream,
                  seed_mix(world.seed, seed_tag::kPreload));
  UnlabeledPool u;
  ModelParams theta = pretrained;
  StrategyState state{cfg.algorithm.delta_e, cfg.algorithm.delta_e_step,
                      cfg.algorithm.delta_v};
  long human_cost = 0;
  int rounds = 0;

  const long n_goal = cfg.algorithm.initial_counts_toward_nmax
                          ? cfg.algorithm.n_max
                          : cfg.algorithm.n_max + d.initial_size();
  const long n_train = cfg.algorithm.n_train;
  long last_train_nd = d.size();

  double sum_p = 0.0;
  for (double p : scenario.flow_probabilities) sum_p += p;
  // Stall guard: 10x the expected ticks needed if every arrival were kept.
  const long max_ticks =
      sum_p > 0.0 ? static_cast<long>(
                        std::ceil(10.0 * cfg.algorithm.n_max / sum_p))
                  : 0;

  Rng stream_rng(seed_mix(world.seed, seed_tag::kStream, seed));
  Rng method_rng(seed_mix(world.seed, seed_tag::kMethod, method_tag(method),
                          seed));

  const bool anneals =
      method == Method::RobotAssistedAl ||
      (method == Method::StandardAl && cfg.algorithm.anneal_baselines);

  long tick = 0;
  while (d.size() < n_goal) {
    if (tick >= max_ticks) {
      throw StallError("episode stalled: n(D)=" + std::to_string(d.size()) +
                       " after " + std::to_string(tick) +
                       " ticks (goal " + std::to_string(n_goal) + ")");
    }
    ++tick;

    if (auto ev = next_object(stream, stream_rng)) {
      switch (method) {
        case Method::NonAlRandom: {
          const WeakBundle bundle = capture_bundle(world, *ev, n_sub, stream);
          const std::size_t pick = method_rng.uniform_index(bundle.views.size());
          for (const LabeledExample& ex :
               human_label({bundle.views[pick]}, human_cost)) {
            d.add(ex);
          }
          break;
        }
        case Method::StandardAl: {
          const Instance overhead = capture_overhead(world, *ev, stream);
          if (!should_query(theta, overhead, state)) break;
          if (rounds == 0) log.queried_pre_train.push_back({tick, ev->pose_seed});
          const WeakBundle bundle = capture_bundle(world, *ev, n_sub, stream);
          const std::size_t pick = method_rng.uniform_index(bundle.views.size());
          for (const LabeledExample& ex :
               human_label({bundle.views[pick]}, human_cost)) {
            d.add(ex);
          }
          break;
        }
        case Method::RobotAssistedAl: {
          const Instance overhead = capture_overhead(world, *ev, stream);
          if (!should_query(theta, overhead, state)) break;
          if (rounds == 0) log.queried_pre_train.push_back({tick, ev->pose_seed});
          const WeakBundle bundle = capture_bundle(world, *ev, n_sub, stream);
          Rng detector_rng(seed_mix(world.seed, seed_tag::kDetector,
                                    ev->pose_seed));
          std::vector<std::optional<ClassLabel>> detections;
          detections.reserve(bundle.views.size());
          for (const Instance& view : bundle.views) {
            detections.push_back(
                detect_identifier(view, stream.miss_rate, detector_rng));
          }
          const EnsembleResult res =
              ensemble_label(theta, bundle, detections, state.delta_v);
          const Instance& target = bundle.views[res.target_index];
          switch (res.outcome.kind) {
            case PseudoLabelOutcome::Kind::Identifier:
              d.add({target, res.outcome.label, LabelSource::Identifier});
              break;
            case PseudoLabelOutcome::Kind::Classifier:
              d.add({target, res.outcome.label, LabelSource::Classifier});
              break;
            case PseudoLabelOutcome::Kind::None:
              u.add(target);
              break;
          }
          break;
        }
      }
    }

    // Train when n(D) reaches a fresh multiple of N_train. Multiples jumped
    // over by the pre-training human-labeling burst are not revisited; the
    // next exact multiple re-arms the trigger.
    if (d.size() != last_train_nd && d.size() % n_train == 0) {
      if (method == Method::RobotAssistedAl) {
        for (const LabeledExample& ex :
             human_label(u.draw_half(method_rng), human_cost)) {
          d.add(ex);
        }
      }
      Rng train_rng(seed_mix(world.seed, seed_tag::kTrain,
                             seed_mix(seed, method_tag(method)),
                             static_cast<std::uint64_t>(rounds)));
      theta = train(pretrained, d, train_cfg, train_rng);
      if (log.first_train_tick < 0) log.first_train_tick = tick;
      ++rounds;
      if (anneals) state.anneal();
      log.records.push_back(snapshot(rounds, human_cost, d,
                                     accuracy(theta, testset), state.delta_e,
                                     u.size()));
      last_train_nd = d.size();
    }
  }

  log.ticks = tick;
  log.records.push_back(snapshot(rounds + 1, human_cost, d,
                                 accuracy(theta, testset), state.delta_e,
                                 u.size()));
  log.example_ids.reserve(d.examples().size());
  for (const LabeledExample& ex : d.examples()) {
    log.example_ids.push_back(ex.instance.id);
  }
  return log;
}

std::vector<RunLog> run_comparison(const World& world,
                                   const ScenarioSpec& scenario,
                                   const std::vector<Method>& methods,
                                   const std::vector<std::uint64_t>& seeds,
                                   const RunConfig& cfg) {
  const PretrainedParams pretrained =
      pretrain(pretrain_seed(world), world.class_count, world.feature_dim);
  const std::vector<Instance> testset =
      build_testset(world, cfg.eval.test_per_class, testset_seed(world));
  std::vector<RunLog> logs;
  logs.reserve(methods.size() * seeds.size());
  for (Method m : methods) {
    for (std::uint64_t s : seeds) {
      logs.push_back(
          run_episode(world, scenario, m, cfg, s, pretrained, testset));
    }
  }
  return logs;
}

}  // namespace alsim
