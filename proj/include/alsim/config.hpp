#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "alsim/learner.hpp"

namespace alsim {

enum class Method { NonAlRandom, StandardAl, RobotAssistedAl };
enum class ScenarioKind { Base, Scenario1, Scenario2 };

std::string to_string(Method m);
std::string to_string(ScenarioKind k);
/// Throws ConfigError on an unknown name.
Method parse_method(const std::string& name);
ScenarioKind parse_scenario(const std::string& name);

/// Fully resolved run parameters. Defaults are the paper-scale values; the
/// "desk" preset scales them down so a full comparison finishes in minutes.
struct RunConfig {
  struct WorldSection {
    int classes = 100;
    int dim = 32;
    double view_sigma = 0.35;
    double noise_sigma = 0.1;
    std::uint64_t seed = 1;
  } world;

  struct StreamSection {
    ScenarioKind scenario = ScenarioKind::Base;
    /// Optional explicit per-class arrival probabilities; empty means
    /// derive them from the scenario kind.
    std::vector<double> probabilities;
    double visibility_halfwidth = 0.7853981633974483;  // pi/4
    double overhead_visible_prob = 0.5;
    double miss_rate = 0.0;
    /// Scenario 1 preload: examples per class over the preloaded range.
    int initial_per_class = 30;
    /// Preloaded class range, 1-based inclusive; 0 means "upper half".
    int initial_class_first = 0;
    int initial_class_last = 0;
  } stream;

  struct AlgorithmSection {
    int n_sub = 80;
    long n_max = 4000;
    long n_train = 100;
    int n_iter = 100;
    double delta_e = 0.2;
    double delta_e_step = 0.01;
    double delta_v = 0.97;
    long t1 = 1000;
    long t2 = 2000;
    double learning_rate = 0.01;
    double momentum = 0.9;
    int batch_size = 64;
    bool anneal_baselines = true;
    bool initial_counts_toward_nmax = true;
  } algorithm;

  struct EvalSection {
    int test_per_class = 10;
  } eval;

  struct RunSection {
    std::vector<Method> methods = {Method::NonAlRandom, Method::StandardAl,
                                   Method::RobotAssistedAl};
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    std::string output_dir = "out";
  } run;

  std::string preset = "paper";

  TrainConfig train_config() const {
    return {algorithm.learning_rate, algorithm.momentum, algorithm.batch_size,
            algorithm.n_iter, algorithm.t1, algorithm.t2};
  }

  /// Resolved preloaded class range for Scenario 1.
  int resolved_initial_first() const {
    return stream.initial_class_first > 0 ? stream.initial_class_first
                                          : world.classes / 2 + 1;
  }
  int resolved_initial_last() const {
    return stream.initial_class_last > 0 ? stream.initial_class_last
                                         : world.classes;
  }

  /// One "key = value" line per field, in schema order: the self-describing
  /// metadata embedded in every CSV.
  std::vector<std::string> echo_lines() const;
};

/// Paper-scale defaults.
RunConfig default_config();

/// Small, fast configuration: C=10, d=16, N_sub=8, N_max=400, N_train=20,
/// T1=100, T2=200, test_per_class=20.
RunConfig desk_config();

/// Applies "key = value" overrides from a flat config file with dotted
/// section names; '#' starts a comment. Throws ConfigError on unknown keys,
/// malformed lines, or violated bounds; a missing file is an error, an
/// empty file leaves all defaults. Bounds are re-checked on the final
/// config either way.
RunConfig validate_config(const std::filesystem::path& file,
                          RunConfig base = default_config());

/// Applies one override; exposed for CLI flag handling.
void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value);

/// Re-checks every bound on an assembled config. Throws ConfigError naming
/// the field and the violated constraint.
void check_config(const RunConfig& cfg);

}  // namespace alsim
