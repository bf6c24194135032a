#include <filesystem>
#include <fstream>

#include "alsim/config.hpp"
#include "alsim/errors.hpp"
#include "doctest.h"

using namespace alsim;

namespace {

std::filesystem::path write_file(const std::string& name,
                                 const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream out(path);
  out << body;
  return path;
}

}  // namespace

TEST_CASE("an empty config file keeps every paper default") {
  const auto path = write_file("alsim_empty.cfg", "");
  const RunConfig cfg = validate_config(path);
  CHECK(cfg.world.classes == 100);
  CHECK(cfg.algorithm.n_sub == 80);
  CHECK(cfg.algorithm.n_max == 4000);
  CHECK(cfg.algorithm.n_train == 100);
  CHECK(cfg.algorithm.n_iter == 100);
  CHECK(cfg.algorithm.delta_e == 0.2);
  CHECK(cfg.algorithm.delta_e_step == 0.01);
  CHECK(cfg.algorithm.delta_v == 0.97);
  CHECK(cfg.algorithm.t1 == 1000);
  CHECK(cfg.algorithm.t2 == 2000);
  CHECK(cfg.algorithm.learning_rate == 0.01);
  CHECK(cfg.algorithm.momentum == 0.9);
  CHECK(cfg.algorithm.batch_size == 64);
  CHECK(cfg.eval.test_per_class == 10);
  CHECK(cfg.run.methods.size() == 3);
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  std::filesystem::remove(path);
}

TEST_CASE("the desk preset scales the run down to CI size") {
  const RunConfig cfg = desk_config();
  CHECK(cfg.world.classes == 10);
  CHECK(cfg.world.dim == 16);
  CHECK(cfg.algorithm.n_sub == 8);
  CHECK(cfg.algorithm.n_max == 400);
  CHECK(cfg.algorithm.n_train == 20);
  CHECK(cfg.algorithm.t1 == 100);
  CHECK(cfg.algorithm.t2 == 200);
  CHECK(cfg.eval.test_per_class == 20);
  check_config(cfg);  // the preset satisfies its own constraints
}

TEST_CASE("overrides parse sections, lists, and comments") {
  const auto path = write_file("alsim_over.cfg",
                               "# comment line\n"
                               "world.classes = 12   # trailing comment\n"
                               "stream.scenario = scenario2\n"
                               "\n"
                               "algorithm.delta_v = 0.9\n"
                               "run.methods = standard_al, robot_assisted_al\n"
                               "run.seeds = 7, 8\n");
  const RunConfig cfg = validate_config(path);
  CHECK(cfg.world.classes == 12);
  CHECK(cfg.stream.scenario == ScenarioKind::Scenario2);
  CHECK(cfg.algorithm.delta_v == 0.9);
  CHECK(cfg.run.methods ==
        std::vector<Method>{Method::StandardAl, Method::RobotAssistedAl});
  CHECK(cfg.run.seeds == std::vector<std::uint64_t>{7, 8});
  std::filesystem::remove(path);
}

TEST_CASE("unknown keys are named in the error") {
  const auto path = write_file("alsim_bad_key.cfg", "world.classs = 10\n");
  CHECK_THROWS_WITH_AS(validate_config(path),
                       doctest::Contains("world.classs"), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("constraint violations name the field") {
  const auto path = write_file("alsim_dv.cfg", "algorithm.delta_v = 1.5\n");
  CHECK_THROWS_WITH_AS(validate_config(path), doctest::Contains("delta_v"),
                       ConfigError);
  std::filesystem::remove(path);

  RunConfig cfg = default_config();
  cfg.algorithm.n_train = cfg.algorithm.n_max + 1;
  CHECK_THROWS_WITH_AS(check_config(cfg), doctest::Contains("n_train"),
                       ConfigError);

  cfg = default_config();
  cfg.algorithm.t1 = 3000;  // above t2
  CHECK_THROWS_AS(check_config(cfg), ConfigError);

  cfg = default_config();
  cfg.stream.probabilities.assign(5, 0.1);  // wrong length for C=100
  CHECK_THROWS_AS(check_config(cfg), ConfigError);

  cfg = default_config();
  cfg.stream.miss_rate = 1.0;
  CHECK_THROWS_AS(check_config(cfg), ConfigError);
}

TEST_CASE("malformed lines and missing files are errors") {
  const auto path = write_file("alsim_malformed.cfg", "just some words\n");
  CHECK_THROWS_AS(validate_config(path), ConfigError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(validate_config("/nonexistent/alsim.cfg"), ConfigError);
}

TEST_CASE("method and scenario names round-trip") {
  for (Method m : {Method::NonAlRandom, Method::StandardAl,
                   Method::RobotAssistedAl}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  for (ScenarioKind k : {ScenarioKind::Base, ScenarioKind::Scenario1,
                         ScenarioKind::Scenario2}) {
    CHECK(parse_scenario(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_method("bogus"), ConfigError);
  CHECK_THROWS_AS(parse_scenario("scenario3"), ConfigError);
}

TEST_CASE("the config echo lists every resolved field") {
  const RunConfig cfg = desk_config();
  const auto lines = cfg.echo_lines();
  auto has = [&lines](const std::string& needle) {
    for (const auto& line : lines) {
      if (line.find(needle) != std::string::npos) return true;
    }
    return false;
  };
  CHECK(has("preset = desk"));
  CHECK(has("world.classes = 10"));
  CHECK(has("algorithm.delta_v = 0.97"));
  CHECK(has("algorithm.anneal_baselines = true"));
  CHECK(has("run.methods = non_al_random,standard_al,robot_assisted_al"));
}
