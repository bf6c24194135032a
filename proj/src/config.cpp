#include "alsim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "alsim/errors.hpp"

namespace alsim {

std::string to_string(Method m) {
  switch (m) {
    case Method::NonAlRandom: return "non_al_random";
    case Method::StandardAl: return "standard_al";
    case Method::RobotAssistedAl: return "robot_assisted_al";
  }
  return "?";
}

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::Base: return "base";
    case ScenarioKind::Scenario1: return "scenario1";
    case ScenarioKind::Scenario2: return "scenario2";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  if (name == "non_al_random") return Method::NonAlRandom;
  if (name == "standard_al") return Method::StandardAl;
  if (name == "robot_assisted_al") return Method::RobotAssistedAl;
  throw ConfigError("unknown method '" + name +
                    "' (expected non_al_random | standard_al | "
                    "robot_assisted_al)");
}

ScenarioKind parse_scenario(const std::string& name) {
  if (name == "base") return ScenarioKind::Base;
  if (name == "scenario1") return ScenarioKind::Scenario1;
  if (name == "scenario2") return ScenarioKind::Scenario2;
  throw ConfigError("unknown scenario '" + name +
                    "' (expected base | scenario1 | scenario2)");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected integer, got '" + value +
                      "'");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected unsigned integer, got '" +
                      value + "'");
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected number, got '" + value +
                      "'");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("key '" + key + "': expected true|false, got '" + value +
                    "'");
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "world.classes") cfg.world.classes = static_cast<int>(parse_long(key, value));
  else if (key == "world.dim") cfg.world.dim = static_cast<int>(parse_long(key, value));
  else if (key == "world.view_sigma") cfg.world.view_sigma = parse_double(key, value);
  else if (key == "world.noise_sigma") cfg.world.noise_sigma = parse_double(key, value);
  else if (key == "world.seed") cfg.world.seed = parse_u64(key, value);
  else if (key == "stream.scenario") cfg.stream.scenario = parse_scenario(value);
  else if (key == "stream.probabilities") {
    cfg.stream.probabilities.clear();
    for (const auto& part : split_list(value)) {
      cfg.stream.probabilities.push_back(parse_double(key, part));
    }
  }
  else if (key == "stream.visibility_halfwidth") cfg.stream.visibility_halfwidth = parse_double(key, value);
  else if (key == "stream.overhead_visible_prob") cfg.stream.overhead_visible_prob = parse_double(key, value);
  else if (key == "stream.miss_rate") cfg.stream.miss_rate = parse_double(key, value);
  else if (key == "stream.initial_per_class") cfg.stream.initial_per_class = static_cast<int>(parse_long(key, value));
  else if (key == "stream.initial_class_first") cfg.stream.initial_class_first = static_cast<int>(parse_long(key, value));
  else if (key == "stream.initial_class_last") cfg.stream.initial_class_last = static_cast<int>(parse_long(key, value));
  else if (key == "algorithm.n_sub") cfg.algorithm.n_sub = static_cast<int>(parse_long(key, value));
  else if (key == "algorithm.n_max") cfg.algorithm.n_max = parse_long(key, value);
  else if (key == "algorithm.n_train") cfg.algorithm.n_train = parse_long(key, value);
  else if (key == "algorithm.n_iter") cfg.algorithm.n_iter = static_cast<int>(parse_long(key, value));
  else if (key == "algorithm.delta_e") cfg.algorithm.delta_e = parse_double(key, value);
  else if (key == "algorithm.delta_e_step") cfg.algorithm.delta_e_step = parse_double(key, value);
  else if (key == "algorithm.delta_v") cfg.algorithm.delta_v = parse_double(key, value);
  else if (key == "algorithm.t1") cfg.algorithm.t1 = parse_long(key, value);
  else if (key == "algorithm.t2") cfg.algorithm.t2 = parse_long(key, value);
  else if (key == "algorithm.learning_rate") cfg.algorithm.learning_rate = parse_double(key, value);
  else if (key == "algorithm.momentum") cfg.algorithm.momentum = parse_double(key, value);
  else if (key == "algorithm.batch_size") cfg.algorithm.batch_size = static_cast<int>(parse_long(key, value));
  else if (key == "algorithm.anneal_baselines") cfg.algorithm.anneal_baselines = parse_bool(key, value);
  else if (key == "algorithm.initial_counts_toward_nmax") cfg.algorithm.initial_counts_toward_nmax = parse_bool(key, value);
  else if (key == "eval.test_per_class") cfg.eval.test_per_class = static_cast<int>(parse_long(key, value));
  else if (key == "run.methods") {
    cfg.run.methods.clear();
    for (const auto& part : split_list(value)) {
      cfg.run.methods.push_back(parse_method(part));
    }
  }
  else if (key == "run.seeds") {
    cfg.run.seeds.clear();
    for (const auto& part : split_list(value)) {
      cfg.run.seeds.push_back(parse_u64(key, part));
    }
  }
  else if (key == "run.output_dir") cfg.run.output_dir = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

void check_config(const RunConfig& cfg) {
  const auto fail = [](const std::string& what) {
    throw ConfigError("config constraint violated: " + what);
  };
  if (cfg.world.classes < 2) fail("world.classes must be >= 2");
  if (cfg.world.dim < 2) fail("world.dim must be >= 2");
  if (!(cfg.world.view_sigma >= 0.0) || !std::isfinite(cfg.world.view_sigma))
    fail("world.view_sigma must be finite and >= 0");
  if (!(cfg.world.noise_sigma >= 0.0) || !std::isfinite(cfg.world.noise_sigma))
    fail("world.noise_sigma must be finite and >= 0");
  if (!cfg.stream.probabilities.empty()) {
    if (cfg.stream.probabilities.size() !=
        static_cast<std::size_t>(cfg.world.classes))
      fail("stream.probabilities must list one entry per class");
    double sum = 0.0;
    for (double p : cfg.stream.probabilities) {
      if (p < 0.0 || p > 1.0) fail("stream.probabilities entries must be in [0, 1]");
      sum += p;
    }
    if (sum > 1.0 + 1e-12) fail("stream.probabilities must sum to <= 1");
  }
  if (!(cfg.stream.visibility_halfwidth > 0.0) ||
      cfg.stream.visibility_halfwidth > 3.14159265358979324)
    fail("stream.visibility_halfwidth must be in (0, pi]");
  if (cfg.stream.overhead_visible_prob < 0.0 ||
      cfg.stream.overhead_visible_prob > 1.0)
    fail("stream.overhead_visible_prob must be in [0, 1]");
  if (cfg.stream.miss_rate < 0.0 || cfg.stream.miss_rate >= 1.0)
    fail("stream.miss_rate must be in [0, 1)");
  if (cfg.stream.initial_per_class < 0)
    fail("stream.initial_per_class must be >= 0");
  if (cfg.stream.initial_class_first != 0 || cfg.stream.initial_class_last != 0) {
    if (cfg.stream.initial_class_first < 1 ||
        cfg.stream.initial_class_last > cfg.world.classes ||
        cfg.stream.initial_class_first > cfg.stream.initial_class_last)
      fail("stream.initial_class_first..last must be a range within 1..C");
  }
  if (cfg.algorithm.n_sub < 1) fail("algorithm.n_sub must be >= 1");
  if (cfg.algorithm.n_max < 1) fail("algorithm.n_max must be >= 1");
  if (cfg.algorithm.n_train < 1) fail("algorithm.n_train must be >= 1");
  if (cfg.algorithm.n_train > cfg.algorithm.n_max)
    fail("algorithm.n_train must be <= algorithm.n_max");
  if (cfg.algorithm.n_iter < 0) fail("algorithm.n_iter must be >= 0");
  if (cfg.algorithm.delta_e < 0.0) fail("algorithm.delta_e must be >= 0");
  if (cfg.algorithm.delta_e_step < 0.0)
    fail("algorithm.delta_e_step must be >= 0");
  if (!(cfg.algorithm.delta_v > 0.0 && cfg.algorithm.delta_v < 1.0))
    fail("algorithm.delta_v must be in (0, 1)");
  if (cfg.algorithm.t1 < 0) fail("algorithm.t1 must be >= 0");
  if (cfg.algorithm.t1 > cfg.algorithm.t2)
    fail("algorithm.t1 must be <= algorithm.t2");
  if (!(cfg.algorithm.learning_rate > 0.0))
    fail("algorithm.learning_rate must be > 0");
  if (cfg.algorithm.momentum < 0.0 || cfg.algorithm.momentum >= 1.0)
    fail("algorithm.momentum must be in [0, 1)");
  if (cfg.algorithm.batch_size < 1) fail("algorithm.batch_size must be >= 1");
  if (cfg.eval.test_per_class < 1) fail("eval.test_per_class must be >= 1");
  if (cfg.run.methods.empty()) fail("run.methods must name at least one method");
  if (cfg.run.seeds.empty()) fail("run.seeds must list at least one seed");
}

RunConfig default_config() { return RunConfig{}; }

RunConfig desk_config() {
  RunConfig cfg;
  cfg.preset = "desk";
  cfg.world.classes = 10;
  cfg.world.dim = 16;
  cfg.algorithm.n_sub = 8;
  cfg.algorithm.n_max = 400;
  cfg.algorithm.n_train = 20;
  cfg.algorithm.t1 = 100;
  cfg.algorithm.t2 = 200;
  cfg.eval.test_per_class = 20;
  // The linear desk classifier sees unit-scale features, so the paper's
  // image-scale learning rate leaves posteriors too flat for the entropy
  // gate and the delta_v cutoff to ever bite within N_iter steps.
  cfg.algorithm.learning_rate = 0.1;
  return cfg;
}

RunConfig validate_config(const std::filesystem::path& file, RunConfig base) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open config file: " + file.string());
  }
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(file.string() + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + line + "'");
    }
    apply_override(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  check_config(base);
  return base;
}

std::vector<std::string> RunConfig::echo_lines() const {
  std::vector<std::string> lines;
  const auto emit = [&lines](const std::string& key, const std::string& v) {
    lines.push_back(key + " = " + v);
  };
  emit("preset", preset);
  emit("world.classes", std::to_string(world.classes));
  emit("world.dim", std::to_string(world.dim));
  emit("world.view_sigma", format_double(world.view_sigma));
  emit("world.noise_sigma", format_double(world.noise_sigma));
  emit("world.seed", std::to_string(world.seed));
  emit("stream.scenario", to_string(stream.scenario));
  {
    std::vector<std::string> parts;
    for (double p : stream.probabilities) parts.push_back(format_double(p));
    emit("stream.probabilities",
         parts.empty() ? "(scenario default)" : join(parts));
  }
  emit("stream.visibility_halfwidth", format_double(stream.visibility_halfwidth));
  emit("stream.overhead_visible_prob", format_double(stream.overhead_visible_prob));
  emit("stream.miss_rate", format_double(stream.miss_rate));
  emit("stream.initial_per_class", std::to_string(stream.initial_per_class));
  emit("stream.initial_class_first", std::to_string(resolved_initial_first()));
  emit("stream.initial_class_last", std::to_string(resolved_initial_last()));
  emit("algorithm.n_sub", std::to_string(algorithm.n_sub));
  emit("algorithm.n_max", std::to_string(algorithm.n_max));
  emit("algorithm.n_train", std::to_string(algorithm.n_train));
  emit("algorithm.n_iter", std::to_string(algorithm.n_iter));
  emit("algorithm.delta_e", format_double(algorithm.delta_e));
  emit("algorithm.delta_e_step", format_double(algorithm.delta_e_step));
  emit("algorithm.delta_v", format_double(algorithm.delta_v));
  emit("algorithm.t1", std::to_string(algorithm.t1));
  emit("algorithm.t2", std::to_string(algorithm.t2));
  emit("algorithm.learning_rate", format_double(algorithm.learning_rate));
  emit("algorithm.momentum", format_double(algorithm.momentum));
  emit("algorithm.batch_size", std::to_string(algorithm.batch_size));
  emit("algorithm.anneal_baselines",
       algorithm.anneal_baselines ? "true" : "false");
  emit("algorithm.initial_counts_toward_nmax",
       algorithm.initial_counts_toward_nmax ? "true" : "false");
  emit("eval.test_per_class", std::to_string(eval.test_per_class));
  {
    std::vector<std::string> parts;
    for (Method m : run.methods) parts.push_back(to_string(m));
    emit("run.methods", join(parts));
  }
  {
    std::vector<std::string> parts;
    for (std::uint64_t s : run.seeds) parts.push_back(std::to_string(s));
    emit("run.seeds", join(parts));
  }
  emit("run.output_dir", run.output_dir);
  return lines;
}

}  // namespace alsim
