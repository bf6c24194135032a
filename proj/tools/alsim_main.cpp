#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "alsim/config.hpp"
#include "alsim/errors.hpp"
#include "alsim/metrics.hpp"
#include "alsim/runner.hpp"

namespace {

using namespace alsim;

struct CommonOpts {
  std::string config_file;
  std::string preset = "paper";
  std::string output_dir;
};

RunConfig load_config(const CommonOpts& opts) {
  RunConfig cfg = opts.preset == "desk" ? desk_config() : default_config();
  if (!opts.config_file.empty()) {
    cfg = validate_config(opts.config_file, cfg);
  }
  if (!opts.output_dir.empty()) {
    cfg.run.output_dir = opts.output_dir;
  }
  check_config(cfg);
  return cfg;
}

std::filesystem::path episode_path(const RunConfig& cfg, Method method,
                                   ScenarioKind scenario, std::uint64_t seed) {
  return std::filesystem::path(cfg.run.output_dir) /
         (to_string(method) + "_" + to_string(scenario) + "_seed" +
          std::to_string(seed) + ".csv");
}

void ensure_output_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.run.output_dir, ec);
  if (ec) {
    throw IoError("cannot create output directory: " + cfg.run.output_dir);
  }
}

int cmd_run(const CommonOpts& opts, const std::string& method_name,
            const std::string& scenario_name, std::optional<std::uint64_t> seed) {
  RunConfig cfg = load_config(opts);
  const Method method =
      method_name.empty() ? Method::RobotAssistedAl : parse_method(method_name);
  const ScenarioKind kind = scenario_name.empty()
                                ? cfg.stream.scenario
                                : parse_scenario(scenario_name);
  cfg.stream.scenario = kind;
  const std::uint64_t episode_seed = seed ? *seed : cfg.run.seeds.front();

  const World world = make_world_from(cfg);
  const ScenarioSpec scenario = make_scenario(kind, cfg);
  const RunLog log = run_episode(world, scenario, method, cfg, episode_seed);

  ensure_output_dir(cfg);
  const auto path = episode_path(cfg, method, kind, episode_seed);
  write_csv({log}, path);
  const RoundRecord& last = log.records.back();
  std::cout << "wrote " << path.string() << "  (rounds=" << log.records.size() - 1
            << ", n_D=" << last.n_d << ", human_cost=" << last.human_cost
            << ", accuracy=" << format_sig(last.test_accuracy, 6) << ")\n";
  return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& scenario_name,
              int jobs) {
  RunConfig cfg = load_config(opts);
  const ScenarioKind kind = scenario_name.empty()
                                ? cfg.stream.scenario
                                : parse_scenario(scenario_name);
  cfg.stream.scenario = kind;

  const World world = make_world_from(cfg);
  const ScenarioSpec scenario = make_scenario(kind, cfg);
  const PretrainedParams pretrained =
      pretrain(pretrain_seed(world), world.class_count, world.feature_dim);
  const std::vector<Instance> testset =
      build_testset(world, cfg.eval.test_per_class, testset_seed(world));

  struct Job {
    Method method;
    std::uint64_t seed;
  };
  std::vector<Job> todo;
  for (Method m : cfg.run.methods) {
    for (std::uint64_t s : cfg.run.seeds) todo.push_back({m, s});
  }

  std::vector<RunLog> logs(todo.size());
  std::vector<std::string> failures(todo.size());
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(todo.size())));
  auto work = [&]() {
    for (std::size_t i = next.fetch_add(1); i < todo.size();
         i = next.fetch_add(1)) {
      try {
        logs[i] = run_episode(world, scenario, todo[i].method, cfg,
                              todo[i].seed, pretrained, testset);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (!failures[i].empty()) {
      throw StallError("episode " + to_string(todo[i].method) + " seed " +
                       std::to_string(todo[i].seed) + " failed: " + failures[i]);
    }
  }

  ensure_output_dir(cfg);
  for (std::size_t i = 0; i < todo.size(); ++i) {
    write_csv({logs[i]}, episode_path(cfg, todo[i].method, kind, todo[i].seed));
  }
  std::cout << "wrote " << todo.size() << " run logs to " << cfg.run.output_dir
            << "\n";
  return 0;
}

int cmd_report(const std::string& output_dir, double target_fraction) {
  const std::vector<CsvRow> rows = read_csv_dir(output_dir);

  std::map<std::pair<std::string, std::string>, std::vector<CsvRow>> groups;
  for (const CsvRow& r : rows) groups[{r.scenario, r.method}].push_back(r);

  std::vector<GroupSummary> summaries = summarize(rows);

  // Target accuracy per scenario: a fraction of Standard AL's final mean.
  std::map<std::string, double> target;
  for (const GroupSummary& s : summaries) {
    if (s.method == to_string(Method::StandardAl)) {
      target[s.scenario] = target_fraction * s.final_accuracy_mean;
    }
  }
  for (GroupSummary& s : summaries) {
    auto it = target.find(s.scenario);
    if (it != target.end()) {
      s.cost_to_target = cost_to_reach(groups[{s.scenario, s.method}], it->second);
    }
  }

  std::map<std::string, double> standard_cost;
  for (const GroupSummary& s : summaries) {
    if (s.method == to_string(Method::StandardAl) && s.cost_to_target) {
      standard_cost[s.scenario] = *s.cost_to_target;
    }
  }

  std::printf("%-10s %-18s %4s %11s %9s %9s %12s %11s %14s\n", "scenario",
              "method", "runs", "final_acc", "acc_sd", "cost@end",
              "pseudo_ratio", "pseudo_acc", "cost_to_target");
  std::ofstream out(std::filesystem::path(output_dir) / "summary.csv",
                    std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + output_dir + "/summary.csv");
  }
  out << "scenario,method,runs,final_accuracy_mean,final_accuracy_sd,"
         "final_cost_mean,final_nd_mean,gap_low_high_mean,pseudo_ratio_mean,"
         "pseudo_accuracy_mean,cost_to_target,cost_ratio_vs_standard\n";
  for (const GroupSummary& s : summaries) {
    const std::string ctt =
        s.cost_to_target ? format_sig(*s.cost_to_target, 6) : "";
    std::string ratio;
    if (s.cost_to_target && standard_cost.count(s.scenario) &&
        standard_cost[s.scenario] > 0) {
      ratio = format_sig(*s.cost_to_target / standard_cost[s.scenario], 6);
    }
    std::printf("%-10s %-18s %4d %11s %9s %9s %12s %11s %14s\n",
                s.scenario.c_str(), s.method.c_str(), s.runs,
                format_sig(s.final_accuracy_mean, 4).c_str(),
                format_sig(s.final_accuracy_sd, 4).c_str(),
                format_sig(s.final_cost_mean, 6).c_str(),
                format_sig(s.pseudo_ratio_mean, 4).c_str(),
                format_sig(s.pseudo_accuracy_mean, 4).c_str(), ctt.c_str());
    out << s.scenario << ',' << s.method << ',' << s.runs << ','
        << format_sig(s.final_accuracy_mean, 6) << ','
        << format_sig(s.final_accuracy_sd, 6) << ','
        << format_sig(s.final_cost_mean, 6) << ','
        << format_sig(s.final_nd_mean, 6) << ','
        << format_sig(s.gap_low_high_mean, 6) << ','
        << format_sig(s.pseudo_ratio_mean, 6) << ','
        << format_sig(s.pseudo_accuracy_mean, 6) << ',' << ctt << ',' << ratio
        << "\n";
  }
  for (const auto& [scenario, cost] : standard_cost) {
    for (const GroupSummary& s : summaries) {
      if (s.scenario == scenario &&
          s.method == to_string(Method::RobotAssistedAl) && s.cost_to_target &&
          cost > 0) {
        std::printf("cost ratio (robot_assisted_al / standard_al) [%s]: %s\n",
                    scenario.c_str(),
                    format_sig(*s.cost_to_target / cost, 4).c_str());
      }
    }
  }
  if (!out.good()) {
    throw IoError("write failed: " + output_dir + "/summary.csv");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) try {
  CLI::App app{"Stream-based active learning simulator on a synthetic conveyor world"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string method_name, scenario_name;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  double target_fraction = 0.95;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opts.config_file, "config file (key = value lines)");
    sub->add_option("--preset", opts.preset, "base defaults: paper | desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    sub->add_option("--output-dir", opts.output_dir, "where run logs are written");
  };

  CLI::App* run = app.add_subcommand("run", "run one episode and write its CSV");
  add_common(run);
  run->add_option("--method", method_name,
                  "non_al_random | standard_al | robot_assisted_al");
  run->add_option("--scenario", scenario_name, "base | scenario1 | scenario2");
  run->add_option("--seed", seed, "episode seed");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run every configured method x seed for one scenario");
  add_common(sweep);
  sweep->add_option("--scenario", scenario_name, "base | scenario1 | scenario2");
  sweep->add_option("--jobs", jobs, "parallel episodes")->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand(
      "report", "aggregate run logs into a summary table and summary.csv");
  std::string report_dir = "out";
  report->add_option("--output-dir", report_dir, "directory holding run CSVs");
  report->add_option("--target-fraction", target_fraction,
                     "accuracy target as a fraction of standard_al's final mean");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(opts, method_name, scenario_name, seed);
    if (sweep->parsed()) return cmd_sweep(opts, scenario_name, jobs);
    return cmd_report(report_dir, target_fraction);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const StallError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
} catch (const std::exception& e) {
  std::cerr << "error: " << e.what() << "\n";
  return 2;
} catch (...) {
  std::cerr << "error: unknown failure\n";
  return 2;
}
