#include "alsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "alsim/errors.hpp"

namespace alsim {

double accuracy(const ModelParams& params, std::span<const Instance> testset) {
  if (testset.empty()) {
    throw std::invalid_argument("accuracy needs a non-empty test set");
  }
  long correct = 0;
  for (const Instance& x : testset) {
    int arg = 0;
    predict_proba(params, x).maxCoeff(&arg);  // first max: smallest class id
    if (arg + 1 == x.true_class) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(testset.size());
}

std::pair<long, long> class_split_counts(const std::vector<long>& per_class) {
  const std::size_t split = per_class.size() / 2;
  long low = 0, high = 0;
  for (std::size_t c = 0; c < per_class.size(); ++c) {
    (c < split ? low : high) += per_class[c];
  }
  return {low, high};
}

std::pair<long, long> class_split_counts(const TrainingSet& d) {
  return class_split_counts(d.class_counts());
}

PseudoLabelStats pseudo_stats(const TrainingSet& d) {
  PseudoLabelStats stats;
  stats.identifier_count = d.streamed_count(LabelSource::Identifier);
  stats.human_count = d.streamed_count(LabelSource::Human);
  const long classifier_count = d.streamed_count(LabelSource::Classifier);
  for (const LabeledExample& ex : d.examples()) {
    if (ex.source == LabelSource::Classifier &&
        ex.label == ex.instance.true_class) {
      ++stats.classifier_correct;
    }
  }
  if (classifier_count > 0) {
    stats.accuracy_defined = true;
    stats.classifier_pseudo_accuracy =
        static_cast<double>(stats.classifier_correct) /
        static_cast<double>(classifier_count);
  }
  if (d.size() > 0) {
    stats.classifier_pseudo_ratio =
        static_cast<double>(classifier_count) / static_cast<double>(d.size());
  }
  return stats;
}

std::string format_sig(double v, int digits) {
  if (v == 0.0) return "0";
  if (!std::isfinite(v)) return v > 0 ? "inf" : "-inf";
  const int exponent =
      static_cast<int>(std::floor(std::log10(std::fabs(v))));
  const int decimals = std::max(0, digits - 1 - exponent);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::vector<CsvRow> to_rows(const RunLog& log) {
  std::vector<CsvRow> rows;
  rows.reserve(log.records.size());
  for (const RoundRecord& rec : log.records) {
    CsvRow row;
    row.method = to_string(log.method);
    row.scenario = to_string(log.scenario);
    row.seed = log.seed;
    row.round = rec.round;
    row.human_cost = rec.human_cost;
    row.n_d = rec.n_d;
    row.test_accuracy = rec.test_accuracy;
    row.delta_e = rec.delta_e;
    const auto [low, high] = class_split_counts(rec.class_counts);
    row.n_low = low;
    row.n_high = high;
    row.pseudo_ratio =
        rec.n_d > 0 ? static_cast<double>(rec.classifier_count) / rec.n_d : 0.0;
    row.pseudo_accuracy =
        rec.classifier_count > 0
            ? static_cast<double>(rec.classifier_correct) / rec.classifier_count
            : 1.0;
    row.identifier_count = rec.identifier_count;
    row.human_count = rec.human_count;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_csv(const std::vector<RunLog>& logs,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open for writing: " + path.string());
  }
  if (!logs.empty()) {
    for (const std::string& line : logs.front().config_echo) {
      out << "# " << line << "\n";
    }
  }
  out << kCsvHeader << "\n";
  for (const RunLog& log : logs) {
    for (const CsvRow& r : to_rows(log)) {
      out << r.method << ',' << r.scenario << ',' << r.seed << ',' << r.round
          << ',' << r.human_cost << ',' << r.n_d << ','
          << format_sig(r.test_accuracy, 6) << ',' << format_sig(r.delta_e, 6)
          << ',' << r.n_low << ',' << r.n_high << ','
          << format_sig(r.pseudo_ratio, 6) << ','
          << format_sig(r.pseudo_accuracy, 6) << ',' << r.identifier_count
          << ',' << r.human_count << "\n";
    }
  }
  if (!out.good()) {
    throw IoError("write failed: " + path.string());
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

std::vector<CsvRow> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open for reading: " + path.string());
  }
  std::vector<CsvRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) {
        throw IoError("unexpected CSV header in " + path.string());
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 14) {
      throw IoError("malformed CSV row in " + path.string() + ": " + line);
    }
    CsvRow r;
    r.method = f[0];
    r.scenario = f[1];
    r.seed = std::stoull(f[2]);
    r.round = std::stoi(f[3]);
    r.human_cost = std::stol(f[4]);
    r.n_d = std::stol(f[5]);
    r.test_accuracy = std::stod(f[6]);
    r.delta_e = std::stod(f[7]);
    r.n_low = std::stol(f[8]);
    r.n_high = std::stol(f[9]);
    r.pseudo_ratio = std::stod(f[10]);
    r.pseudo_accuracy = std::stod(f[11]);
    r.identifier_count = std::stol(f[12]);
    r.human_count = std::stol(f[13]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<CsvRow> read_csv_dir(const std::filesystem::path& dir) {
  std::vector<CsvRow> rows;
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    // summary.csv is report output, not run data
    if (entry.path().extension() == ".csv" &&
        entry.path().filename() != "summary.csv") {
      files.push_back(entry.path());
    }
  }
  if (ec) {
    throw IoError("cannot read directory: " + dir.string());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const auto part = read_csv(file);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) {
    throw ConfigError("no run data found in " + dir.string());
  }
  return rows;
}

double accuracy_at_cost(const std::vector<CsvRow>& rows, long cost) {
  double acc = rows.front().test_accuracy;
  for (const CsvRow& r : rows) {
    if (r.human_cost <= cost) acc = r.test_accuracy;
    else break;
  }
  return acc;
}

std::vector<std::vector<CsvRow>> split_runs(const std::vector<CsvRow>& rows) {
  std::map<std::uint64_t, std::vector<CsvRow>> by_seed;
  for (const CsvRow& r : rows) by_seed[r.seed].push_back(r);
  std::vector<std::vector<CsvRow>> runs;
  for (auto& [seed, run] : by_seed) {
    std::sort(run.begin(), run.end(),
              [](const CsvRow& a, const CsvRow& b) { return a.round < b.round; });
    runs.push_back(std::move(run));
  }
  return runs;
}

std::vector<GroupSummary> summarize(const std::vector<CsvRow>& rows) {
  std::map<std::pair<std::string, std::string>, std::vector<CsvRow>> groups;
  for (const CsvRow& r : rows) groups[{r.scenario, r.method}].push_back(r);

  std::vector<GroupSummary> summaries;
  for (const auto& [key, group_rows] : groups) {
    GroupSummary s;
    s.scenario = key.first;
    s.method = key.second;
    double acc_sum = 0.0, acc_sq = 0.0;
    for (const auto& run : split_runs(group_rows)) {
      const CsvRow& last = run.back();
      ++s.runs;
      acc_sum += last.test_accuracy;
      acc_sq += last.test_accuracy * last.test_accuracy;
      s.final_cost_mean += static_cast<double>(last.human_cost);
      s.final_nd_mean += static_cast<double>(last.n_d);
      s.gap_low_high_mean += static_cast<double>(std::labs(last.n_low - last.n_high));
      s.pseudo_ratio_mean += last.pseudo_ratio;
      s.pseudo_accuracy_mean += last.pseudo_accuracy;
    }
    const double n = s.runs;
    s.final_accuracy_mean = acc_sum / n;
    s.final_accuracy_sd = std::sqrt(
        std::max(0.0, acc_sq / n - s.final_accuracy_mean * s.final_accuracy_mean));
    s.final_cost_mean /= n;
    s.final_nd_mean /= n;
    s.gap_low_high_mean /= n;
    s.pseudo_ratio_mean /= n;
    s.pseudo_accuracy_mean /= n;
    summaries.push_back(std::move(s));
  }
  return summaries;
}

std::optional<double> cost_to_reach(const std::vector<CsvRow>& group_rows,
                                    double target) {
  const auto runs = split_runs(group_rows);
  if (runs.empty()) return std::nullopt;
  std::set<long> knots;
  for (const auto& run : runs) {
    for (const CsvRow& r : run) knots.insert(r.human_cost);
  }
  for (long cost : knots) {
    bool defined = true;
    double sum = 0.0;
    for (const auto& run : runs) {
      if (run.front().human_cost > cost) {
        defined = false;
        break;
      }
      sum += accuracy_at_cost(run, cost);
    }
    if (defined && sum / runs.size() >= target) {
      return static_cast<double>(cost);
    }
  }
  return std::nullopt;
}

}  // namespace alsim
