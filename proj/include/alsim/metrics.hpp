#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "alsim/learner.hpp"
#include "alsim/pools.hpp"
#include "alsim/runlog.hpp"

namespace alsim {

/// Fraction of test instances whose predicted class (argmax posterior,
/// ties to the smallest class id) matches the latent true class.
double accuracy(const ModelParams& params, std::span<const Instance> testset);

/// Example counts over the lower and upper halves of 1..C; for odd C the
/// lower half is 1..floor(C/2).
std::pair<long, long> class_split_counts(const std::vector<long>& per_class);
std::pair<long, long> class_split_counts(const TrainingSet& d);

/// Table-style pseudo-label statistics over a training set.
struct PseudoLabelStats {
  /// Fraction of classifier-pseudo-labeled examples whose label matches the
  /// latent true class; 1.0 by convention when none exist (see defined).
  double classifier_pseudo_accuracy = 1.0;
  bool accuracy_defined = false;
  /// classifier-labeled / n(D); 0 for empty D.
  double classifier_pseudo_ratio = 0.0;
  long classifier_correct = 0;
  long identifier_count = 0;
  long human_count = 0;  // post-stream human labels only
};

PseudoLabelStats pseudo_stats(const TrainingSet& d);

/// One CSV data row; the serialization of one RoundRecord.
struct CsvRow {
  std::string method;
  std::string scenario;
  std::uint64_t seed = 0;
  int round = 0;
  long human_cost = 0;
  long n_d = 0;
  double test_accuracy = 0.0;
  double delta_e = 0.0;
  long n_low = 0;
  long n_high = 0;
  double pseudo_ratio = 0.0;
  double pseudo_accuracy = 1.0;
  long identifier_count = 0;
  long human_count = 0;
};

inline constexpr const char* kCsvHeader =
    "method,scenario,seed,round,human_cost,n_D,test_accuracy,delta_E,"
    "n_low,n_high,pseudo_ratio,pseudo_accuracy,identifier_count,human_count";

std::vector<CsvRow> to_rows(const RunLog& log);

/// Writes run logs as CSV: '#' metadata lines echoing the first log's
/// resolved config, the header, then one row per record. Reals are printed
/// in plain decimal with 6 significant digits; output is byte-stable.
/// Throws IoError with the path on write failure.
void write_csv(const std::vector<RunLog>& logs,
               const std::filesystem::path& path);

/// Parses a file written by write_csv (metadata lines are skipped).
std::vector<CsvRow> read_csv(const std::filesystem::path& path);

/// Reads every *.csv under the directory. Throws ConfigError when no data
/// rows are found.
std::vector<CsvRow> read_csv_dir(const std::filesystem::path& dir);

/// Plain decimal rendering with the given number of significant digits.
std::string format_sig(double v, int digits);

// --- aggregation across seeds ---------------------------------------------

/// Step-function read of one run's accuracy-vs-cost curve: the accuracy of
/// the last record with human_cost <= cost, or the first record's accuracy
/// when the run starts above `cost`. `rows` must be one run, round-ordered.
double accuracy_at_cost(const std::vector<CsvRow>& rows, long cost);

/// Per (method, scenario) aggregate of the final records across seeds.
struct GroupSummary {
  std::string method;
  std::string scenario;
  int runs = 0;
  double final_accuracy_mean = 0.0;
  double final_accuracy_sd = 0.0;  // population
  double final_cost_mean = 0.0;
  double final_nd_mean = 0.0;
  double gap_low_high_mean = 0.0;  // mean |n_low - n_high| at the end
  double pseudo_ratio_mean = 0.0;
  double pseudo_accuracy_mean = 0.0;
  std::optional<double> cost_to_target;  // filled by the report command
};

/// Rows of one (method, scenario) group, split per seed and round-ordered.
std::vector<std::vector<CsvRow>> split_runs(const std::vector<CsvRow>& rows);

std::vector<GroupSummary> summarize(const std::vector<CsvRow>& rows);

/// Smallest cost at which the across-seed mean accuracy curve reaches
/// `target`; knots where any seed has no record yet are skipped.
std::optional<double> cost_to_reach(const std::vector<CsvRow>& group_rows,
                                    double target);

}  // namespace alsim
