#pragma once

#include "tscl/averaging.hpp"
#include "tscl/distances.hpp"
#include "tscl/lloyd.hpp"
#include "tscl/metrics.hpp"
#include "tscl/stats.hpp"
#include "tscl/tsdata.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tscl {

/// A named distance/averaging pairing.
struct AlgorithmPreset
{
  std::string name;
  DistanceSpec distance;
  AveragingSpec averaging;
};

/// The seven pairings, in a fixed order: k-means, k-means-dtw, k-means-msm,
/// k-shape, k-means-dba, k-sc, k-means-soft-dba.
const std::vector<AlgorithmPreset>& algorithm_presets();

/// Throws ParameterError for an unknown name.
const AlgorithmPreset& algorithm_preset(const std::string& name);

/// KMeansConfig for a preset with the recommended Lloyd's defaults.
KMeansConfig preset_config(const AlgorithmPreset& preset, int k, std::uint64_t seed);

enum class RunStatus { Ok, Timeout, Error };

std::string to_string(RunStatus status);
RunStatus parse_run_status(const std::string& text);

struct RunRecord
{
  std::string dataset;
  std::string algorithm;
  std::uint64_t seed = 0;
  SplitMode split = SplitMode::Combined;
  /// Present iff status is Ok.
  std::optional<ScoreSet> scores;
  double fit_time_s = 0.0;
  int n_iters = 0;
  double inertia = 0.0;
  RunStatus status = RunStatus::Ok;
  /// Diagnostic for failed runs; not persisted.
  std::string message;
};

struct BenchConfig
{
  std::filesystem::path data_dir;
  /// Empty: every dataset found under data_dir.
  std::vector<std::string> datasets;
  /// Empty: all seven presets.
  std::vector<std::string> algorithms;
  SplitMode split = SplitMode::Combined;
  std::uint64_t seed = 0;
  int restarts = 10;
  int max_iters = 50;
  double tol = 1e-6;
  /// Per-run budget in seconds; 0 disables it.
  double timeout_s = 0.0;
  int threads = 1;
  /// When false fit_time_s is written as 0, making the output a pure
  /// function of configuration, data and seed.
  bool record_timing = true;
};

/// Dataset names under `data_dir` that have both a train and a test file.
std::vector<std::string> discover_datasets(const std::filesystem::path& data_dir);

/// Train and test files for a dataset, searching <dir>/<name>/ then <dir>/
/// for <name>_TRAIN / <name>_TEST with .tsv, .ts, .txt, .csv or no suffix.
std::pair<std::filesystem::path, std::filesystem::path>
locate_dataset(const std::filesystem::path& data_dir, const std::string& name);

/// Seed for one (dataset, algorithm) job.
std::uint64_t run_seed(std::uint64_t seed, const std::string& dataset, const std::string& algorithm);

/// Fits and scores one preset on already-split, normalised data.
RunRecord run_one(const LabeledDataset& fit_set, const LabeledDataset& eval_set,
                  const AlgorithmPreset& preset, const BenchConfig& config);

/// Every (dataset, algorithm) job; records sorted by (dataset, algorithm).
std::vector<RunRecord> run_experiment(const BenchConfig& config);

inline constexpr const char* kResultsHeader =
    "dataset,algorithm,seed,split,clacc,ri,ari,mi,nmi,ami,fit_time_s,n_iters,inertia,status";

void write_results(std::vector<RunRecord> records, const std::filesystem::path& path);
std::string format_results(std::vector<RunRecord> records);
std::vector<RunRecord> read_results(const std::filesystem::path& path);
std::vector<RunRecord> parse_results(const std::string& text);

/// Metric column by name: clacc, ri, ari, mi, nmi, ami.
double metric_value(const ScoreSet& scores, const std::string& metric);

struct SummaryReport
{
  std::string metric;
  std::vector<std::string> algorithms;
  std::map<std::string, double> means;
  std::map<std::string, double> ranks;
  std::vector<std::vector<std::string>> cliques;
  std::vector<std::string> excluded_datasets;
  /// Scores over the retained datasets (averaged across seeds).
  ScoreTable table;
  Eigen::MatrixXd rank_table;
  std::vector<std::string> warnings;
};

/// Drops datasets lacking an ok run for some algorithm, then reports means,
/// average ranks and Holm cliques for `metric`.
SummaryReport summarize(const std::vector<RunRecord>& records, const std::string& metric,
                        double alpha = 0.05);

/// JSON object with keys metric, means, ranks, cliques, excluded_datasets.
std::string summary_json(const SummaryReport& report);

} // namespace tscl
