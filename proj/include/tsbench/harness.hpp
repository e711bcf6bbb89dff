#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsbench/clustering.hpp"
#include "tsbench/evaluation.hpp"
#include "tsbench/timeseries.hpp"

namespace tsbench {

/// The eight benchmark methods: algorithm x distance measure.
enum class MethodId {
  kmeans_euc,
  kmedoids_euc,
  cmeans_euc,
  kmeans_shape,
  kmeans_dtw,
  dpeaks_euc,
  dpeaks_dtw,
  agglo_euc,
};

inline constexpr std::array<MethodId, 8> kAllMethods = {
    MethodId::kmeans_euc, MethodId::kmedoids_euc, MethodId::cmeans_euc,  MethodId::kmeans_shape,
    MethodId::kmeans_dtw, MethodId::dpeaks_euc,   MethodId::dpeaks_dtw, MethodId::agglo_euc,
};

std::string to_string(MethodId m);
MethodId method_from_string(const std::string& s);

/// Density Peaks and Agglomerative have no random initialization; they run
/// once. The partitional methods are averaged over seeded runs.
bool method_is_deterministic(MethodId m);

struct BenchmarkConfig {
  std::filesystem::path archive_dir;
  std::vector<MethodId> methods{kAllMethods.begin(), kAllMethods.end()};
  std::vector<std::string> datasets;  // empty = every dataset in the archive
  int runs = 10;
  std::uint64_t base_seed = 0;
  double window_fraction = 0.05;
  double neighbor_fraction = 0.02;
  MergePolicy merge_policy = MergePolicy::merged;
  DensityPeaksParams::AssignMode dp_assign_mode =
      DensityPeaksParams::AssignMode::closest_centroid;
  unsigned threads = 1;
  std::filesystem::path output_dir;
  bool cache_matrices = true;
};

/// One persisted score: the unit aggregated by the phase reports.
struct ScoreRecord {
  std::string dataset;
  std::string method;
  std::string measure;  // one of ScoreSet::names
  double value = 0.0;
  int runs = 1;
  std::uint64_t seed_base = 0;

  bool operator==(const ScoreRecord&) const = default;
};

class ScoreStore {
 public:
  void add(ScoreRecord rec);
  /// Stable order: (dataset, method, measure).
  void sort_canonical();

  const std::vector<ScoreRecord>& records() const noexcept { return records_; }
  bool empty() const noexcept { return records_.empty(); }

  std::vector<std::string> datasets() const;
  bool has_method(const std::string& method) const;

  std::optional<double> value(const std::string& dataset, const std::string& method,
                              const std::string& measure) const;

  /// Datasets for which every listed method has the measure, sorted by name.
  std::vector<std::string> datasets_with(const std::vector<std::string>& methods,
                                         const std::string& measure) const;
  /// Per-dataset scores for one method, aligned with `datasets`.
  std::vector<double> accuracy_vector(const std::string& method, const std::string& measure,
                                      const std::vector<std::string>& datasets) const;

 private:
  std::vector<ScoreRecord> records_;
};

/// CSV columns: dataset,method,measure,value,runs,seed_base (values at six
/// decimal digits); JSON is the same records as an array.
void save_scores_csv(const ScoreStore& store, const std::filesystem::path& path);
void save_scores_json(const ScoreStore& store, const std::filesystem::path& path);
ScoreStore load_scores_csv(const std::filesystem::path& path);

struct TaskStatus {
  std::string dataset;
  std::string method;
  std::string status;  // ok | failed
  std::string detail;
  int runs = 0;
};

struct DatasetInfo {
  std::string name;
  std::size_t n_obs = 0;
  std::size_t length = 0;
  int k = 0;
  bool admissible = false;
  std::vector<std::string> reasons;
};

struct RunReport {
  ScoreStore store;
  std::vector<DatasetInfo> datasets;
  std::vector<TaskStatus> tasks;
  int failures = 0;
};

/// Runs every selected method on every admissible dataset of the archive.
/// Non-deterministic methods run with seeds base_seed .. base_seed + runs - 1
/// and are aggregated; per-dataset failures are isolated and recorded.
/// Writes scores.csv, scores.json, and manifest.json under output_dir (if
/// set); thread count never changes any output byte.
RunReport run_benchmark(const BenchmarkConfig& cfg);

struct PhaseOptions {
  std::string measure = "ari";
  double threshold = 0.05;
  TieRule tie = TieRule::strict;
};

struct PairComparison {
  std::string method_a;
  std::string method_b;
  long wins_a = 0;
  long wins_b = 0;
  double spread = 0.0;
  /// Per-dataset (score_a, score_b) pairs: the scatter-plot data.
  std::vector<std::string> datasets;
  std::vector<double> scores_a;
  std::vector<double> scores_b;
};

struct PhaseReport {
  int phase = 0;
  std::string title;
  std::string measure;
  /// Phase 1: mean +- population stddev per method, descending by mean.
  struct MethodMean {
    std::string method;
    double mean = 0.0;
    double stddev = 0.0;
  };
  std::vector<MethodMean> means;
  /// Phases 2-4: group-wise winning counts over all compared methods.
  std::vector<std::string> methods;
  std::vector<long> group_counts;
  /// Phases 2-6: pairwise winning counts, spread, scatter data.
  std::vector<PairComparison> pairs;

  std::string to_text() const;
};

/// Builds the report for one evaluation phase (1-6). Throws MissingMethod
/// naming any required method absent from the store.
PhaseReport phase_report(const ScoreStore& store, int phase, const PhaseOptions& opts = {});

/// Writes phaseN.txt plus machine-readable CSVs (summary and one scatter file
/// per pair) under dir.
void write_phase_files(const PhaseReport& report, const std::filesystem::path& dir);

struct BaselineRow {
  int k = 0;
  ScoreSet mean;
};

/// Chance-level curves: all six indices averaged over `trials` comparisons of
/// uniformly random ground truth vs uniformly random prediction, for each k.
std::vector<BaselineRow> random_baseline(int n_points, int k_min, int k_max, int trials,
                                         std::uint64_t seed);
void save_baseline_csv(const std::vector<BaselineRow>& rows, const std::filesystem::path& path);

}  // namespace tsbench
