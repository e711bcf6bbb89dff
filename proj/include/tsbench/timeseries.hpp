#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "tsbench/errors.hpp"

namespace tsbench {

/// One observation to be clustered: a fixed-length sequence of real samples.
struct TimeSeries {
  std::vector<double> values;

  TimeSeries() = default;
  explicit TimeSeries(std::vector<double> v) : values(std::move(v)) {}
  TimeSeries(std::initializer_list<double> v) : values(v) {}

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  const double* data() const noexcept { return values.data(); }
  auto begin() const noexcept { return values.begin(); }
  auto end() const noexcept { return values.end(); }
  bool operator==(const TimeSeries&) const = default;

  /// True when every sample is finite (no NaN/inf).
  bool is_finite() const noexcept;
};

/// Rescales to mean 0 and population (divide-by-n) standard deviation 1.
/// A constant series maps to all zeros.
TimeSeries z_normalize(const TimeSeries& t);

/// Equal-length series with class labels; labels are opaque strings.
struct LabeledDataset {
  std::string name;
  std::vector<TimeSeries> series;
  std::vector<std::string> labels;

  std::size_t size() const noexcept { return series.size(); }

  /// Common series length (length of the first series; callers should check
  /// admissibility before relying on uniformity).
  std::size_t length() const noexcept { return series.empty() ? 0 : series.front().size(); }

  /// Number of distinct classes, excluding any label spelled "noise"
  /// (case-insensitive).
  int num_classes() const;
};

/// A hard partition, plus optional soft memberships (row-stochastic over k).
struct Assignment {
  int k = 0;
  std::vector<int> cluster_of;
  std::vector<std::vector<double>> memberships;  // empty unless the fit is soft

  std::size_t size() const noexcept { return cluster_of.size(); }
};

enum class MergePolicy { merged, train_only, test_only };

std::string to_string(MergePolicy p);
MergePolicy merge_policy_from_string(const std::string& s);

/// Loads a dataset from UCR-layout TSV files: each line is
/// `<label> TAB v1 TAB v2 ... TAB vn`; the literal token `NaN` is a missing
/// value. Either path may be empty (contributes no rows). Under `merged`,
/// train rows precede test rows. Throws ParseError with file and line number
/// on malformed input, IoError when a non-empty path cannot be opened.
LabeledDataset load_ucr_dataset(const std::filesystem::path& train_path,
                                const std::filesystem::path& test_path,
                                MergePolicy policy = MergePolicy::merged);

/// Convenience for the standard archive layout
/// `<dir>/<name>/<name>_TRAIN.tsv` + `<name>_TEST.tsv`.
LabeledDataset load_archive_dataset(const std::filesystem::path& archive_dir,
                                    const std::string& name,
                                    MergePolicy policy = MergePolicy::merged);

/// Writes the dataset back to a single UCR-format TSV file with full double
/// precision, so load -> save -> load round-trips values exactly.
void save_ucr_file(const LabeledDataset& ds, const std::filesystem::path& path);

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> reasons;  // subset of {unequal_length, nan_values, single_class, empty}
};

/// Checks the ingestion restrictions: uniform length, finite values, and at
/// least two non-noise classes.
AdmissibilityReport filter_admissible(const LabeledDataset& ds);

}  // namespace tsbench
