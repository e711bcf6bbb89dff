#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "tsbench/timeseries.hpp"

namespace tsbench {

/// Co-membership counts between two partitions: rows index clusters of the
/// first argument, columns clusters of the second.
struct ContingencyTable {
  std::vector<std::vector<long long>> counts;
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;
  long long total = 0;

  std::size_t rows() const noexcept { return counts.size(); }
  std::size_t cols() const noexcept { return counts.empty() ? 0 : counts.front().size(); }
};

/// Maps arbitrary labels to dense cluster ids in order of first appearance.
std::vector<int> to_cluster_ids(const std::vector<std::string>& labels);

ContingencyTable contingency(const std::vector<int>& x, const std::vector<int>& y);

/// The six external validity indices of one truth/prediction comparison.
struct ScoreSet {
  double ari = 0.0;
  double rand = 0.0;
  double ami = 0.0;
  double fowlkes_mallows = 0.0;
  double homogeneity = 0.0;
  double completeness = 0.0;

  static constexpr std::array<std::string_view, 6> names = {
      "ari", "rand", "ami", "fowlkes_mallows", "homogeneity", "completeness"};

  double by_index(std::size_t i) const;
  void set_by_index(std::size_t i, double v);
};

/// Chance-adjusted Rand index; identical partitions give 1.0 and a vanishing
/// adjustment denominator (both trivial) resolves to 1.0.
double ari(const ContingencyTable& ct);

// Ingredients exposed for oracle tests and the AMI computation.
double mutual_information(const ContingencyTable& ct);
double entropy_rows(const ContingencyTable& ct);
double entropy_cols(const ContingencyTable& ct);
/// Expectation of mutual information under the fixed-margin permutation model
/// (hypergeometric form), in natural log.
double expected_mutual_information(const ContingencyTable& ct);

ScoreSet external_scores(const ContingencyTable& ct);
ScoreSet external_scores(const std::vector<int>& truth, const std::vector<int>& pred);
ScoreSet external_scores(const std::vector<std::string>& truth, const Assignment& pred);

/// Mean squared per-dataset difference of two accuracy vectors.
double spread(const std::vector<double>& a1, const std::vector<double>& a2);

/// Tie handling for winning counts.
///  - strict: only a strict maximum with score >= threshold earns a count
///    (exact ties earn nothing).
///  - award_all: every method tied at the maximum earns a count, and the
///    maximum must be strictly above the threshold. Use for score tables that
///    were rounded to a fixed precision before comparison: rounding creates
///    artificial ties and boundary values, and this mode models counts
///    computed from the original unrounded scores.
enum class TieRule { strict, award_all };

/// Per-method winning counts over aligned accuracy vectors (one vector per
/// method, one entry per dataset).
std::vector<long> winning_counts(const std::vector<std::vector<double>>& vectors,
                                 double threshold = 0.05, TieRule tie = TieRule::strict);

struct RunAggregate {
  ScoreSet mean;
  ScoreSet stddev;  // population form
  int runs = 0;
};

RunAggregate aggregate_runs(const std::vector<ScoreSet>& runs);

}  // namespace tsbench
