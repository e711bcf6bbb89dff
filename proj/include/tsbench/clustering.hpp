#pragma once

#include <cstdint>
#include <vector>

#include "tsbench/distances.hpp"
#include "tsbench/timeseries.hpp"

namespace tsbench {

/// How a cluster representative is computed. Each kind pairs with specific
/// distance measures (mean <-> euclidean, dba <-> dtw, shape_extraction <->
/// sbd, medoid <-> any).
enum class CentroidKind { arithmetic_mean, dba, shape_extraction, medoid };

bool centroid_compatible(CentroidKind kind, Measure measure);

struct FitConfig {
  int k = 2;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  double tolerance = 1e-6;
  double fuzzifier = 2.0;
};

/// Objective values recorded across a fit, one entry per assignment or
/// centroid half-step; monotonicity tests consume this.
struct FitTrace {
  std::vector<double> objective;
  int iterations = 0;
  bool converged = false;
};

/// Lloyd-style k-means over the given measure and centroid strategy.
/// Deterministic for a fixed (dataset, measure, strategy, config): centroids
/// initialize from k distinct member series drawn with the config seed, and a
/// centroid update is kept only if it does not increase that cluster's
/// summed squared distance, so the objective never rises.
Assignment kmeans_fit(const LabeledDataset& ds, Measure measure, CentroidKind strategy,
                      const FitConfig& cfg, const DtwParams& dtw_params = {},
                      FitTrace* trace = nullptr);

/// Alternating k-medoids over a precomputed distance matrix; each medoid is
/// the member minimizing the summed squared distance within its cluster.
Assignment kmedoids_fit(const DistanceMatrix& dm, const FitConfig& cfg,
                        FitTrace* trace = nullptr);
Assignment kmedoids_fit(const LabeledDataset& ds, Measure measure, const FitConfig& cfg,
                        FitTrace* trace = nullptr);

/// Standard fuzzy C-means in Euclidean geometry; the returned Assignment
/// carries the membership matrix and hard labels by argmax.
Assignment fuzzy_cmeans_fit(const LabeledDataset& ds, const FitConfig& cfg,
                            FitTrace* trace = nullptr);

struct DensityPeaksParams {
  /// Local neighborhood distance; a point j is a neighbor of i when
  /// d(i, j) < d.
  double d = 0.0;
  double neighbor_fraction = 0.02;
  enum class AssignMode { closest_centroid, higher_density_chain };
  AssignMode assignment_mode = AssignMode::closest_centroid;
};

/// Neighborhood distance d as the nearest-rank quantile (at neighbor_fraction)
/// of the off-diagonal distance multiset, so that the expected neighbor count
/// is about neighbor_fraction * n_obs. Falls back to the smallest positive
/// distance (or 1.0 if none) when the quantile is zero, keeping d > 0.
double cutoff_distance(const DistanceMatrix& dm, double neighbor_fraction);

struct DensityPeaksState {
  std::vector<int> rho;             // neighbors within d, self excluded
  std::vector<double> delta;        // distance to the nearest denser point
  std::vector<double> gamma;        // rho * delta
  std::vector<int> nearest_denser;  // -1 for the densest point
  std::vector<int> order;           // indices by (rho desc, index asc)
};

struct DensityPeaksResult {
  Assignment assignment;
  DensityPeaksState state;
  std::vector<int> peaks;  // selection order; cluster c is peaks[c]
  bool degenerate_density = false;
};

/// Density Peaks over a full distance matrix: rho/delta per definition, peaks
/// are the k largest gamma values (ties to the lower index), remaining points
/// assigned per params.assignment_mode. Fully deterministic. When every rho
/// and every delta coincide, peak selection falls back to a farthest-point
/// sweep and the result is flagged degenerate.
DensityPeaksResult density_peaks_fit(const DistanceMatrix& dm, const DensityPeaksParams& params,
                                     int k);
DensityPeaksResult density_peaks_fit(const LabeledDataset& ds, Measure measure,
                                     const DensityPeaksParams& params, int k,
                                     const DtwParams& dtw_params = {});

struct PruningStats {
  std::size_t exact_dtw = 0;    // pairs whose DTW was actually computed
  std::size_t ub_resolved = 0;  // pairs settled by the Euclidean upper bound
  std::size_t lb_resolved = 0;  // pairs settled by the Keogh lower bound
  std::size_t total() const { return exact_dtw + ub_resolved + lb_resolved; }
};

struct TadpoleResult {
  Assignment assignment;
  DensityPeaksState state;
  std::vector<int> peaks;
  bool degenerate_density = false;
  PruningStats pruning;
};

/// Density Peaks under DTW with admissible pruning: a pair's DTW is skipped
/// only when euclidean < d proves neighborhood membership, lb_keogh >= d
/// proves non-membership, or the bounds settle a delta / assignment
/// comparison. Output is identical to density_peaks_fit over the fully
/// materialized DTW matrix with the same d.
TadpoleResult tadpole_fit(const LabeledDataset& ds, const DtwParams& dtw_params,
                          const DensityPeaksParams& params, int k);

enum class Linkage { ward, complete };

struct MergeStep {
  int a = 0;         // smaller cluster id (smallest member index)
  int b = 0;         // larger cluster id
  double cost = 0.0; // linkage value at the merge
};

/// Full agglomerative merge sequence (n-1 steps) under the linkage, computed
/// with the Lance-Williams update. Cluster ids are the smallest member point
/// index; cost ties break on the lexicographically smallest (a, b) pair.
std::vector<MergeStep> agglomerative_merges(const DistanceMatrix& dm,
                                            Linkage linkage = Linkage::ward);

/// Flat clustering after n - k merges; cluster indices are numbered by each
/// cluster's smallest member. Ward expects a Euclidean matrix.
Assignment agglomerative_fit(const DistanceMatrix& dm, int k, Linkage linkage = Linkage::ward);
Assignment agglomerative_ward_fit(const LabeledDataset& ds, int k);

/// One shape-extraction step: members are aligned to the reference at their
/// sbd-maximizing shifts and the z-normalized principal direction of the
/// centered scatter of the aligned, z-normalized members is returned, with
/// the sign that is closer (in sbd) to the reference. All-constant members
/// yield the zero series.
TimeSeries shape_extract(const std::vector<TimeSeries>& members, const TimeSeries& reference);

/// One DBA refinement pass: member points are mapped onto the current
/// centroid through their optimal warping paths and each centroid coordinate
/// becomes the mean of the values mapped to it. A zero window reduces to the
/// pointwise arithmetic mean.
TimeSeries dba_centroid(const std::vector<TimeSeries>& members, const TimeSeries& current,
                        const DtwParams& params);

}  // namespace tsbench
