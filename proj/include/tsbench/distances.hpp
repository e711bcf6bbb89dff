#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "tsbench/timeseries.hpp"

namespace tsbench {

enum class Measure { euclidean, dtw, sbd };

std::string to_string(Measure m);
Measure measure_from_string(const std::string& s);

/// Sakoe-Chiba band width as a fraction of the series length; the resolved
/// window is ceil(window_fraction * n), clamped to n - 1.
struct DtwParams {
  double window_fraction = 0.05;

  std::size_t window_for(std::size_t n) const;

  bool operator==(const DtwParams&) const = default;
};

/// sqrt of the sum of squared pointwise differences. Throws LengthMismatch.
double euclidean(const TimeSeries& t1, const TimeSeries& t2);

/// Band-constrained dynamic time warping: the minimum accumulated squared
/// pointwise cost over monotone boundary-anchored warping paths with
/// |i - j| <= w, square-rooted. With a zero window this equals euclidean()
/// exactly (same accumulation order).
double dtw(const TimeSeries& t1, const TimeSeries& t2, const DtwParams& params = {});

/// Band envelope of `t`: lower[i] = min, upper[i] = max of t over
/// [i - w, i + w] clipped to the series.
void dtw_envelope(const TimeSeries& t, std::size_t w, std::vector<double>& lower,
                  std::vector<double>& upper);

/// Keogh lower bound for dtw() at the same window: the exceedance of `t2`
/// beyond the band envelope of `t1`, square-rooted. lb_keogh <= dtw always.
double lb_keogh(const TimeSeries& t1, const TimeSeries& t2, const DtwParams& params = {});
/// Variant with a precomputed envelope of t1 (TADPole's hot path).
double lb_keogh(const std::vector<double>& lower1, const std::vector<double>& upper1,
                const TimeSeries& t2);

struct SbdResult {
  double distance = 0.0;
  /// Lag of the second series behind the first at the correlation peak;
  /// y_aligned[t] = y[t + shift] (zeros outside) aligns it to the first.
  long shift = 0;
};

/// Shape-based distance: 1 minus the peak normalized cross-correlation of the
/// z-normalized inputs over all 2n-1 shifts, in [0, 2]. Both inputs constant
/// gives 0 (identical flat shapes); exactly one constant gives 1.
double sbd(const TimeSeries& t1, const TimeSeries& t2);
SbdResult sbd_with_shift(const TimeSeries& t1, const TimeSeries& t2);

/// Reference O(n^2) cross-correlation route; sbd() switches to an FFT path for
/// long series and the two agree within 1e-6.
SbdResult sbd_direct(const TimeSeries& t1, const TimeSeries& t2);

/// Symmetric pairwise distances with a zero diagonal, stored condensed.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n_obs, Measure measure);

  std::size_t size() const noexcept { return n_; }
  Measure measure() const noexcept { return measure_; }

  double at(std::size_t i, std::size_t j) const {
    if (i == j) return 0.0;
    return cells_[index(i, j)];
  }
  void set(std::size_t i, std::size_t j, double v) {
    if (i != j) cells_[index(i, j)] = v;
  }

  /// Largest off-diagonal entry (0 for matrices smaller than 2x2).
  double max_value() const;

  /// File format: 8-byte measure tag, little-endian u64 n_obs, then the full
  /// n x n row-major matrix of 64-bit reals.
  void save(const std::filesystem::path& path) const;
  static DistanceMatrix load(const std::filesystem::path& path);

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  std::size_t n_ = 0;
  Measure measure_ = Measure::euclidean;
  std::vector<double> cells_;  // upper triangle, row by row
};

/// All pairwise distances for a dataset; rows may be filled by a small worker
/// pool (identical output for any thread count).
DistanceMatrix distance_matrix(const LabeledDataset& ds, Measure measure,
                               const DtwParams& params = {}, unsigned threads = 1);

}  // namespace tsbench
