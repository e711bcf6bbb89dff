#include "tsbench/distances.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

namespace tsbench {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_length(const TimeSeries& a, const TimeSeries& b) {
  if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
}
}  // namespace

std::string to_string(Measure m) {
  switch (m) {
    case Measure::euclidean: return "euclidean";
    case Measure::dtw: return "dtw";
    case Measure::sbd: return "sbd";
  }
  return "euclidean";
}

Measure measure_from_string(const std::string& s) {
  if (s == "euclidean" || s == "euc") return Measure::euclidean;
  if (s == "dtw") return Measure::dtw;
  if (s == "sbd" || s == "shape") return Measure::sbd;
  throw Error("unknown measure '" + s + "'");
}

std::size_t DtwParams::window_for(std::size_t n) const {
  if (n <= 1) return 0;
  const auto w = static_cast<std::size_t>(std::ceil(window_fraction * static_cast<double>(n)));
  return std::min(w, n - 1);
}

double euclidean(const TimeSeries& t1, const TimeSeries& t2) {
  require_same_length(t1, t2);
  double sum = 0.0;
  for (std::size_t i = 0; i < t1.size(); ++i) {
    const double d = t1[i] - t2[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double dtw(const TimeSeries& t1, const TimeSeries& t2, const DtwParams& params) {
  require_same_length(t1, t2);
  const std::size_t n = t1.size();
  if (n == 0) return 0.0;
  const std::size_t w = params.window_for(n);

  thread_local std::vector<double> prev_buf, curr_buf;
  prev_buf.assign(n, kInf);
  curr_buf.assign(n, kInf);
  double* prev = prev_buf.data();
  double* curr = curr_buf.data();

  std::size_t plo = 0, phi = 0;  // valid band of the previous row
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t jlo = (i >= w) ? i - w : 0;
    const std::size_t jhi = std::min(n - 1, i + w);
    for (std::size_t j = jlo; j <= jhi; ++j) {
      const double d = t1[i] - t2[j];
      const double cost = d * d;
      if (i == 0 && j == 0) {
        curr[j] = cost;
        continue;
      }
      double best = kInf;
      if (i > 0) {
        if (j >= plo && j <= phi) best = prev[j];
        if (j > 0 && j - 1 >= plo && j - 1 <= phi) best = std::min(best, prev[j - 1]);
      }
      if (j > jlo) best = std::min(best, curr[j - 1]);
      curr[j] = best + cost;
    }
    std::swap(prev, curr);
    plo = jlo;
    phi = jhi;
  }
  return std::sqrt(prev[n - 1]);
}

void dtw_envelope(const TimeSeries& t, std::size_t w, std::vector<double>& lower,
                  std::vector<double>& upper) {
  const std::size_t n = t.size();
  lower.resize(n);
  upper.resize(n);
  // Sliding min/max over [i - w, i + w] with monotonic deques of indices.
  std::deque<std::size_t> lo, hi;
  for (std::size_t e = 0; e < n + w; ++e) {
    if (e < n) {
      while (!lo.empty() && t[lo.back()] >= t[e]) lo.pop_back();
      lo.push_back(e);
      while (!hi.empty() && t[hi.back()] <= t[e]) hi.pop_back();
      hi.push_back(e);
    }
    if (e >= w) {
      const std::size_t i = e - w;  // window [i - w, min(n - 1, e)] is complete
      if (!lo.empty() && lo.front() + w < i) lo.pop_front();
      if (!hi.empty() && hi.front() + w < i) hi.pop_front();
      lower[i] = t[lo.front()];
      upper[i] = t[hi.front()];
    }
  }
}

double lb_keogh(const std::vector<double>& lower1, const std::vector<double>& upper1,
                const TimeSeries& t2) {
  if (lower1.size() != t2.size()) throw LengthMismatch(lower1.size(), t2.size());
  double sum = 0.0;
  for (std::size_t j = 0; j < t2.size(); ++j) {
    const double v = t2[j];
    if (v > upper1[j]) {
      const double d = v - upper1[j];
      sum += d * d;
    } else if (v < lower1[j]) {
      const double d = lower1[j] - v;
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

double lb_keogh(const TimeSeries& t1, const TimeSeries& t2, const DtwParams& params) {
  require_same_length(t1, t2);
  std::vector<double> lower, upper;
  dtw_envelope(t1, params.window_for(t1.size()), lower, upper);
  return lb_keogh(lower, upper, t2);
}

namespace {

struct NormalizedPair {
  std::vector<double> z1, z2;
  double norm1_sq = 0.0, norm2_sq = 0.0;
};

NormalizedPair normalize_for_sbd(const TimeSeries& t1, const TimeSeries& t2) {
  NormalizedPair p;
  p.z1 = z_normalize(t1).values;
  p.z2 = z_normalize(t2).values;
  for (double v : p.z1) p.norm1_sq += v * v;
  for (double v : p.z2) p.norm2_sq += v * v;
  return p;
}

/// Scans cross-correlations in ascending lag order; the first maximum wins.
/// cc is indexed by lag sigma in [-(n-1), n-1] where cc(sigma) correlates
/// z1[t] with z2[t - sigma]; the reported shift is -sigma, so a positive
/// shift means the second series lags the first. The single sqrt of the norm
/// product keeps identical inputs at exactly zero distance.
SbdResult pick_peak(const std::vector<double>& cc, long n, const NormalizedPair& p) {
  double best = -kInf;
  long best_sigma = 0;
  for (long s = -(n - 1); s <= n - 1; ++s) {
    const double v = cc[static_cast<std::size_t>(s + n - 1)];
    if (v > best) {
      best = v;
      best_sigma = s;
    }
  }
  const double d = 1.0 - best / std::sqrt(p.norm1_sq * p.norm2_sq);
  return {std::clamp(d, 0.0, 2.0), -best_sigma};
}

std::mutex fftw_plan_mutex;  // FFTW plan creation is not thread-safe

SbdResult sbd_fft(const NormalizedPair& p) {
  const long n = static_cast<long>(p.z1.size());
  std::size_t fft_n = 1;
  while (fft_n < 2 * static_cast<std::size_t>(n) - 1) fft_n <<= 1;

  std::vector<double> in1(fft_n, 0.0), in2(fft_n, 0.0), out(fft_n, 0.0);
  std::copy(p.z1.begin(), p.z1.end(), in1.begin());
  std::copy(p.z2.begin(), p.z2.end(), in2.begin());
  const std::size_t spec_n = fft_n / 2 + 1;
  std::vector<fftw_complex> f1(spec_n), f2(spec_n);

  fftw_plan plan1, plan2, plan_back;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan1 = fftw_plan_dft_r2c_1d(static_cast<int>(fft_n), in1.data(), f1.data(), FFTW_ESTIMATE);
    plan2 = fftw_plan_dft_r2c_1d(static_cast<int>(fft_n), in2.data(), f2.data(), FFTW_ESTIMATE);
    plan_back =
        fftw_plan_dft_c2r_1d(static_cast<int>(fft_n), f1.data(), out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan1);
  fftw_execute(plan2);
  for (std::size_t i = 0; i < spec_n; ++i) {
    const double re = f1[i][0] * f2[i][0] + f1[i][1] * f2[i][1];
    const double im = f1[i][1] * f2[i][0] - f1[i][0] * f2[i][1];
    f1[i][0] = re;
    f1[i][1] = im;
  }
  fftw_execute(plan_back);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan1);
    fftw_destroy_plan(plan2);
    fftw_destroy_plan(plan_back);
  }

  std::vector<double> cc(2 * static_cast<std::size_t>(n) - 1);
  const double scale = 1.0 / static_cast<double>(fft_n);
  for (long s = -(n - 1); s <= n - 1; ++s) {
    const std::size_t idx = static_cast<std::size_t>((s + static_cast<long>(fft_n)) %
                                                     static_cast<long>(fft_n));
    cc[static_cast<std::size_t>(s + n - 1)] = out[idx] * scale;
  }
  return pick_peak(cc, n, p);
}

SbdResult sbd_impl(const TimeSeries& t1, const TimeSeries& t2, bool allow_fft) {
  require_same_length(t1, t2);
  const long n = static_cast<long>(t1.size());
  if (n == 0) return {0.0, 0};
  const NormalizedPair p = normalize_for_sbd(t1, t2);
  const bool deg1 = p.norm1_sq == 0.0, deg2 = p.norm2_sq == 0.0;
  if (deg1 && deg2) return {0.0, 0};  // two flat shapes are identical
  if (deg1 || deg2) return {1.0, 0};

  if (allow_fft && n >= 128) return sbd_fft(p);

  std::vector<double> cc(2 * static_cast<std::size_t>(n) - 1, 0.0);
  for (long s = -(n - 1); s <= n - 1; ++s) {
    const long lo = std::max(0L, s);
    const long hi = std::min(n - 1, n - 1 + s);
    double acc = 0.0;
    for (long t = lo; t <= hi; ++t) acc += p.z1[static_cast<std::size_t>(t)] *
                                          p.z2[static_cast<std::size_t>(t - s)];
    cc[static_cast<std::size_t>(s + n - 1)] = acc;
  }
  return pick_peak(cc, n, p);
}

}  // namespace

SbdResult sbd_with_shift(const TimeSeries& t1, const TimeSeries& t2) {
  return sbd_impl(t1, t2, true);
}

SbdResult sbd_direct(const TimeSeries& t1, const TimeSeries& t2) {
  return sbd_impl(t1, t2, false);
}

double sbd(const TimeSeries& t1, const TimeSeries& t2) { return sbd_with_shift(t1, t2).distance; }

DistanceMatrix::DistanceMatrix(std::size_t n_obs, Measure measure)
    : n_(n_obs), measure_(measure), cells_(n_obs < 2 ? 0 : n_obs * (n_obs - 1) / 2, 0.0) {}

double DistanceMatrix::max_value() const {
  double m = 0.0;
  for (double v : cells_) m = std::max(m, v);
  return m;
}

void DistanceMatrix::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  char tag[8] = {};
  const std::string name = to_string(measure_);
  std::memcpy(tag, name.data(), std::min<std::size_t>(name.size(), 7));
  out.write(tag, 8);
  const std::uint64_t n64 = n_;
  out.write(reinterpret_cast<const char*>(&n64), sizeof n64);
  std::vector<double> row(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) row[j] = at(i, j);
    out.write(reinterpret_cast<const char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!out) throw IoError("write failed: " + path.string());
}

DistanceMatrix DistanceMatrix::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char tag[8] = {};
  in.read(tag, 8);
  std::uint64_t n64 = 0;
  in.read(reinterpret_cast<char*>(&n64), sizeof n64);
  if (!in) throw IoError("truncated matrix file: " + path.string());
  DistanceMatrix dm(static_cast<std::size_t>(n64), measure_from_string(std::string(tag)));
  std::vector<double> row(dm.size());
  for (std::size_t i = 0; i < dm.size(); ++i) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!in) throw IoError("truncated matrix file: " + path.string());
    for (std::size_t j = i + 1; j < dm.size(); ++j) dm.set(i, j, row[j]);
  }
  return dm;
}

DistanceMatrix distance_matrix(const LabeledDataset& ds, Measure measure, const DtwParams& params,
                               unsigned threads) {
  const std::size_t n = ds.size();
  DistanceMatrix dm(n, measure);
  const auto fill_row = [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.0;
      switch (measure) {
        case Measure::euclidean: v = euclidean(ds.series[i], ds.series[j]); break;
        case Measure::dtw: v = dtw(ds.series[i], ds.series[j], params); break;
        case Measure::sbd: v = sbd(ds.series[i], ds.series[j]); break;
      }
      dm.set(i, j, v);
    }
  };
  if (threads <= 1 || n < 4) {
    for (std::size_t i = 0; i < n; ++i) fill_row(i);
    return dm;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) fill_row(i);  // disjoint rows
    });
  }
  for (auto& th : pool) th.join();
  return dm;
}

}  // namespace tsbench
