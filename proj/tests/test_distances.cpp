#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "tsbench/distances.hpp"
#include "tsbench/rng.hpp"

using namespace tsbench;

TEST_CASE("euclidean basics") {
  const TimeSeries a{1.0, 2.0, 3.0};
  CHECK(euclidean(a, a) == 0.0);
  CHECK(euclidean(TimeSeries{0, 0, 0}, TimeSeries{1, 1, 1}) == doctest::Approx(std::sqrt(3.0)));
  CHECK(euclidean(TimeSeries{1, 2, 3}, TimeSeries{4, 6, 3}) == doctest::Approx(5.0));
  CHECK_THROWS_AS(euclidean(a, TimeSeries{1.0}), LengthMismatch);
}

TEST_CASE("window resolution is ceil(frac*n) clamped") {
  DtwParams p;
  p.window_fraction = 0.05;
  CHECK(p.window_for(100) == 5);
  CHECK(p.window_for(101) == 6);  // ceil
  CHECK(p.window_for(10) == 1);
  CHECK(p.window_for(1) == 0);
  p.window_fraction = 1.0;
  CHECK(p.window_for(10) == 9);  // clamped to n-1
  p.window_fraction = 0.0;
  CHECK(p.window_for(10) == 0);
}

TEST_CASE("dtw with zero window equals euclidean bit for bit") {
  Rng rng(3);
  DtwParams zero;
  zero.window_fraction = 0.0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.below(60));
    const TimeSeries a = testsupport::random_series(rng, len, -5, 5);
    const TimeSeries b = testsupport::random_series(rng, len, -5, 5);
    CHECK(dtw(a, b, zero) == euclidean(a, b));
  }
}

TEST_CASE("dtw equals the exhaustive path enumeration") {
  Rng rng(4);
  for (int t = 0; t < 60; ++t) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.below(6));
    const TimeSeries a = testsupport::random_series(rng, len, -2, 2);
    const TimeSeries b = testsupport::random_series(rng, len, -2, 2);
    for (std::size_t w = 0; w < len; ++w) {
      DtwParams p;
      p.window_fraction = static_cast<double>(w) / static_cast<double>(len);
      const std::size_t resolved = p.window_for(len);
      CHECK(dtw(a, b, p) == doctest::Approx(oracle::dtw_bruteforce(a, b, resolved)).epsilon(1e-9));
    }
  }
}

TEST_CASE("dtw spec example x=[0,1,2] y=[0,2,2] full window") {
  const TimeSeries x{0, 1, 2}, y{0, 2, 2};
  DtwParams full;
  full.window_fraction = 1.0;
  CHECK(dtw(x, y, full) == doctest::Approx(oracle::dtw_bruteforce(x, y, 2)).epsilon(1e-12));
}

TEST_CASE("dtw never increases when the band widens, and never exceeds euclidean") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::size_t len = 4 + static_cast<std::size_t>(rng.below(40));
    const TimeSeries a = testsupport::random_series(rng, len);
    const TimeSeries b = testsupport::random_series(rng, len);
    double prev = -1.0;
    for (double frac : {0.0, 0.05, 0.2, 0.5, 1.0}) {
      DtwParams p;
      p.window_fraction = frac;
      const double v = dtw(a, b, p);
      CHECK(v <= euclidean(a, b));
      if (prev >= 0.0) CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("lb_keogh examples and bound property") {
  const TimeSeries x{0, 0, 0}, y{2, 2, 2};
  DtwParams zero;
  zero.window_fraction = 0.0;
  CHECK(lb_keogh(x, x, zero) == 0.0);
  CHECK(lb_keogh(x, y, zero) == doctest::Approx(std::sqrt(12.0)));

  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const std::size_t len = 2 + static_cast<std::size_t>(rng.below(30));
    const TimeSeries a = testsupport::random_series(rng, len);
    const TimeSeries b = testsupport::random_series(rng, len);
    DtwParams p;
    p.window_fraction = 0.05 + 0.3 * rng.unit();
    CHECK(lb_keogh(a, b, p) <= dtw(a, b, p) + 1e-12);
  }
}

TEST_CASE("lb_keogh is zero inside the envelope") {
  // y stays within x's band envelope
  const TimeSeries x{0, 5, 0, 5, 0, 5};
  const TimeSeries y{2, 3, 2, 3, 2, 3};
  DtwParams p;
  p.window_fraction = 0.34;  // w = 3
  CHECK(lb_keogh(x, y, p) == 0.0);
}

TEST_CASE("sbd basics") {
  Rng rng(8);
  const TimeSeries x = testsupport::random_series(rng, 25);
  CHECK(sbd(x, x) == 0.0);

  // Negating flips every lagged correlation, so the peak against -x equals
  // minus the smallest autocorrelation: sbd(x, -x) = 1 + min_s ac(s)/n.
  // Checked against a standalone autocorrelation loop. (At lag zero alone the
  // correlation is -1; the lag search keeps the full distance below 2.)
  TimeSeries neg = x;
  for (auto& v : neg.values) v = -v;
  const TimeSeries z = z_normalize(x);
  const long n = static_cast<long>(z.size());
  double min_ac = 1e300, norm_sq = 0.0;
  for (double v : z) norm_sq += v * v;
  for (long s = -(n - 1); s <= n - 1; ++s) {
    double ac = 0.0;
    for (long t = std::max(0L, s); t <= std::min(n - 1, n - 1 + s); ++t)
      ac += z[static_cast<std::size_t>(t)] * z[static_cast<std::size_t>(t - s)];
    min_ac = std::min(min_ac, ac);
  }
  CHECK(sbd(x, neg) == doctest::Approx(1.0 + min_ac / norm_sq).epsilon(1e-12));
  CHECK(sbd(x, neg) > 0.0);
  CHECK(sbd(x, neg) <= 2.0);

  TimeSeries affine = x;
  for (auto& v : affine.values) v = 3.0 * v + 7.0;
  CHECK(sbd(affine, x) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("sbd degenerate conventions") {
  const TimeSeries flat1{2, 2, 2}, flat2{-1, -1, -1};
  CHECK(sbd(flat1, flat2) == 0.0);  // two flat shapes are identical
  const TimeSeries sig{0, 1, 0};
  CHECK(sbd(flat1, sig) == 1.0);
}

TEST_CASE("elastic measures reject mismatched lengths") {
  const TimeSeries a{1, 2, 3}, b{1, 2};
  CHECK_THROWS_AS(dtw(a, b), LengthMismatch);
  CHECK_THROWS_AS(sbd(a, b), LengthMismatch);
  CHECK_THROWS_AS(lb_keogh(a, b), LengthMismatch);
}

TEST_CASE("sbd stays in range and is symmetric") {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const std::size_t len = 2 + static_cast<std::size_t>(rng.below(50));
    const TimeSeries a = testsupport::random_series(rng, len);
    const TimeSeries b = testsupport::random_series(rng, len);
    const double d1 = sbd(a, b);
    const double d2 = sbd(b, a);
    CHECK(d1 >= 0.0);
    CHECK(d1 <= 2.0);
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-9));
  }
}

TEST_CASE("sbd reports how far the second series lags") {
  Rng rng(10);
  const std::size_t len = 40;
  const TimeSeries base = testsupport::random_series(rng, len);
  for (long s : {-7L, -1L, 0L, 3L, 9L}) {
    // delayed[t] = base[t - s]: the copy lags base by s samples
    TimeSeries delayed;
    delayed.values.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
      const long src = static_cast<long>(t) - s;
      if (src >= 0 && src < static_cast<long>(len))
        delayed.values[t] = base[static_cast<std::size_t>(src)];
    }
    const auto res = sbd_with_shift(base, delayed);
    CHECK(res.shift == s);
    // applying the reported shift restores the alignment
    TimeSeries aligned;
    aligned.values.assign(len, 0.0);
    for (std::size_t t = 0; t < len; ++t) {
      const long src = static_cast<long>(t) + res.shift;
      if (src >= 0 && src < static_cast<long>(len))
        aligned.values[t] = delayed[static_cast<std::size_t>(src)];
    }
    std::size_t agree = 0;
    for (std::size_t t = 0; t < len; ++t)
      if (aligned[t] == base[t]) ++agree;
    CHECK(agree >= len - static_cast<std::size_t>(std::abs(s)));
  }
}

TEST_CASE("fft path matches the direct cross-correlation within 1e-6") {
  Rng rng(12);
  for (std::size_t len : {128u, 200u, 257u, 500u}) {
    const TimeSeries a = testsupport::random_series(rng, len);
    const TimeSeries b = testsupport::random_series(rng, len);
    const auto fast = sbd_with_shift(a, b);   // uses the fft path at this length
    const auto slow = sbd_direct(a, b);
    CHECK(std::abs(fast.distance - slow.distance) < 1e-6);
    CHECK(fast.shift == slow.shift);
  }
}

TEST_CASE("distance_matrix matches element-wise calls") {
  Rng rng(13);
  const auto ds = testsupport::random_dataset(rng, 5, 12, 2);
  const auto dm = distance_matrix(ds, Measure::euclidean);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(dm.at(i, i) == 0.0);
    for (std::size_t j = 0; j < 5; ++j) {
      CHECK(dm.at(i, j) == doctest::Approx(euclidean(ds.series[i], ds.series[j])).epsilon(1e-12));
      CHECK(dm.at(i, j) == dm.at(j, i));
    }
  }
}

TEST_CASE("distance_matrix trivial shapes") {
  LabeledDataset one;
  one.series = {TimeSeries{1.0, 2.0}};
  one.labels = {"a"};
  const auto dm1 = distance_matrix(one, Measure::euclidean);
  CHECK(dm1.size() == 1);
  CHECK(dm1.at(0, 0) == 0.0);

  LabeledDataset same;
  same.series = {TimeSeries{1.0, 2.0}, TimeSeries{1.0, 2.0}, TimeSeries{1.0, 2.0}};
  same.labels = {"a", "b", "a"};
  const auto dm3 = distance_matrix(same, Measure::sbd);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(dm3.at(i, j) == 0.0);
}

TEST_CASE("parallel matrix fill equals serial") {
  Rng rng(14);
  const auto ds = testsupport::random_dataset(rng, 17, 20, 3);
  DtwParams p;
  const auto serial = distance_matrix(ds, Measure::dtw, p, 1);
  const auto parallel = distance_matrix(ds, Measure::dtw, p, 4);
  for (std::size_t i = 0; i < ds.size(); ++i)
    for (std::size_t j = 0; j < ds.size(); ++j) CHECK(serial.at(i, j) == parallel.at(i, j));
}

TEST_CASE("matrix save/load round-trips") {
  Rng rng(15);
  const auto ds = testsupport::random_dataset(rng, 9, 8, 2);
  const auto dm = distance_matrix(ds, Measure::sbd);
  const auto path = std::filesystem::temp_directory_path() / "tsb_matrix.dm";
  dm.save(path);
  const auto back = DistanceMatrix::load(path);
  CHECK(back.size() == dm.size());
  CHECK(back.measure() == Measure::sbd);
  for (std::size_t i = 0; i < dm.size(); ++i)
    for (std::size_t j = 0; j < dm.size(); ++j) CHECK(back.at(i, j) == dm.at(i, j));
}
