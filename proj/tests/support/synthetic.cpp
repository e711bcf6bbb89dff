#include "support/synthetic.hpp"

#include <cmath>
#include <fstream>

namespace tsbench::testsupport {

TimeSeries random_series(Rng& rng, std::size_t len, double lo, double hi) {
  TimeSeries t;
  t.values.resize(len);
  for (auto& v : t.values) v = lo + (hi - lo) * rng.unit();
  return t;
}

LabeledDataset random_dataset(Rng& rng, std::size_t n, std::size_t len, int k) {
  LabeledDataset ds;
  ds.name = "random";
  for (std::size_t i = 0; i < n; ++i) {
    ds.series.push_back(random_series(rng, len));
    ds.labels.push_back("c" + std::to_string(static_cast<int>(i) % k));
  }
  return ds;
}

LabeledDataset blob_dataset(Rng& rng, int k, std::size_t per_cluster, std::size_t len,
                            double noise, double separation) {
  LabeledDataset ds;
  ds.name = "blobs";
  for (int c = 0; c < k; ++c) {
    const double level = separation * static_cast<double>(c);
    const double freq = 1.0 + static_cast<double>(c);
    for (std::size_t m = 0; m < per_cluster; ++m) {
      TimeSeries t;
      t.values.resize(len);
      for (std::size_t i = 0; i < len; ++i) {
        const double phase = 2.0 * M_PI * freq * static_cast<double>(i) / static_cast<double>(len);
        t.values[i] = level + std::sin(phase) + noise * (2.0 * rng.unit() - 1.0);
      }
      ds.series.push_back(std::move(t));
      ds.labels.push_back("c" + std::to_string(c));
    }
  }
  return ds;
}

std::filesystem::path write_archive(const std::vector<LabeledDataset>& datasets,
                                    const std::filesystem::path& dir) {
  for (const auto& ds : datasets) {
    const auto sub = dir / ds.name;
    std::filesystem::create_directories(sub);
    save_ucr_file(ds, sub / (ds.name + "_TRAIN.tsv"));
    std::ofstream(sub / (ds.name + "_TEST.tsv"));  // present but empty
  }
  return dir;
}

}  // namespace tsbench::testsupport
