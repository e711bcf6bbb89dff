#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support/synthetic.hpp"
#include "tsbench/harness.hpp"
#include "tsbench/rng.hpp"

using namespace tsbench;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::filesystem::path tiny_archive(const std::string& tag) {
  Rng rng(1234);
  auto blobs = testsupport::blob_dataset(rng, 2, 30, 12, 0.2, 12.0);
  blobs.name = "Blobby";
  auto second = testsupport::blob_dataset(rng, 3, 20, 12, 0.2, 10.0);
  second.name = "Trio";
  // one inadmissible dataset: single class
  LabeledDataset single;
  single.name = "OneClass";
  single.series = {TimeSeries{1.0, 2.0}, TimeSeries{1.5, 2.5}};
  single.labels = {"x", "x"};
  return testsupport::write_archive({blobs, second, single}, fresh_dir("tsb_archive_" + tag));
}

}  // namespace

TEST_CASE("method names round-trip and deterministic flags hold") {
  for (MethodId m : kAllMethods) CHECK(method_from_string(to_string(m)) == m);
  CHECK(method_is_deterministic(MethodId::agglo_euc));
  CHECK(method_is_deterministic(MethodId::dpeaks_euc));
  CHECK(method_is_deterministic(MethodId::dpeaks_dtw));
  CHECK_FALSE(method_is_deterministic(MethodId::kmeans_euc));
  CHECK_THROWS_AS(method_from_string("nope"), Error);
}

TEST_CASE("run_benchmark: one dataset, all methods, expected record count") {
  BenchmarkConfig cfg;
  cfg.archive_dir = tiny_archive("a");
  cfg.datasets = {"Blobby"};
  cfg.runs = 2;
  cfg.output_dir = fresh_dir("tsb_out_a");
  const auto rep = run_benchmark(cfg);
  CHECK(rep.failures == 0);
  // 8 methods x 6 measures
  CHECK(rep.store.records().size() == 48);
  for (const auto& r : rep.store.records()) {
    CHECK(r.dataset == "Blobby");
    if (method_is_deterministic(method_from_string(r.method))) {
      CHECK(r.runs == 1);
    } else {
      CHECK(r.runs == 2);
    }
  }
  // the blobs are far apart: every method nails them
  for (MethodId m : kAllMethods) {
    const auto v = rep.store.value("Blobby", to_string(m), "ari");
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(1.0));
  }
  CHECK(std::filesystem::exists(cfg.output_dir / "scores.csv"));
  CHECK(std::filesystem::exists(cfg.output_dir / "scores.json"));
  CHECK(std::filesystem::exists(cfg.output_dir / "manifest.json"));
}

TEST_CASE("run_benchmark: inadmissible datasets are reported, not run") {
  BenchmarkConfig cfg;
  cfg.archive_dir = tiny_archive("b");
  cfg.methods = {MethodId::kmeans_euc};
  cfg.runs = 1;
  const auto rep = run_benchmark(cfg);
  REQUIRE(rep.datasets.size() == 3);
  bool saw_single = false;
  for (const auto& d : rep.datasets) {
    if (d.name == "OneClass") {
      saw_single = true;
      CHECK_FALSE(d.admissible);
      REQUIRE(d.reasons.size() == 1);
      CHECK(d.reasons[0] == "single_class");
    } else {
      CHECK(d.admissible);
    }
  }
  CHECK(saw_single);
  // no records for the skipped dataset, full coverage for the others
  for (const auto& r : rep.store.records()) CHECK(r.dataset != "OneClass");
  CHECK(rep.store.records().size() == 2 * 6);
}

TEST_CASE("run_benchmark: empty archive yields an empty store") {
  BenchmarkConfig cfg;
  cfg.archive_dir = fresh_dir("tsb_empty");
  const auto rep = run_benchmark(cfg);
  CHECK(rep.store.empty());
  CHECK(rep.failures == 0);
}

TEST_CASE("rerun with identical config is byte-identical; threads do not matter") {
  const auto archive = tiny_archive("c");
  auto run_once = [&](unsigned threads, const std::string& tag) {
    BenchmarkConfig cfg;
    cfg.archive_dir = archive;
    cfg.runs = 2;
    cfg.threads = threads;
    cfg.output_dir = fresh_dir("tsb_out_c_" + tag);
    run_benchmark(cfg);
    return slurp(cfg.output_dir / "scores.csv");
  };
  const auto s1 = run_once(1, "t1");
  const auto s2 = run_once(1, "t1b");
  const auto s4 = run_once(4, "t4");
  CHECK(s1 == s2);
  CHECK(s1 == s4);
}

TEST_CASE("score export/import round-trips") {
  ScoreStore store;
  store.add({"D1", "kmeans-euc", "ari", 0.123456789, 10, 42});
  store.add({"D1", "kmeans-euc", "rand", 0.5, 10, 42});
  store.add({"A9", "agglo-euc", "ari", -0.04, 1, 0});
  store.sort_canonical();
  const auto dir = fresh_dir("tsb_export");
  save_scores_csv(store, dir / "scores.csv");
  const auto back = load_scores_csv(dir / "scores.csv");
  REQUIRE(back.records().size() == 3);
  // canonical order: A9 first
  CHECK(back.records()[0].dataset == "A9");
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.records()[i].dataset == store.records()[i].dataset);
    CHECK(back.records()[i].method == store.records()[i].method);
    CHECK(back.records()[i].measure == store.records()[i].measure);
    // six printed decimals
    CHECK(back.records()[i].value ==
          doctest::Approx(store.records()[i].value).epsilon(5e-7));
    CHECK(back.records()[i].runs == store.records()[i].runs);
    CHECK(back.records()[i].seed_base == store.records()[i].seed_base);
  }
  // second export of the re-imported store is byte-identical
  save_scores_csv(back, dir / "scores2.csv");
  CHECK(slurp(dir / "scores.csv") == slurp(dir / "scores2.csv"));
}

TEST_CASE("phase_report demands the methods it compares") {
  ScoreStore store;
  store.add({"D", "kmeans-euc", "ari", 0.5, 10, 0});
  CHECK_THROWS_AS(phase_report(store, 2), MissingMethod);
  try {
    phase_report(store, 2);
  } catch (const MissingMethod& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cmeans-euc") != std::string::npos);
    CHECK(msg.find("kmedoids-euc") != std::string::npos);
  }
}

TEST_CASE("phase reports on the reference score table") {
  const auto store =
      load_scores_csv(std::filesystem::path(TSBENCH_TESTS_DATA_DIR) / "reference_ari.csv");
  REQUIRE(store.records().size() == 112 * 8);

  const auto p1 = phase_report(store, 1);
  REQUIRE(p1.means.size() == 8);
  CHECK(p1.means.front().method == "agglo-euc");  // highest average
  CHECK(p1.means.back().method == "dpeaks-dtw");  // lowest average
  for (std::size_t i = 1; i < p1.means.size(); ++i)
    CHECK(p1.means[i].mean <= p1.means[i - 1].mean);

  const auto p2 = phase_report(store, 2);
  CHECK(p2.group_counts.size() == 3);
  CHECK(p2.pairs.size() == 3);

  const auto p5 = phase_report(store, 5);
  CHECK(p5.pairs.size() == 1);
  CHECK(p5.pairs[0].spread == doctest::Approx(0.021).epsilon(0.05));

  const auto p6 = phase_report(store, 6);
  CHECK(p6.pairs[0].spread == doctest::Approx(0.052).epsilon(0.05));

  // scatter data aligns with the dataset count
  CHECK(p6.pairs[0].datasets.size() == 112);
  CHECK(p6.pairs[0].scores_a.size() == 112);

  const auto dir = fresh_dir("tsb_phase");
  write_phase_files(p2, dir);
  CHECK(std::filesystem::exists(dir / "phase2.txt"));
  CHECK(std::filesystem::exists(dir / "phase2_counts.csv"));
  CHECK(std::filesystem::exists(dir / "scatter_phase2_kmeans-euc_vs_cmeans-euc.csv"));
}

TEST_CASE("random_baseline emits one row per k with sane values") {
  const auto rows = random_baseline(200, 2, 5, 10, 7);
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    CHECK(std::abs(row.mean.ari) < 0.1);
    CHECK(row.mean.rand > 0.3);
  }
  // homogeneity grows with k
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].mean.homogeneity > rows[i - 1].mean.homogeneity);
  const auto dir = fresh_dir("tsb_baseline");
  save_baseline_csv(rows, dir / "baseline.csv");
  const auto text = slurp(dir / "baseline.csv");
  CHECK(text.find("k,ari,rand,ami,fowlkes_mallows,homogeneity,completeness") == 0);
}

TEST_CASE("matrix cache files are written and reused") {
  BenchmarkConfig cfg;
  cfg.archive_dir = tiny_archive("d");
  cfg.datasets = {"Blobby"};
  cfg.methods = {MethodId::kmedoids_euc, MethodId::dpeaks_euc, MethodId::agglo_euc};
  cfg.runs = 1;
  cfg.output_dir = fresh_dir("tsb_out_d");
  const auto rep1 = run_benchmark(cfg);
  const auto cache = cfg.output_dir / "cache" / "Blobby_merged_euclidean.dm";
  CHECK(std::filesystem::exists(cache));
  // second run loads the cache and produces the same scores
  const auto rep2 = run_benchmark(cfg);
  CHECK(rep1.store.records().size() == rep2.store.records().size());
  for (std::size_t i = 0; i < rep1.store.records().size(); ++i)
    CHECK(rep1.store.records()[i] == rep2.store.records()[i]);
}
