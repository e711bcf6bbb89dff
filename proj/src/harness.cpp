#include "tsbench/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "tsbench/distances.hpp"
#include "tsbench/rng.hpp"

namespace tsbench {

using nlohmann::json;

std::string to_string(MethodId m) {
  switch (m) {
    case MethodId::kmeans_euc: return "kmeans-euc";
    case MethodId::kmedoids_euc: return "kmedoids-euc";
    case MethodId::cmeans_euc: return "cmeans-euc";
    case MethodId::kmeans_shape: return "kmeans-shape";
    case MethodId::kmeans_dtw: return "kmeans-dtw";
    case MethodId::dpeaks_euc: return "dpeaks-euc";
    case MethodId::dpeaks_dtw: return "dpeaks-dtw";
    case MethodId::agglo_euc: return "agglo-euc";
  }
  return "kmeans-euc";
}

MethodId method_from_string(const std::string& s) {
  for (MethodId m : kAllMethods)
    if (to_string(m) == s) return m;
  throw Error("unknown method '" + s + "'");
}

bool method_is_deterministic(MethodId m) {
  switch (m) {
    case MethodId::dpeaks_euc:
    case MethodId::dpeaks_dtw:
    case MethodId::agglo_euc: return true;
    default: return false;
  }
}

void ScoreStore::add(ScoreRecord rec) { records_.push_back(std::move(rec)); }

void ScoreStore::sort_canonical() {
  std::sort(records_.begin(), records_.end(), [](const ScoreRecord& a, const ScoreRecord& b) {
    return std::tie(a.dataset, a.method, a.measure) < std::tie(b.dataset, b.method, b.measure);
  });
}

std::vector<std::string> ScoreStore::datasets() const {
  std::set<std::string> names;
  for (const auto& r : records_) names.insert(r.dataset);
  return {names.begin(), names.end()};
}

bool ScoreStore::has_method(const std::string& method) const {
  return std::any_of(records_.begin(), records_.end(),
                     [&](const ScoreRecord& r) { return r.method == method; });
}

std::optional<double> ScoreStore::value(const std::string& dataset, const std::string& method,
                                        const std::string& measure) const {
  for (const auto& r : records_) {
    if (r.dataset == dataset && r.method == method && r.measure == measure) return r.value;
  }
  return std::nullopt;
}

std::vector<std::string> ScoreStore::datasets_with(const std::vector<std::string>& methods,
                                                   const std::string& measure) const {
  std::map<std::string, std::set<std::string>> present;  // dataset -> methods with the measure
  for (const auto& r : records_) {
    if (r.measure == measure) present[r.dataset].insert(r.method);
  }
  std::vector<std::string> out;
  for (const auto& [name, have] : present) {
    const bool all = std::all_of(methods.begin(), methods.end(),
                                 [&](const std::string& m) { return have.count(m) > 0; });
    if (all) out.push_back(name);
  }
  return out;  // map iteration is already name-sorted
}

std::vector<double> ScoreStore::accuracy_vector(const std::string& method,
                                                const std::string& measure,
                                                const std::vector<std::string>& datasets) const {
  std::map<std::string, double> by_dataset;
  for (const auto& r : records_) {
    if (r.method == method && r.measure == measure) by_dataset[r.dataset] = r.value;
  }
  std::vector<double> out;
  out.reserve(datasets.size());
  for (const auto& name : datasets) {
    const auto it = by_dataset.find(name);
    if (it == by_dataset.end()) throw Error("no " + measure + " for " + method + " on " + name);
    out.push_back(it->second);
  }
  return out;
}

namespace {

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

void save_scores_csv(const ScoreStore& store, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "dataset,method,measure,value,runs,seed_base\n";
  for (const auto& r : store.records()) {
    out << r.dataset << ',' << r.method << ',' << r.measure << ',' << format_value(r.value) << ','
        << r.runs << ',' << r.seed_base << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

void save_scores_json(const ScoreStore& store, const std::filesystem::path& path) {
  json arr = json::array();
  for (const auto& r : store.records()) {
    arr.push_back({{"dataset", r.dataset},
                   {"method", r.method},
                   {"measure", r.measure},
                   {"value", std::stod(format_value(r.value))},
                   {"runs", r.runs},
                   {"seed_base", r.seed_base}});
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << arr.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

ScoreStore load_scores_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  ScoreStore store;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line_no == 1) continue;  // header
    std::stringstream ss(line);
    ScoreRecord rec;
    std::string value, runs, seed;
    if (!std::getline(ss, rec.dataset, ',') || !std::getline(ss, rec.method, ',') ||
        !std::getline(ss, rec.measure, ',') || !std::getline(ss, value, ',') ||
        !std::getline(ss, runs, ',') || !std::getline(ss, seed)) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad score row");
    }
    try {
      rec.value = std::stod(value);
      rec.runs = std::stoi(runs);
      rec.seed_base = std::stoull(seed);
    } catch (const std::exception&) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad numeric field");
    }
    store.add(std::move(rec));
  }
  return store;
}

namespace {

/// Builds (or loads) a dataset's distance matrix once and shares it between
/// tasks; concurrent requesters wait on the same future.
class MatrixCache {
 public:
  MatrixCache(std::filesystem::path dir, bool use_disk) : dir_(std::move(dir)), disk_(use_disk) {}

  std::shared_ptr<const DistanceMatrix> get(const LabeledDataset& ds, Measure measure,
                                            const DtwParams& params, const std::string& key) {
    std::promise<std::shared_ptr<const DistanceMatrix>> prom;
    std::shared_future<std::shared_ptr<const DistanceMatrix>> fut;
    bool builder = false;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = futures_.find(key);
      if (it != futures_.end()) {
        fut = it->second;
      } else {
        fut = prom.get_future().share();
        futures_.emplace(key, fut);
        builder = true;  // this thread computes; others wait on the future
      }
    }
    if (builder) {
      try {
        prom.set_value(std::make_shared<DistanceMatrix>(load_or_compute(ds, measure, params, key)));
      } catch (...) {
        prom.set_exception(std::current_exception());
      }
    }
    return fut.get();
  }

 private:
  DistanceMatrix load_or_compute(const LabeledDataset& ds, Measure measure,
                                 const DtwParams& params, const std::string& key) {
    const auto file = dir_ / (key + ".dm");
    if (disk_ && std::filesystem::exists(file)) {
      try {
        DistanceMatrix dm = DistanceMatrix::load(file);
        if (dm.size() == ds.size() && dm.measure() == measure) return dm;
      } catch (const Error&) {
        // fall through to recompute
      }
    }
    DistanceMatrix dm = distance_matrix(ds, measure, params);
    if (disk_) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (!ec) {
        try {
          dm.save(file);
        } catch (const Error&) {
          // cache write failures never fail the run
        }
      }
    }
    return dm;
  }

  std::filesystem::path dir_;
  bool disk_;
  std::mutex mutex_;
  std::map<std::string, std::shared_future<std::shared_ptr<const DistanceMatrix>>> futures_;
};

/// Nearest-rank quantile of DTW distances over a seeded pair sample; TADPole's
/// neighborhood cutoff comes from here without materializing the full matrix.
double sampled_dtw_cutoff(const LabeledDataset& ds, const DtwParams& params,
                          double neighbor_fraction, std::uint64_t seed) {
  const std::size_t n = ds.size();
  const std::size_t total_pairs = n * (n - 1) / 2;
  const std::size_t want = std::min<std::size_t>(
      total_pairs, std::max<std::size_t>(2000, 4 * n));
  Rng rng(seed);
  std::vector<double> values;
  values.reserve(want);
  if (want == total_pairs) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        values.push_back(dtw(ds.series[i], ds.series[j], params));
  } else {
    for (std::size_t s = 0; s < want; ++s) {
      const auto i = static_cast<std::size_t>(rng.below(n));
      auto j = static_cast<std::size_t>(rng.below(n - 1));
      if (j >= i) ++j;
      values.push_back(dtw(ds.series[i], ds.series[j], params));
    }
  }
  std::sort(values.begin(), values.end());
  auto rank = static_cast<std::size_t>(
      std::ceil(neighbor_fraction * static_cast<double>(values.size())));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  const double d = values[rank - 1];
  if (d > 0.0) return d;
  for (double v : values)
    if (v > 0.0) return v;
  return 1.0;
}

std::vector<ScoreRecord> score_records(const std::string& dataset, const std::string& method,
                                       const RunAggregate& agg, std::uint64_t seed_base) {
  std::vector<ScoreRecord> out;
  out.reserve(ScoreSet::names.size());
  for (std::size_t i = 0; i < ScoreSet::names.size(); ++i) {
    out.push_back({dataset, method, std::string(ScoreSet::names[i]), agg.mean.by_index(i),
                   agg.runs, seed_base});
  }
  return out;
}

std::string config_canonical(const BenchmarkConfig& cfg) {
  std::ostringstream ss;
  ss << "archive=" << cfg.archive_dir.string() << ";methods=";
  for (MethodId m : cfg.methods) ss << to_string(m) << '+';
  ss << ";datasets=";
  for (const auto& d : cfg.datasets) ss << d << '+';
  ss << ";runs=" << cfg.runs << ";seed=" << cfg.base_seed
     << ";window=" << format_value(cfg.window_fraction)
     << ";neighbor=" << format_value(cfg.neighbor_fraction)
     << ";merge=" << to_string(cfg.merge_policy) << ";dp_mode="
     << (cfg.dp_assign_mode == DensityPeaksParams::AssignMode::closest_centroid
             ? "closest_centroid"
             : "higher_density_chain");
  return ss.str();
}

}  // namespace

RunReport run_benchmark(const BenchmarkConfig& cfg) {
  if (cfg.methods.empty()) throw Error("no methods selected");
  if (cfg.runs < 1) throw Error("runs must be >= 1");

  RunReport report;

  // Archive scan: either the explicit list or every <dir>/<name>/<name>_TRAIN.tsv.
  std::vector<std::string> names = cfg.datasets;
  if (names.empty()) {
    if (std::filesystem::exists(cfg.archive_dir)) {
      for (const auto& entry : std::filesystem::directory_iterator(cfg.archive_dir)) {
        if (!entry.is_directory()) continue;
        const auto name = entry.path().filename().string();
        if (std::filesystem::exists(entry.path() / (name + "_TRAIN.tsv"))) names.push_back(name);
      }
    }
    std::sort(names.begin(), names.end());
  }

  struct LoadedDataset {
    LabeledDataset data;
    DatasetInfo info;
  };
  std::vector<LoadedDataset> loaded;
  for (const auto& name : names) {
    LoadedDataset entry;
    entry.info.name = name;
    try {
      entry.data = load_archive_dataset(cfg.archive_dir, name, cfg.merge_policy);
      const auto rep = filter_admissible(entry.data);
      entry.info.n_obs = entry.data.size();
      entry.info.length = entry.data.length();
      entry.info.k = entry.data.num_classes();
      entry.info.admissible = rep.admissible;
      entry.info.reasons = rep.reasons;
    } catch (const Error& e) {
      entry.info.admissible = false;
      entry.info.reasons = {std::string("load_error: ") + e.what()};
    }
    report.datasets.push_back(entry.info);
    if (entry.info.admissible) loaded.push_back(std::move(entry));
  }

  struct Task {
    const LoadedDataset* ds = nullptr;
    MethodId method{};
  };
  std::vector<Task> tasks;
  for (const auto& entry : loaded)
    for (MethodId m : cfg.methods) tasks.push_back({&entry, m});

  struct TaskResult {
    std::vector<ScoreRecord> records;
    TaskStatus status;
  };
  std::vector<TaskResult> results(tasks.size());

  MatrixCache cache(cfg.output_dir.empty() ? std::filesystem::path("cache")
                                           : cfg.output_dir / "cache",
                    cfg.cache_matrices && !cfg.output_dir.empty());
  const DtwParams dtw_params{cfg.window_fraction};

  const auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    const LabeledDataset& ds = task.ds->data;
    const std::string method = to_string(task.method);
    TaskResult& res = results[t];
    res.status = {ds.name, method, "ok", "", 0};
    try {
      const int k = ds.num_classes();
      const int runs = method_is_deterministic(task.method) ? 1 : cfg.runs;
      res.status.runs = runs;
      std::vector<ScoreSet> run_scores;
      for (int run = 0; run < runs; ++run) {
        FitConfig fit;
        fit.k = k;
        fit.seed = cfg.base_seed + static_cast<std::uint64_t>(run);
        Assignment asg;
        switch (task.method) {
          case MethodId::kmeans_euc:
            asg = kmeans_fit(ds, Measure::euclidean, CentroidKind::arithmetic_mean, fit);
            break;
          case MethodId::kmeans_dtw:
            asg = kmeans_fit(ds, Measure::dtw, CentroidKind::dba, fit, dtw_params);
            break;
          case MethodId::kmeans_shape:
            asg = kmeans_fit(ds, Measure::sbd, CentroidKind::shape_extraction, fit);
            break;
          case MethodId::cmeans_euc: asg = fuzzy_cmeans_fit(ds, fit); break;
          case MethodId::kmedoids_euc: {
            const auto dm = cache.get(ds, Measure::euclidean, dtw_params,
                                      ds.name + "_" + to_string(cfg.merge_policy) + "_euclidean");
            asg = kmedoids_fit(*dm, fit);
            break;
          }
          case MethodId::dpeaks_euc: {
            const auto dm = cache.get(ds, Measure::euclidean, dtw_params,
                                      ds.name + "_" + to_string(cfg.merge_policy) + "_euclidean");
            DensityPeaksParams dp;
            dp.neighbor_fraction = cfg.neighbor_fraction;
            dp.assignment_mode = cfg.dp_assign_mode;
            dp.d = cutoff_distance(*dm, cfg.neighbor_fraction);
            asg = density_peaks_fit(*dm, dp, k).assignment;
            break;
          }
          case MethodId::dpeaks_dtw: {
            DensityPeaksParams dp;
            dp.neighbor_fraction = cfg.neighbor_fraction;
            dp.assignment_mode = cfg.dp_assign_mode;
            dp.d = sampled_dtw_cutoff(ds, dtw_params, cfg.neighbor_fraction,
                                      cfg.base_seed ^ fnv1a(ds.name));
            asg = tadpole_fit(ds, dtw_params, dp, k).assignment;
            break;
          }
          case MethodId::agglo_euc: {
            const auto dm = cache.get(ds, Measure::euclidean, dtw_params,
                                      ds.name + "_" + to_string(cfg.merge_policy) + "_euclidean");
            asg = agglomerative_fit(*dm, k, Linkage::ward);
            break;
          }
        }
        run_scores.push_back(external_scores(ds.labels, asg));
      }
      res.records = score_records(ds.name, method, aggregate_runs(run_scores), cfg.base_seed);
    } catch (const std::exception& e) {
      res.records.clear();
      res.status.status = "failed";
      res.status.detail = e.what();
    }
  };

  const unsigned threads = std::max(1u, cfg.threads);
  if (threads == 1 || tasks.size() <= 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1))
          run_task(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (auto& res : results) {
    report.tasks.push_back(res.status);
    if (res.status.status == "failed") ++report.failures;
    for (auto& rec : res.records) report.store.add(std::move(rec));
  }
  report.store.sort_canonical();

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    save_scores_csv(report.store, cfg.output_dir / "scores.csv");
    save_scores_json(report.store, cfg.output_dir / "scores.json");

    json manifest;
    manifest["version"] = "tsbench 0.1.0";
    const auto canon = config_canonical(cfg);
    manifest["config_hash"] = fnv1a(canon);
    manifest["config"] = canon;
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    manifest["created"] = stamp;
    manifest["datasets"] = json::array();
    for (const auto& d : report.datasets) {
      manifest["datasets"].push_back({{"name", d.name},
                                      {"n_obs", d.n_obs},
                                      {"length", d.length},
                                      {"k", d.k},
                                      {"admissible", d.admissible},
                                      {"reasons", d.reasons}});
    }
    manifest["tasks"] = json::array();
    for (const auto& t : report.tasks) {
      manifest["tasks"].push_back({{"dataset", t.dataset},
                                   {"method", t.method},
                                   {"status", t.status},
                                   {"detail", t.detail},
                                   {"runs", t.runs}});
    }
    std::ofstream out(cfg.output_dir / "manifest.json");
    out << manifest.dump(2) << '\n';
  }
  return report;
}

namespace {

struct PhaseSpec {
  std::string title;
  std::vector<std::string> methods;
  bool with_means = false;
  bool with_group_counts = false;
};

PhaseSpec phase_spec(int phase) {
  switch (phase) {
    case 1:
      return {"All eight methods, average score per method",
              {"agglo-euc", "kmeans-dtw", "kmeans-euc", "cmeans-euc", "kmedoids-euc",
               "kmeans-shape", "dpeaks-euc", "dpeaks-dtw"},
              true,
              false};
    case 2:
      return {"Partitional algorithms under Euclidean distance",
              {"kmeans-euc", "cmeans-euc", "kmedoids-euc"},
              false,
              true};
    case 3:
      return {"Distance measures under K-means",
              {"kmeans-dtw", "kmeans-shape", "kmeans-euc"},
              false,
              true};
    case 4:
      return {"Algorithm categories under Euclidean distance",
              {"agglo-euc", "kmeans-euc", "dpeaks-euc"},
              false,
              true};
    case 5:
      return {"Euclidean vs DTW under Density Peaks", {"dpeaks-euc", "dpeaks-dtw"}, false, false};
    case 6:
      return {"Density Peaks vs K-means under DTW", {"kmeans-dtw", "dpeaks-dtw"}, false, false};
    default: throw Error("phase must be in 1..6");
  }
}

}  // namespace

PhaseReport phase_report(const ScoreStore& store, int phase, const PhaseOptions& opts) {
  const PhaseSpec spec = phase_spec(phase);
  std::vector<std::string> missing;
  for (const auto& m : spec.methods)
    if (!store.has_method(m)) missing.push_back(m);
  if (!missing.empty()) {
    std::string msg = "missing methods:";
    for (const auto& m : missing) msg += " " + m;
    throw MissingMethod(msg);
  }

  PhaseReport rep;
  rep.phase = phase;
  rep.title = spec.title;
  rep.measure = opts.measure;
  rep.methods = spec.methods;

  const auto datasets = store.datasets_with(spec.methods, opts.measure);
  std::vector<std::vector<double>> vectors;
  vectors.reserve(spec.methods.size());
  for (const auto& m : spec.methods)
    vectors.push_back(store.accuracy_vector(m, opts.measure, datasets));

  if (spec.with_means) {
    for (std::size_t m = 0; m < spec.methods.size(); ++m) {
      double mean = 0.0;
      for (double v : vectors[m]) mean += v;
      mean /= vectors[m].empty() ? 1.0 : static_cast<double>(vectors[m].size());
      double var = 0.0;
      for (double v : vectors[m]) {
        const double d = v - mean;
        var += d * d;
      }
      var /= vectors[m].empty() ? 1.0 : static_cast<double>(vectors[m].size());
      rep.means.push_back({spec.methods[m], mean, std::sqrt(var)});
    }
    std::sort(rep.means.begin(), rep.means.end(),
              [](const auto& a, const auto& b) { return a.mean > b.mean; });
  }

  if (spec.with_group_counts) rep.group_counts = winning_counts(vectors, opts.threshold, opts.tie);

  if (phase >= 2) {
    for (std::size_t i = 0; i < spec.methods.size(); ++i) {
      for (std::size_t j = i + 1; j < spec.methods.size(); ++j) {
        PairComparison pc;
        pc.method_a = spec.methods[i];
        pc.method_b = spec.methods[j];
        const auto counts = winning_counts({vectors[i], vectors[j]}, opts.threshold, opts.tie);
        pc.wins_a = counts[0];
        pc.wins_b = counts[1];
        pc.spread = spread(vectors[i], vectors[j]);
        pc.datasets = datasets;
        pc.scores_a = vectors[i];
        pc.scores_b = vectors[j];
        rep.pairs.push_back(std::move(pc));
      }
    }
  }
  return rep;
}

std::string PhaseReport::to_text() const {
  std::ostringstream ss;
  ss << "Phase " << phase << ": " << title << " (measure: " << measure << ")\n";
  if (!means.empty()) {
    for (const auto& m : means) {
      ss << "  " << m.method << "  mean " << format_value(m.mean) << "  stddev "
         << format_value(m.stddev) << '\n';
    }
  }
  if (!group_counts.empty()) {
    ss << "  group winning counts:\n";
    for (std::size_t i = 0; i < methods.size(); ++i)
      ss << "    " << methods[i] << "  " << group_counts[i] << '\n';
  }
  for (const auto& p : pairs) {
    ss << "  " << p.method_a << " vs " << p.method_b << ": wins " << p.wins_a << " / " << p.wins_b
       << ", spread " << format_value(p.spread) << '\n';
  }
  return ss.str();
}

void write_phase_files(const PhaseReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string stem = "phase" + std::to_string(report.phase);
  {
    std::ofstream out(dir / (stem + ".txt"));
    if (!out) throw IoError("cannot write phase report");
    out << report.to_text();
  }
  {
    std::ofstream out(dir / (stem + "_summary.csv"));
    if (!out) throw IoError("cannot write phase summary");
    if (!report.means.empty()) {
      out << "method,mean,stddev\n";
      for (const auto& m : report.means)
        out << m.method << ',' << format_value(m.mean) << ',' << format_value(m.stddev) << '\n';
    } else {
      out << "method_a,method_b,wins_a,wins_b,spread\n";
      for (const auto& p : report.pairs) {
        out << p.method_a << ',' << p.method_b << ',' << p.wins_a << ',' << p.wins_b << ','
            << format_value(p.spread) << '\n';
      }
    }
  }
  if (!report.group_counts.empty()) {
    std::ofstream out(dir / (stem + "_counts.csv"));
    out << "method,wins\n";
    for (std::size_t i = 0; i < report.methods.size(); ++i)
      out << report.methods[i] << ',' << report.group_counts[i] << '\n';
  }
  for (const auto& p : report.pairs) {
    std::ofstream out(dir / ("scatter_" + stem + "_" + p.method_a + "_vs_" + p.method_b + ".csv"));
    out << "dataset," << p.method_a << ',' << p.method_b << '\n';
    for (std::size_t i = 0; i < p.datasets.size(); ++i) {
      out << p.datasets[i] << ',' << format_value(p.scores_a[i]) << ','
          << format_value(p.scores_b[i]) << '\n';
    }
  }
}

std::vector<BaselineRow> random_baseline(int n_points, int k_min, int k_max, int trials,
                                         std::uint64_t seed) {
  if (k_min < 2 || k_max < k_min || n_points < k_max) throw Error("bad baseline parameters");
  std::vector<BaselineRow> rows;
  Rng rng(seed);
  std::vector<int> truth(static_cast<std::size_t>(n_points));
  std::vector<int> pred(static_cast<std::size_t>(n_points));
  for (int k = k_min; k <= k_max; ++k) {
    std::vector<ScoreSet> scores;
    scores.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
      for (auto& v : truth) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      for (auto& v : pred) v = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      scores.push_back(external_scores(truth, pred));
    }
    rows.push_back({k, aggregate_runs(scores).mean});
  }
  return rows;
}

void save_baseline_csv(const std::vector<BaselineRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << "k";
  for (const auto& name : ScoreSet::names) out << ',' << name;
  out << '\n';
  for (const auto& row : rows) {
    out << row.k;
    for (std::size_t i = 0; i < ScoreSet::names.size(); ++i)
      out << ',' << format_value(row.mean.by_index(i));
    out << '\n';
  }
}

}  // namespace tsbench
