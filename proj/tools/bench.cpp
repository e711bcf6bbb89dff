#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsbench/harness.hpp"

using namespace tsbench;

int main(int argc, char** argv) {
  CLI::App app{"Time series clustering benchmark harness"};
  app.require_subcommand(1);

  // --- run ---
  auto* run = app.add_subcommand("run", "Run the benchmark over a UCR-layout archive");
  BenchmarkConfig cfg;
  std::string archive_dir;
  if (const char* env = std::getenv("BENCH_ARCHIVE_DIR")) archive_dir = env;
  std::vector<std::string> method_names;
  std::string merge_policy = "merged";
  std::string dp_assign = "closest";
  std::string out_dir = "bench-out";
  bool no_cache = false;
  run->add_option("--archive-dir", archive_dir, "Archive root (default: $BENCH_ARCHIVE_DIR)");
  run->add_option("--methods", method_names,
                  "Subset of: kmeans-euc kmedoids-euc cmeans-euc kmeans-shape kmeans-dtw "
                  "dpeaks-euc dpeaks-dtw agglo-euc (default: all)")
      ->delimiter(',');
  run->add_option("--datasets", cfg.datasets, "Dataset name filter (default: all)")
      ->delimiter(',');
  run->add_option("--runs", cfg.runs, "Runs per non-deterministic method");
  run->add_option("--seed", cfg.base_seed, "Base seed; run r uses seed + r");
  run->add_option("--window-frac", cfg.window_fraction, "DTW band as a fraction of length");
  run->add_option("--neighbor-frac", cfg.neighbor_fraction, "Density Peaks neighbor fraction");
  run->add_option("--merge-policy", merge_policy, "merged | train_only | test_only");
  run->add_option("--dp-assign", dp_assign, "closest | chain (Density Peaks assignment)");
  run->add_option("--threads", cfg.threads, "Worker threads");
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--no-cache", no_cache, "Disable the on-disk distance matrix cache");

  // --- report ---
  auto* report = app.add_subcommand("report", "Print a phase report from a stored run");
  int phase = 1;
  std::string store_dir = "bench-out";
  PhaseOptions popts;
  std::string ties = "strict";
  std::string report_out;
  report->add_option("--phase", phase, "Phase 1..6")->required();
  report->add_option("--store", store_dir, "Directory containing scores.csv, or a score CSV");
  report->add_option("--measure", popts.measure, "Index to report (default ari)");
  report->add_option("--threshold", popts.threshold, "Winning-count floor (default 0.05)");
  report->add_option("--ties", ties,
                     "strict | award-all (award-all models tables rounded before comparison)");
  report->add_option("--out", report_out, "Also write report files to this directory");

  // --- baseline ---
  auto* baseline = app.add_subcommand("baseline", "Chance-level curves from random assignments");
  int points = 1000, k_min = 2, k_max = 10, trials = 100;
  std::uint64_t bl_seed = 0;
  std::string bl_out = "baseline.csv";
  baseline->add_option("--points", points, "Points per trial");
  baseline->add_option("--k-min", k_min, "Smallest cluster count");
  baseline->add_option("--k-max", k_max, "Largest cluster count");
  baseline->add_option("--trials", trials, "Trials per k");
  baseline->add_option("--seed", bl_seed, "RNG seed");
  baseline->add_option("--out", bl_out, "Output CSV");

  // --- scores ---
  auto* scores = app.add_subcommand("scores", "Re-export a stored run's scores");
  std::string fmt = "csv";
  std::string scores_store = "bench-out";
  std::string scores_out;
  scores->add_option("--format", fmt, "csv | json");
  scores->add_option("--store", scores_store, "Directory containing scores.csv");
  scores->add_option("--out", scores_out, "Output file (default: stdout path <store>/export.<fmt>)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (archive_dir.empty()) {
        std::cerr << "error: no archive directory (use --archive-dir or BENCH_ARCHIVE_DIR)\n";
        return 1;
      }
      cfg.archive_dir = archive_dir;
      if (!method_names.empty()) {
        cfg.methods.clear();
        for (const auto& name : method_names) cfg.methods.push_back(method_from_string(name));
      }
      cfg.merge_policy = merge_policy_from_string(merge_policy);
      cfg.dp_assign_mode = dp_assign == "chain"
                               ? DensityPeaksParams::AssignMode::higher_density_chain
                               : DensityPeaksParams::AssignMode::closest_centroid;
      cfg.output_dir = out_dir;
      cfg.cache_matrices = !no_cache;

      const RunReport rep = run_benchmark(cfg);
      std::size_t admissible = 0;
      for (const auto& d : rep.datasets)
        if (d.admissible) ++admissible;
      std::cout << "datasets: " << rep.datasets.size() << " scanned, " << admissible
                << " admissible\n";
      for (const auto& d : rep.datasets) {
        if (d.admissible) continue;
        std::cout << "  skipped " << d.name << ":";
        for (const auto& r : d.reasons) std::cout << ' ' << r;
        std::cout << '\n';
      }
      for (const auto& t : rep.tasks)
        if (t.status == "failed")
          std::cout << "  failed " << t.dataset << " / " << t.method << ": " << t.detail << '\n';
      std::cout << "records: " << rep.store.records().size() << " -> " << out_dir
                << "/scores.csv\n";
      if (rep.store.empty()) std::cout << "warning: empty archive, nothing to do\n";
      return rep.failures > 0 ? 2 : 0;
    }

    if (*report) {
      popts.tie = ties == "award-all" ? TieRule::award_all : TieRule::strict;
      std::filesystem::path store_path(store_dir);
      if (!std::filesystem::is_regular_file(store_path)) store_path /= "scores.csv";
      const ScoreStore store = load_scores_csv(store_path);
      const PhaseReport rep = phase_report(store, phase, popts);
      std::cout << rep.to_text();
      if (!report_out.empty()) write_phase_files(rep, report_out);
      return 0;
    }

    if (*baseline) {
      const auto rows = random_baseline(points, k_min, k_max, trials, bl_seed);
      save_baseline_csv(rows, bl_out);
      std::cout << "wrote " << bl_out << '\n';
      return 0;
    }

    if (*scores) {
      const ScoreStore store =
          load_scores_csv(std::filesystem::path(scores_store) / "scores.csv");
      if (store.empty()) {
        std::cerr << "error: empty store\n";
        return 1;
      }
      std::filesystem::path out = scores_out.empty()
                                      ? std::filesystem::path(scores_store) / ("export." + fmt)
                                      : std::filesystem::path(scores_out);
      if (fmt == "csv") {
        save_scores_csv(store, out);
      } else if (fmt == "json") {
        save_scores_json(store, out);
      } else {
        std::cerr << "error: unknown format '" << fmt << "'\n";
        return 1;
      }
      std::cout << "wrote " << out.string() << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
