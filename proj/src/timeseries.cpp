#include "tsbench/timeseries.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace tsbench {

bool TimeSeries::is_finite() const noexcept {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

TimeSeries z_normalize(const TimeSeries& t) {
  const std::size_t n = t.size();
  TimeSeries out;
  out.values.resize(n);
  if (n == 0) return out;

  double mean = 0.0;
  for (double v : t.values) mean += v;
  mean /= static_cast<double>(n);

  double var = 0.0;
  for (double v : t.values) {
    const double d = v - mean;
    var += d * d;
  }
  var /= static_cast<double>(n);
  const double sigma = std::sqrt(var);

  if (sigma == 0.0) return out;  // constant series: all zeros
  for (std::size_t i = 0; i < n; ++i) out.values[i] = (t.values[i] - mean) / sigma;
  return out;
}

namespace {

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_value(std::string_view tok, const std::filesystem::path& file, std::size_t line_no) {
  if (lowercase(std::string(tok)) == "nan") return std::nan("");
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last) {
    throw ParseError(file.string() + ":" + std::to_string(line_no) + ": bad value '" +
                     std::string(tok) + "'");
  }
  return v;
}

void load_ucr_file(const std::filesystem::path& path, LabeledDataset& ds) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string_view rest(line);
    std::string label;
    TimeSeries ts;
    bool first = true;
    while (!rest.empty()) {
      const auto tab = rest.find('\t');
      std::string_view tok = rest.substr(0, tab);
      rest = (tab == std::string_view::npos) ? std::string_view{} : rest.substr(tab + 1);
      if (first) {
        if (tok.empty()) {
          throw ParseError(path.string() + ":" + std::to_string(line_no) + ": empty label");
        }
        label = std::string(tok);
        first = false;
      } else {
        ts.values.push_back(parse_value(tok, path, line_no));
      }
    }
    if (first) continue;
    if (ts.values.empty()) {
      throw ParseError(path.string() + ":" + std::to_string(line_no) + ": no values after label");
    }
    ds.labels.push_back(std::move(label));
    ds.series.push_back(std::move(ts));
  }
}

}  // namespace

int LabeledDataset::num_classes() const {
  std::set<std::string> distinct;
  for (const auto& l : labels) {
    if (lowercase(l) == "noise") continue;
    distinct.insert(l);
  }
  return static_cast<int>(distinct.size());
}

std::string to_string(MergePolicy p) {
  switch (p) {
    case MergePolicy::merged: return "merged";
    case MergePolicy::train_only: return "train_only";
    case MergePolicy::test_only: return "test_only";
  }
  return "merged";
}

MergePolicy merge_policy_from_string(const std::string& s) {
  if (s == "merged") return MergePolicy::merged;
  if (s == "train_only" || s == "train") return MergePolicy::train_only;
  if (s == "test_only" || s == "test") return MergePolicy::test_only;
  throw Error("unknown merge policy '" + s + "'");
}

LabeledDataset load_ucr_dataset(const std::filesystem::path& train_path,
                                const std::filesystem::path& test_path, MergePolicy policy) {
  LabeledDataset ds;
  const bool want_train = policy != MergePolicy::test_only;
  const bool want_test = policy != MergePolicy::train_only;
  if (want_train && !train_path.empty()) load_ucr_file(train_path, ds);
  if (want_test && !test_path.empty()) load_ucr_file(test_path, ds);
  return ds;
}

LabeledDataset load_archive_dataset(const std::filesystem::path& archive_dir, const std::string& name,
                                MergePolicy policy) {
  const auto dir = archive_dir / name;
  auto ds = load_ucr_dataset(dir / (name + "_TRAIN.tsv"), dir / (name + "_TEST.tsv"), policy);
  ds.name = name;
  return ds;
}

void save_ucr_file(const LabeledDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  char buf[64];
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out << ds.labels[i];
    for (double v : ds.series[i].values) {
      if (std::isnan(v)) {
        out << "\tNaN";
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << '\t' << buf;
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

AdmissibilityReport filter_admissible(const LabeledDataset& ds) {
  AdmissibilityReport rep;
  if (ds.size() == 0) {
    rep.reasons.push_back("empty");
    return rep;
  }
  const std::size_t n = ds.series.front().size();
  bool uniform = true, finite = true;
  for (const auto& s : ds.series) {
    if (s.size() != n) uniform = false;
    if (!s.is_finite()) finite = false;
  }
  if (!uniform) rep.reasons.push_back("unequal_length");
  if (!finite) rep.reasons.push_back("nan_values");
  if (ds.num_classes() < 2) rep.reasons.push_back("single_class");
  rep.admissible = rep.reasons.empty();
  return rep;
}

}  // namespace tsbench
