#include "tsbench/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

namespace tsbench {

namespace {
long double pairs_of(long double m) { return m * (m - 1) / 2; }
}  // namespace

std::vector<int> to_cluster_ids(const std::vector<std::string>& labels) {
  std::unordered_map<std::string, int> ids;
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& l : labels) {
    const auto [it, inserted] = ids.emplace(l, static_cast<int>(ids.size()));
    out.push_back(it->second);
  }
  return out;
}

ContingencyTable contingency(const std::vector<int>& x, const std::vector<int>& y) {
  if (x.size() != y.size()) throw LengthMismatch(x.size(), y.size());
  int rmax = -1, cmax = -1;
  for (int v : x) rmax = std::max(rmax, v);
  for (int v : y) cmax = std::max(cmax, v);
  ContingencyTable ct;
  ct.counts.assign(static_cast<std::size_t>(rmax + 1),
                   std::vector<long long>(static_cast<std::size_t>(cmax + 1), 0));
  for (std::size_t i = 0; i < x.size(); ++i)
    ++ct.counts[static_cast<std::size_t>(x[i])][static_cast<std::size_t>(y[i])];
  ct.row_sums.assign(ct.rows(), 0);
  ct.col_sums.assign(ct.cols(), 0);
  for (std::size_t r = 0; r < ct.rows(); ++r) {
    for (std::size_t c = 0; c < ct.cols(); ++c) {
      ct.row_sums[r] += ct.counts[r][c];
      ct.col_sums[c] += ct.counts[r][c];
      ct.total += ct.counts[r][c];
    }
  }
  return ct;
}

double ScoreSet::by_index(std::size_t i) const {
  switch (i) {
    case 0: return ari;
    case 1: return rand;
    case 2: return ami;
    case 3: return fowlkes_mallows;
    case 4: return homogeneity;
    default: return completeness;
  }
}

void ScoreSet::set_by_index(std::size_t i, double v) {
  switch (i) {
    case 0: ari = v; break;
    case 1: rand = v; break;
    case 2: ami = v; break;
    case 3: fowlkes_mallows = v; break;
    case 4: homogeneity = v; break;
    default: completeness = v; break;
  }
}

double ari(const ContingencyTable& ct) {
  long double sum_ij = 0, sum_a = 0, sum_b = 0;
  for (const auto& row : ct.counts)
    for (long long v : row) sum_ij += pairs_of(static_cast<long double>(v));
  for (long long v : ct.row_sums) sum_a += pairs_of(static_cast<long double>(v));
  for (long long v : ct.col_sums) sum_b += pairs_of(static_cast<long double>(v));
  const long double all = pairs_of(static_cast<long double>(ct.total));
  if (all == 0) return 1.0;
  const long double expected = sum_a * sum_b / all;
  const long double denom = (sum_a + sum_b) / 2 - expected;
  if (denom == 0) return 1.0;  // both partitions trivial, hence identical
  return static_cast<double>((sum_ij - expected) / denom);
}

double mutual_information(const ContingencyTable& ct) {
  const double n = static_cast<double>(ct.total);
  double mi = 0.0;
  for (std::size_t r = 0; r < ct.rows(); ++r) {
    for (std::size_t c = 0; c < ct.cols(); ++c) {
      const long long v = ct.counts[r][c];
      if (v == 0) continue;
      const double p = static_cast<double>(v) / n;
      mi += p * (std::log(n * static_cast<double>(v)) -
                 std::log(static_cast<double>(ct.row_sums[r]) *
                          static_cast<double>(ct.col_sums[c])));
    }
  }
  return std::max(mi, 0.0);
}

namespace {
double entropy_of(const std::vector<long long>& sums, long long total) {
  const double n = static_cast<double>(total);
  double h = 0.0;
  for (long long v : sums) {
    if (v == 0) continue;
    const double p = static_cast<double>(v) / n;
    h -= p * std::log(p);
  }
  return std::max(h, 0.0);
}
}  // namespace

double entropy_rows(const ContingencyTable& ct) { return entropy_of(ct.row_sums, ct.total); }
double entropy_cols(const ContingencyTable& ct) { return entropy_of(ct.col_sums, ct.total); }

double expected_mutual_information(const ContingencyTable& ct) {
  const long long n = ct.total;
  const double nd = static_cast<double>(n);
  const double lg_n1 = std::lgamma(nd + 1.0);
  double emi = 0.0;
  for (std::size_t r = 0; r < ct.rows(); ++r) {
    const long long a = ct.row_sums[r];
    if (a == 0) continue;
    for (std::size_t c = 0; c < ct.cols(); ++c) {
      const long long b = ct.col_sums[c];
      if (b == 0) continue;
      const long long lo = std::max<long long>(1, a + b - n);
      const long long hi = std::min(a, b);
      for (long long nij = lo; nij <= hi; ++nij) {
        const double nijd = static_cast<double>(nij);
        const double term = nijd / nd *
                            (std::log(nd * nijd) -
                             std::log(static_cast<double>(a) * static_cast<double>(b)));
        const double log_prob =
            std::lgamma(static_cast<double>(a) + 1) + std::lgamma(static_cast<double>(b) + 1) +
            std::lgamma(nd - static_cast<double>(a) + 1) +
            std::lgamma(nd - static_cast<double>(b) + 1) - lg_n1 - std::lgamma(nijd + 1) -
            std::lgamma(static_cast<double>(a - nij) + 1) -
            std::lgamma(static_cast<double>(b - nij) + 1) -
            std::lgamma(nd - static_cast<double>(a) - static_cast<double>(b) + nijd + 1);
        emi += term * std::exp(log_prob);
      }
    }
  }
  return emi;
}

ScoreSet external_scores(const ContingencyTable& ct) {
  ScoreSet s;
  s.ari = ari(ct);

  long double sum_ij = 0, sum_a = 0, sum_b = 0;
  for (const auto& row : ct.counts)
    for (long long v : row) sum_ij += pairs_of(static_cast<long double>(v));
  for (long long v : ct.row_sums) sum_a += pairs_of(static_cast<long double>(v));
  for (long long v : ct.col_sums) sum_b += pairs_of(static_cast<long double>(v));
  const long double all = pairs_of(static_cast<long double>(ct.total));

  if (all == 0) {
    s.rand = 1.0;
  } else {
    const long double agree = all + 2 * sum_ij - sum_a - sum_b;
    s.rand = static_cast<double>(agree / all);
  }

  if (sum_a == 0 && sum_b == 0) {
    s.fowlkes_mallows = 1.0;  // both all-singletons: identical partitions
  } else if (sum_a == 0 || sum_b == 0) {
    s.fowlkes_mallows = 0.0;
  } else {
    s.fowlkes_mallows = static_cast<double>(sum_ij / std::sqrt(sum_a * sum_b));
  }

  const double mi = mutual_information(ct);
  const double h_rows = entropy_rows(ct);
  const double h_cols = entropy_cols(ct);
  s.homogeneity = h_rows > 0 ? mi / h_rows : 1.0;
  s.completeness = h_cols > 0 ? mi / h_cols : 1.0;

  const auto singleton_margins = [](const std::vector<long long>& sums) {
    return std::all_of(sums.begin(), sums.end(), [](long long v) { return v <= 1; });
  };
  const bool all_singletons = singleton_margins(ct.row_sums) && singleton_margins(ct.col_sums);
  const double normalizer = 0.5 * (h_rows + h_cols);
  if (normalizer == 0.0 || all_singletons) {
    // Both single clusters, or both all-singletons: identical partitions.
    // (In the all-singleton case every permutation preserves MI, so the
    // chance adjustment is 0/0 and the identical-partition convention wins.)
    s.ami = 1.0;
  } else {
    const double emi = expected_mutual_information(ct);
    double denom = normalizer - emi;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    denom = denom < 0 ? std::min(denom, -eps) : std::max(denom, eps);
    s.ami = (mi - emi) / denom;
  }
  return s;
}

ScoreSet external_scores(const std::vector<int>& truth, const std::vector<int>& pred) {
  return external_scores(contingency(truth, pred));
}

ScoreSet external_scores(const std::vector<std::string>& truth, const Assignment& pred) {
  return external_scores(contingency(to_cluster_ids(truth), pred.cluster_of));
}

double spread(const std::vector<double>& a1, const std::vector<double>& a2) {
  if (a1.size() != a2.size()) throw LengthMismatch(a1.size(), a2.size());
  if (a1.empty()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < a1.size(); ++i) {
    const double d = a1[i] - a2[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a1.size());
}

std::vector<long> winning_counts(const std::vector<std::vector<double>>& vectors, double threshold,
                                 TieRule tie) {
  std::vector<long> counts(vectors.size(), 0);
  if (vectors.empty()) return counts;
  const std::size_t n = vectors.front().size();
  for (const auto& v : vectors)
    if (v.size() != n) throw LengthMismatch(v.size(), n);
  for (std::size_t d = 0; d < n; ++d) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vectors) best = std::max(best, v[d]);
    const bool eligible = tie == TieRule::strict ? best >= threshold : best > threshold;
    if (!eligible) continue;
    std::size_t winners = 0;
    for (const auto& v : vectors)
      if (v[d] == best) ++winners;
    for (std::size_t m = 0; m < vectors.size(); ++m) {
      if (vectors[m][d] != best) continue;
      if (tie == TieRule::award_all || winners == 1) ++counts[m];
    }
  }
  return counts;
}

RunAggregate aggregate_runs(const std::vector<ScoreSet>& runs) {
  RunAggregate agg;
  agg.runs = static_cast<int>(runs.size());
  if (runs.empty()) return agg;
  for (std::size_t i = 0; i < ScoreSet::names.size(); ++i) {
    double mean = 0.0;
    for (const auto& r : runs) mean += r.by_index(i);
    mean /= static_cast<double>(runs.size());
    double var = 0.0;
    for (const auto& r : runs) {
      const double d = r.by_index(i) - mean;
      var += d * d;
    }
    var /= static_cast<double>(runs.size());
    agg.mean.set_by_index(i, mean);
    agg.stddev.set_by_index(i, std::sqrt(var));
  }
  return agg;
}

}  // namespace tsbench
