#include "tsbench/clustering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tsbench/rng.hpp"

namespace tsbench {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double series_distance(Measure m, const TimeSeries& a, const TimeSeries& b,
                       const DtwParams& params) {
  switch (m) {
    case Measure::euclidean: return euclidean(a, b);
    case Measure::dtw: return dtw(a, b, params);
    case Measure::sbd: return sbd(a, b);
  }
  return 0.0;
}

void require_fit_preconditions(std::size_t n, int k) {
  if (n == 0) throw Error("empty dataset");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw Error("k must be in [1, n_obs], got k=" + std::to_string(k) +
                " for n_obs=" + std::to_string(n));
}

TimeSeries arithmetic_mean(const LabeledDataset& ds, const std::vector<int>& members) {
  const std::size_t len = ds.length();
  TimeSeries out;
  out.values.assign(len, 0.0);
  for (int i : members)
    for (std::size_t t = 0; t < len; ++t) out[t] += ds.series[static_cast<std::size_t>(i)][t];
  for (std::size_t t = 0; t < len; ++t) out[t] /= static_cast<double>(members.size());
  return out;
}

/// Objective summed in a fixed order (ascending point index) so that
/// pointwise-dominated cost vectors give FP-dominated sums.
double squared_cost_sum(const std::vector<double>& point_cost) {
  double acc = 0.0;
  for (double v : point_cost) acc += v * v;
  return acc;
}
}  // namespace

bool centroid_compatible(CentroidKind kind, Measure measure) {
  switch (kind) {
    case CentroidKind::arithmetic_mean: return measure == Measure::euclidean;
    case CentroidKind::dba: return measure == Measure::dtw;
    case CentroidKind::shape_extraction: return measure == Measure::sbd;
    case CentroidKind::medoid: return true;
  }
  return false;
}

TimeSeries dba_centroid(const std::vector<TimeSeries>& members, const TimeSeries& current,
                        const DtwParams& params) {
  if (members.empty()) throw Error("dba_centroid: no members");
  const std::size_t n = current.size();
  const std::size_t w = params.window_for(n);
  std::vector<double> sums(n, 0.0);
  std::vector<long> counts(n, 0);
  std::vector<double> acc(n * n);

  for (const auto& member : members) {
    if (member.size() != n) throw LengthMismatch(member.size(), n);
    // Banded DP of squared costs; member indexes rows, centroid columns.
    std::fill(acc.begin(), acc.end(), kInf);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t jlo = (i >= w) ? i - w : 0;
      const std::size_t jhi = std::min(n - 1, i + w);
      for (std::size_t j = jlo; j <= jhi; ++j) {
        const double d = member[i] - current[j];
        const double cost = d * d;
        if (i == 0 && j == 0) {
          acc[0] = cost;
          continue;
        }
        double best = kInf;
        if (i > 0 && j > 0) best = acc[(i - 1) * n + (j - 1)];
        if (i > 0) best = std::min(best, acc[(i - 1) * n + j]);
        if (j > 0) best = std::min(best, acc[i * n + (j - 1)]);
        acc[i * n + j] = best + cost;
      }
    }
    // Backtrack, preferring diagonal, then the row step, then the column step.
    std::size_t i = n - 1, j = n - 1;
    while (true) {
      sums[j] += member[i];
      ++counts[j];
      if (i == 0 && j == 0) break;
      double best = kInf;
      int move = -1;  // 0 diag, 1 up, 2 left
      if (i > 0 && j > 0 && acc[(i - 1) * n + (j - 1)] < best) {
        best = acc[(i - 1) * n + (j - 1)];
        move = 0;
      }
      if (i > 0 && acc[(i - 1) * n + j] < best) {
        best = acc[(i - 1) * n + j];
        move = 1;
      }
      if (j > 0 && acc[i * n + (j - 1)] < best) {
        move = 2;
      }
      if (move == 0) {
        --i;
        --j;
      } else if (move == 1) {
        --i;
      } else {
        --j;
      }
    }
  }
  TimeSeries out;
  out.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = sums[t] / static_cast<double>(counts[t]);
  return out;
}

TimeSeries shape_extract(const std::vector<TimeSeries>& members, const TimeSeries& reference) {
  if (members.empty()) throw Error("shape_extract: no members");
  const std::size_t n = reference.size();
  using Matrix = Eigen::MatrixXd;
  using Vector = Eigen::VectorXd;

  Matrix scatter = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  bool any_signal = false;
  for (const auto& member : members) {
    if (member.size() != n) throw LengthMismatch(member.size(), n);
    const TimeSeries z = z_normalize(member);
    const long shift = sbd_with_shift(reference, member).shift;
    Vector aligned = Vector::Zero(static_cast<Eigen::Index>(n));
    for (std::size_t t = 0; t < n; ++t) {
      const long src = static_cast<long>(t) + shift;
      if (src >= 0 && src < static_cast<long>(n))
        aligned[static_cast<Eigen::Index>(t)] = z[static_cast<std::size_t>(src)];
    }
    if (aligned.squaredNorm() > 0) any_signal = true;
    scatter += aligned * aligned.transpose();
  }
  TimeSeries zeros;
  zeros.values.assign(n, 0.0);
  if (!any_signal) return zeros;  // degenerate scatter: all-constant members

  const Matrix centering =
      Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -
      Matrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                       1.0 / static_cast<double>(n));
  const Matrix centered = centering * scatter * centering;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(centered);
  const Vector principal = solver.eigenvectors().col(static_cast<Eigen::Index>(n) - 1);

  TimeSeries candidate;
  candidate.values.assign(principal.data(), principal.data() + n);
  candidate = z_normalize(candidate);
  TimeSeries negated = candidate;
  for (double& v : negated.values) v = -v;
  return sbd(candidate, reference) <= sbd(negated, reference) ? candidate : negated;
}

Assignment kmeans_fit(const LabeledDataset& ds, Measure measure, CentroidKind strategy,
                      const FitConfig& cfg, const DtwParams& dtw_params, FitTrace* trace) {
  if (strategy == CentroidKind::medoid)
    throw Error("kmeans_fit does not take the medoid strategy; use kmedoids_fit");
  if (!centroid_compatible(strategy, measure))
    throw Error("centroid strategy is incompatible with the distance measure");
  const std::size_t n = ds.size();
  const int k = cfg.k;
  require_fit_preconditions(n, k);

  Rng rng(cfg.seed);
  std::vector<TimeSeries> centroids;
  centroids.reserve(static_cast<std::size_t>(k));
  for (std::size_t idx : rng.sample_indices(n, static_cast<std::size_t>(k)))
    centroids.push_back(ds.series[idx]);

  std::vector<int> cluster_of(n, -1);
  std::vector<double> point_cost(n, 0.0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  bool converged = false;
  int iterations = 0;

  const auto dist_to = [&](std::size_t i, const TimeSeries& c) {
    return series_distance(measure, ds.series[i], c, dtw_params);
  };

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    ++iterations;
    // Assignment step: ties go to the lowest cluster index.
    bool changed = false;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInf;
      int bc = 0;
      for (int c = 0; c < k; ++c) {
        const double v = dist_to(i, centroids[static_cast<std::size_t>(c)]);
        if (v < best) {
          best = v;
          bc = c;
        }
      }
      if (bc != cluster_of[i]) changed = true;
      cluster_of[i] = bc;
      point_cost[i] = best;
      ++counts[static_cast<std::size_t>(bc)];
    }
    // Empty-cluster repair: re-seed from the farthest point of a cluster that
    // can spare one.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t pick = n;
      double worst = -kInf;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(cluster_of[i])] < 2) continue;
        if (point_cost[i] > worst) {
          worst = point_cost[i];
          pick = i;
        }
      }
      if (pick == n) throw Error("empty cluster repair failed");
      --counts[static_cast<std::size_t>(cluster_of[pick])];
      cluster_of[pick] = c;
      ++counts[static_cast<std::size_t>(c)];
      centroids[static_cast<std::size_t>(c)] = ds.series[pick];
      point_cost[pick] = dist_to(pick, centroids[static_cast<std::size_t>(c)]);
      changed = true;
    }
    const double j_assign = squared_cost_sum(point_cost);
    if (trace) trace->objective.push_back(j_assign);
    if (!changed) {
      converged = true;
      break;
    }

    // Centroid update, guarded per cluster: a candidate is kept only if it
    // does not increase the cluster's summed squared distance.
    std::vector<double> new_cost = point_cost;
    std::vector<TimeSeries> new_centroids = centroids;
    for (int c = 0; c < k; ++c) {
      std::vector<int> members;
      std::vector<TimeSeries> member_series;
      for (std::size_t i = 0; i < n; ++i) {
        if (cluster_of[i] == c) {
          members.push_back(static_cast<int>(i));
          member_series.push_back(ds.series[i]);
        }
      }
      TimeSeries candidate;
      switch (strategy) {
        case CentroidKind::arithmetic_mean: candidate = arithmetic_mean(ds, members); break;
        case CentroidKind::dba:
          candidate = dba_centroid(member_series, centroids[static_cast<std::size_t>(c)],
                                   dtw_params);
          break;
        case CentroidKind::shape_extraction:
          candidate = shape_extract(member_series, centroids[static_cast<std::size_t>(c)]);
          break;
        case CentroidKind::medoid: break;
      }
      double old_sum = 0.0, cand_sum = 0.0;
      std::vector<double> cand_cost(members.size());
      for (std::size_t mi = 0; mi < members.size(); ++mi) {
        const auto i = static_cast<std::size_t>(members[mi]);
        cand_cost[mi] = dist_to(i, candidate);
        old_sum += point_cost[i] * point_cost[i];
        cand_sum += cand_cost[mi] * cand_cost[mi];
      }
      if (cand_sum <= old_sum) {
        new_centroids[static_cast<std::size_t>(c)] = std::move(candidate);
        for (std::size_t mi = 0; mi < members.size(); ++mi)
          new_cost[static_cast<std::size_t>(members[mi])] = cand_cost[mi];
      }
    }
    const double j_update = squared_cost_sum(new_cost);
    if (j_update > j_assign) {
      // FP-flat update; keep the pre-update state and stop.
      converged = true;
      break;
    }
    centroids = std::move(new_centroids);
    point_cost = std::move(new_cost);
    if (trace) trace->objective.push_back(j_update);
  }

  if (trace) {
    trace->iterations = iterations;
    trace->converged = converged;
  }
  Assignment out;
  out.k = k;
  out.cluster_of = std::move(cluster_of);
  return out;
}

Assignment kmedoids_fit(const DistanceMatrix& dm, const FitConfig& cfg, FitTrace* trace) {
  const std::size_t n = dm.size();
  const int k = cfg.k;
  require_fit_preconditions(n, k);

  Rng rng(cfg.seed);
  std::vector<std::size_t> medoids = rng.sample_indices(n, static_cast<std::size_t>(k));

  std::vector<int> cluster_of(n, -1);
  std::vector<double> point_cost(n, 0.0);
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  bool converged = false;
  int iterations = 0;

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    ++iterations;
    bool changed = false;
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      double best = kInf;
      int bc = 0;
      for (int c = 0; c < k; ++c) {
        const double v = dm.at(i, medoids[static_cast<std::size_t>(c)]);
        if (v < best) {
          best = v;
          bc = c;
        }
      }
      if (bc != cluster_of[i]) changed = true;
      cluster_of[i] = bc;
      point_cost[i] = best;
      ++counts[static_cast<std::size_t>(bc)];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      std::size_t pick = n;
      double worst = -kInf;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(cluster_of[i])] < 2) continue;
        if (point_cost[i] > worst) {
          worst = point_cost[i];
          pick = i;
        }
      }
      if (pick == n) throw Error("empty cluster repair failed");
      --counts[static_cast<std::size_t>(cluster_of[pick])];
      cluster_of[pick] = c;
      ++counts[static_cast<std::size_t>(c)];
      medoids[static_cast<std::size_t>(c)] = pick;
      point_cost[pick] = 0.0;
      changed = true;
    }
    const double j_assign = squared_cost_sum(point_cost);
    if (trace) trace->objective.push_back(j_assign);
    if (!changed) {
      converged = true;
      break;
    }

    // Medoid update: the member minimizing the summed squared distance within
    // its cluster (ties to the lowest index).
    std::vector<double> new_cost = point_cost;
    std::vector<std::size_t> new_medoids = medoids;
    for (int c = 0; c < k; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i)
        if (cluster_of[i] == c) members.push_back(i);
      double best_sum = kInf;
      std::size_t best_m = medoids[static_cast<std::size_t>(c)];
      for (std::size_t m : members) {
        double s = 0.0;
        for (std::size_t x : members) {
          const double v = dm.at(m, x);
          s += v * v;
        }
        if (s < best_sum) {
          best_sum = s;
          best_m = m;
        }
      }
      double old_sum = 0.0;
      for (std::size_t x : members) old_sum += point_cost[x] * point_cost[x];
      if (best_sum <= old_sum) {
        new_medoids[static_cast<std::size_t>(c)] = best_m;
        for (std::size_t x : members) new_cost[x] = dm.at(x, best_m);
      }
    }
    const double j_update = squared_cost_sum(new_cost);
    if (j_update > j_assign) {
      converged = true;
      break;
    }
    medoids = std::move(new_medoids);
    point_cost = std::move(new_cost);
    if (trace) trace->objective.push_back(j_update);
  }

  if (trace) {
    trace->iterations = iterations;
    trace->converged = converged;
  }
  Assignment out;
  out.k = k;
  out.cluster_of = std::move(cluster_of);
  return out;
}

Assignment kmedoids_fit(const LabeledDataset& ds, Measure measure, const FitConfig& cfg,
                        FitTrace* trace) {
  return kmedoids_fit(distance_matrix(ds, measure), cfg, trace);
}

namespace {

/// Row-stochastic memberships for the current centroids; coincident points get
/// full membership in the lowest coincident cluster.
void fuzzy_memberships(const std::vector<std::vector<double>>& dist2,
                       std::vector<std::vector<double>>& u, double fuzzifier) {
  const std::size_t n = dist2.size();
  const std::size_t k = dist2.front().size();
  const double expo = -1.0 / (fuzzifier - 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    int zero_at = -1;
    for (std::size_t c = 0; c < k; ++c) {
      if (dist2[i][c] == 0.0) {
        zero_at = static_cast<int>(c);
        break;
      }
    }
    if (zero_at >= 0) {
      std::fill(u[i].begin(), u[i].end(), 0.0);
      u[i][static_cast<std::size_t>(zero_at)] = 1.0;
      continue;
    }
    double denom = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      u[i][c] = std::pow(dist2[i][c], expo);
      denom += u[i][c];
    }
    for (std::size_t c = 0; c < k; ++c) u[i][c] /= denom;
  }
}

double fuzzy_objective(const std::vector<std::vector<double>>& dist2,
                       const std::vector<std::vector<double>>& u, double fuzzifier) {
  double j = 0.0;
  for (std::size_t i = 0; i < dist2.size(); ++i)
    for (std::size_t c = 0; c < dist2[i].size(); ++c)
      j += std::pow(u[i][c], fuzzifier) * dist2[i][c];
  return j;
}

}  // namespace

Assignment fuzzy_cmeans_fit(const LabeledDataset& ds, const FitConfig& cfg, FitTrace* trace) {
  const std::size_t n = ds.size();
  const std::size_t len = ds.length();
  const int k = cfg.k;
  require_fit_preconditions(n, k);
  const auto uk = static_cast<std::size_t>(k);

  Rng rng(cfg.seed);
  std::vector<TimeSeries> centroids;
  for (std::size_t idx : rng.sample_indices(n, uk)) centroids.push_back(ds.series[idx]);

  std::vector<std::vector<double>> dist2(n, std::vector<double>(uk, 0.0));
  const auto refresh_dist2 = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t c = 0; c < uk; ++c) {
        const double d = euclidean(ds.series[i], centroids[c]);
        dist2[i][c] = d * d;
      }
    }
  };
  refresh_dist2();

  std::vector<std::vector<double>> u(n, std::vector<double>(uk, 0.0));
  fuzzy_memberships(dist2, u, cfg.fuzzifier);
  double last_j = fuzzy_objective(dist2, u, cfg.fuzzifier);
  if (trace) trace->objective.push_back(last_j);

  bool converged = false;
  int iterations = 0;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    ++iterations;
    // Centroid half-step.
    const std::vector<TimeSeries> prev_centroids = centroids;
    for (std::size_t c = 0; c < uk; ++c) {
      std::vector<double> num(len, 0.0);
      double den = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double w = std::pow(u[i][c], cfg.fuzzifier);
        den += w;
        for (std::size_t t = 0; t < len; ++t) num[t] += w * ds.series[i][t];
      }
      if (den > 0.0)
        for (std::size_t t = 0; t < len; ++t) centroids[c][t] = num[t] / den;
    }
    refresh_dist2();
    double j = fuzzy_objective(dist2, u, cfg.fuzzifier);
    if (j > last_j) {  // FP-flat step: revert and stop
      centroids = prev_centroids;
      refresh_dist2();
      converged = true;
      break;
    }
    last_j = j;
    if (trace) trace->objective.push_back(j);

    // Membership half-step.
    const std::vector<std::vector<double>> prev_u = u;
    fuzzy_memberships(dist2, u, cfg.fuzzifier);
    j = fuzzy_objective(dist2, u, cfg.fuzzifier);
    if (j > last_j) {
      u = prev_u;
      converged = true;
      break;
    }
    last_j = j;
    if (trace) trace->objective.push_back(j);

    double max_change = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t c = 0; c < uk; ++c)
        max_change = std::max(max_change, std::abs(u[i][c] - prev_u[i][c]));
    if (max_change < cfg.tolerance) {
      converged = true;
      break;
    }
  }

  if (trace) {
    trace->iterations = iterations;
    trace->converged = converged;
  }

  Assignment out;
  out.k = k;
  out.cluster_of.resize(n);
  out.memberships = std::move(u);
  for (std::size_t i = 0; i < n; ++i) {
    int best = 0;
    for (std::size_t c = 1; c < uk; ++c)
      if (out.memberships[i][c] > out.memberships[i][static_cast<std::size_t>(best)])
        best = static_cast<int>(c);
    out.cluster_of[i] = best;
  }
  return out;
}

double cutoff_distance(const DistanceMatrix& dm, double neighbor_fraction) {
  const std::size_t n = dm.size();
  if (n < 2) throw Error("cutoff_distance needs at least two observations");
  std::vector<double> values;
  values.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) values.push_back(dm.at(i, j));
  std::sort(values.begin(), values.end());
  const auto m = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(neighbor_fraction * m));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  const double d = values[rank - 1];
  if (d > 0.0) return d;
  for (double v : values)
    if (v > 0.0) return v;
  return 1.0;
}

namespace {

/// Density Peaks over an abstract pair-distance source, so the exact and the
/// bound-pruned (TADPole) routes share every ordering and tie-breaking rule.
/// The source provides:
///   bool neighbor(i, j)                          -- dist(i, j) < d
///   double dist_min(i, cands, &arg_pos)          -- min distance to cands;
///       arg_pos is the first candidate position attaining it
///   double dist_max(i, cands)                    -- max distance to cands
template <class Source>
DensityPeaksResult density_peaks_core(std::size_t n, const DensityPeaksParams& params, int k,
                                      Source& src) {
  require_fit_preconditions(n, k);
  if (!(params.d > 0.0)) throw Error("density peaks requires a positive neighborhood distance d");

  DensityPeaksResult res;
  auto& st = res.state;
  st.rho.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (src.neighbor(i, j)) {
        ++st.rho[i];
        ++st.rho[j];
      }
    }
  }

  st.order.resize(n);
  std::iota(st.order.begin(), st.order.end(), 0);
  std::sort(st.order.begin(), st.order.end(), [&](int a, int b) {
    if (st.rho[static_cast<std::size_t>(a)] != st.rho[static_cast<std::size_t>(b)])
      return st.rho[static_cast<std::size_t>(a)] > st.rho[static_cast<std::size_t>(b)];
    return a < b;
  });

  st.delta.assign(n, 0.0);
  st.nearest_denser.assign(n, -1);
  {
    const auto top = static_cast<std::size_t>(st.order[0]);
    std::vector<int> others;
    others.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
      if (j != top) others.push_back(static_cast<int>(j));
    st.delta[top] = others.empty() ? 0.0 : src.dist_max(top, others);
  }
  std::vector<int> preceding;
  preceding.reserve(n);
  preceding.push_back(st.order[0]);
  for (std::size_t pos = 1; pos < n; ++pos) {
    const auto i = static_cast<std::size_t>(st.order[pos]);
    int arg_pos = 0;
    st.delta[i] = src.dist_min(i, preceding, &arg_pos);
    st.nearest_denser[i] = preceding[static_cast<std::size_t>(arg_pos)];
    preceding.push_back(st.order[pos]);
  }

  st.gamma.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    st.gamma[i] = static_cast<double>(st.rho[i]) * st.delta[i];

  bool all_rho_equal = true, all_delta_equal = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (st.rho[i] != st.rho[0]) all_rho_equal = false;
    if (st.delta[i] != st.delta[0]) all_delta_equal = false;
  }
  res.degenerate_density = all_rho_equal && all_delta_equal && n > 1;

  if (!res.degenerate_density) {
    std::vector<int> by_gamma(n);
    std::iota(by_gamma.begin(), by_gamma.end(), 0);
    std::sort(by_gamma.begin(), by_gamma.end(), [&](int a, int b) {
      if (st.gamma[static_cast<std::size_t>(a)] != st.gamma[static_cast<std::size_t>(b)])
        return st.gamma[static_cast<std::size_t>(a)] > st.gamma[static_cast<std::size_t>(b)];
      return a < b;
    });
    res.peaks.assign(by_gamma.begin(), by_gamma.begin() + k);
  } else {
    // Farthest-point fallback, starting from the lowest index.
    res.peaks.push_back(0);
    while (static_cast<int>(res.peaks.size()) < k) {
      double best = -kInf;
      int pick = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (std::find(res.peaks.begin(), res.peaks.end(), static_cast<int>(i)) !=
            res.peaks.end())
          continue;
        int dummy = 0;
        const double v = src.dist_min(i, res.peaks, &dummy);
        if (v > best) {
          best = v;
          pick = static_cast<int>(i);
        }
      }
      res.peaks.push_back(pick);
    }
  }

  auto& asg = res.assignment;
  asg.k = k;
  asg.cluster_of.assign(n, -1);
  for (std::size_t c = 0; c < res.peaks.size(); ++c)
    asg.cluster_of[static_cast<std::size_t>(res.peaks[c])] = static_cast<int>(c);

  if (params.assignment_mode == DensityPeaksParams::AssignMode::closest_centroid) {
    for (std::size_t i = 0; i < n; ++i) {
      if (asg.cluster_of[i] >= 0) continue;
      int arg_pos = 0;
      src.dist_min(i, res.peaks, &arg_pos);
      asg.cluster_of[i] = arg_pos;
    }
  } else {
    // Inherit the nearest denser point's cluster, in density order.
    for (std::size_t pos = 0; pos < n; ++pos) {
      const auto i = static_cast<std::size_t>(st.order[pos]);
      if (asg.cluster_of[i] >= 0) continue;
      asg.cluster_of[i] =
          asg.cluster_of[static_cast<std::size_t>(st.nearest_denser[i])];
    }
  }
  return res;
}

struct MatrixPairSource {
  const DistanceMatrix& dm;
  double d;

  bool neighbor(std::size_t i, std::size_t j) const { return dm.at(i, j) < d; }

  double dist_min(std::size_t i, const std::vector<int>& cands, int* arg_pos) const {
    double best = kInf;
    int arg = 0;
    for (std::size_t p = 0; p < cands.size(); ++p) {
      const double v = dm.at(i, static_cast<std::size_t>(cands[p]));
      if (v < best) {
        best = v;
        arg = static_cast<int>(p);
      }
    }
    *arg_pos = arg;
    return best;
  }

  double dist_max(std::size_t i, const std::vector<int>& cands) const {
    double best = -kInf;
    for (int c : cands) best = std::max(best, dm.at(i, static_cast<std::size_t>(c)));
    return best;
  }
};

}  // namespace

DensityPeaksResult density_peaks_fit(const DistanceMatrix& dm, const DensityPeaksParams& params,
                                     int k) {
  MatrixPairSource src{dm, params.d};
  return density_peaks_core(dm.size(), params, k, src);
}

DensityPeaksResult density_peaks_fit(const LabeledDataset& ds, Measure measure,
                                     const DensityPeaksParams& params, int k,
                                     const DtwParams& dtw_params) {
  const DistanceMatrix dm = distance_matrix(ds, measure, dtw_params);
  DensityPeaksParams resolved = params;
  if (!(resolved.d > 0.0)) resolved.d = cutoff_distance(dm, params.neighbor_fraction);
  return density_peaks_fit(dm, resolved, k);
}

namespace {

/// Pairwise DTW with admissible pruning: euclidean is an upper bound, the
/// (symmetrized) Keogh envelope bound a lower bound. A pair's DTW is computed
/// only when a decision actually needs it; equal bounds pin the value for
/// free.
class TadpolePairSource {
 public:
  TadpolePairSource(const LabeledDataset& ds, const DtwParams& params, double d)
      : ds_(ds), params_(params), d_(d), n_(ds.size()) {
    const std::size_t cells = n_ < 2 ? 0 : n_ * (n_ - 1) / 2;
    lb_.assign(cells, 0.0);
    ub_.assign(cells, 0.0);
    exact_.assign(cells, std::numeric_limits<double>::quiet_NaN());
    status_.assign(cells, Status::unknown);

    const std::size_t w = params.window_for(ds.length());
    std::vector<std::vector<double>> lower(n_), upper(n_);
    for (std::size_t i = 0; i < n_; ++i) dtw_envelope(ds.series[i], w, lower[i], upper[i]);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const std::size_t c = cell(i, j);
        ub_[c] = euclidean(ds.series[i], ds.series[j]);
        lb_[c] = std::max(lb_keogh(lower[i], upper[i], ds.series[j]),
                          lb_keogh(lower[j], upper[j], ds.series[i]));
      }
    }
  }

  bool neighbor(std::size_t i, std::size_t j) {
    const std::size_t c = cell(i, j);
    if (status_[c] == Status::exact) return exact_[c] < d_;
    if (ub_[c] < d_) {
      status_[c] = Status::ub_resolved;
      return true;
    }
    if (lb_[c] >= d_) {
      status_[c] = Status::lb_resolved;
      return false;
    }
    return value(i, j) < d_;
  }

  double dist_min(std::size_t i, const std::vector<int>& cands, int* arg_pos) {
    double best = kInf;
    int arg = 0;
    // Known values first (computed or pinned by equal bounds), in order.
    std::vector<std::pair<double, int>> open;  // (lb, position)
    for (std::size_t p = 0; p < cands.size(); ++p) {
      const std::size_t j = static_cast<std::size_t>(cands[p]);
      const std::size_t c = cell(i, j);
      double v;
      if (known(c, &v)) {
        if (v < best) {
          best = v;
          arg = static_cast<int>(p);
        }
      } else {
        open.emplace_back(lb_[c], static_cast<int>(p));
      }
    }
    std::sort(open.begin(), open.end());
    for (const auto& [lb, p] : open) {
      if (lb > best) break;  // every remaining bound exceeds the minimum
      const std::size_t j = static_cast<std::size_t>(cands[static_cast<std::size_t>(p)]);
      const double v = value(i, j);
      if (v < best || (v == best && p < arg)) {
        best = v;
        arg = p;
      }
    }
    *arg_pos = arg;
    return best;
  }

  double dist_max(std::size_t i, const std::vector<int>& cands) {
    double best = -kInf;
    std::vector<std::pair<double, int>> open;  // (-ub, position)
    for (std::size_t p = 0; p < cands.size(); ++p) {
      const std::size_t j = static_cast<std::size_t>(cands[p]);
      const std::size_t c = cell(i, j);
      double v;
      if (known(c, &v)) {
        best = std::max(best, v);
      } else {
        open.emplace_back(-ub_[c], static_cast<int>(p));
      }
    }
    std::sort(open.begin(), open.end());
    for (const auto& [neg_ub, p] : open) {
      if (-neg_ub <= best) break;  // cannot exceed the current maximum
      const std::size_t j = static_cast<std::size_t>(cands[static_cast<std::size_t>(p)]);
      best = std::max(best, value(i, j));
    }
    return best;
  }

  /// Every pair is classified during the rho sweep, so the three buckets
  /// partition all n(n-1)/2 pairs.
  PruningStats stats() const {
    PruningStats s;
    for (const auto st : status_) {
      switch (st) {
        case Status::exact: ++s.exact_dtw; break;
        case Status::ub_resolved: ++s.ub_resolved; break;
        case Status::lb_resolved: ++s.lb_resolved; break;
        case Status::unknown: break;
      }
    }
    return s;
  }

 private:
  enum class Status : std::uint8_t { unknown, ub_resolved, lb_resolved, exact };

  std::size_t cell(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i + 1) / 2 + (j - i - 1);
  }

  bool known(std::size_t c, double* v) const {
    if (status_[c] == Status::exact) {
      *v = exact_[c];
      return true;
    }
    if (lb_[c] == ub_[c]) {  // pinched bounds pin the value without a DTW call
      *v = ub_[c];
      return true;
    }
    return false;
  }

  double value(std::size_t i, std::size_t j) {
    const std::size_t c = cell(i, j);
    if (status_[c] != Status::exact) {
      exact_[c] = dtw(ds_.series[i], ds_.series[j], params_);
      status_[c] = Status::exact;
    }
    return exact_[c];
  }

  const LabeledDataset& ds_;
  DtwParams params_;
  double d_;
  std::size_t n_;
  std::vector<double> lb_, ub_, exact_;
  std::vector<Status> status_;
};

}  // namespace

TadpoleResult tadpole_fit(const LabeledDataset& ds, const DtwParams& dtw_params,
                          const DensityPeaksParams& params, int k) {
  if (!(params.d > 0.0)) throw Error("tadpole_fit requires a positive neighborhood distance d");
  TadpolePairSource src(ds, dtw_params, params.d);
  DensityPeaksResult dp = density_peaks_core(ds.size(), params, k, src);
  TadpoleResult res;
  res.assignment = std::move(dp.assignment);
  res.state = std::move(dp.state);
  res.peaks = std::move(dp.peaks);
  res.degenerate_density = dp.degenerate_density;
  res.pruning = src.stats();
  return res;
}

std::vector<MergeStep> agglomerative_merges(const DistanceMatrix& dm, Linkage linkage) {
  const std::size_t n = dm.size();
  std::vector<MergeStep> steps;
  if (n < 2) return steps;
  steps.reserve(n - 1);

  // Pairwise linkage values, indexed by cluster ids (smallest member index).
  // Ward starts from half squared distances (the singleton merge cost).
  std::vector<double> link(n * n, 0.0);
  const auto L = [&](std::size_t a, std::size_t b) -> double& { return link[a * n + b]; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = dm.at(i, j);
      const double v = linkage == Linkage::ward ? 0.5 * d * d : d;
      L(i, j) = v;
      L(j, i) = v;
    }
  }

  std::vector<bool> alive(n, true);
  std::vector<double> csize(n, 1.0);
  // Per-row nearest neighbor among higher ids: (value, id), ties to lowest id.
  std::vector<double> best_val(n, kInf);
  std::vector<std::size_t> best_id(n, n);
  const auto rescan_row = [&](std::size_t i) {
    best_val[i] = kInf;
    best_id[i] = n;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!alive[j]) continue;
      if (L(i, j) < best_val[i]) {
        best_val[i] = L(i, j);
        best_id[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) rescan_row(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    double mv = kInf;
    std::size_t a = n, b = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i] || best_id[i] == n) continue;
      if (best_val[i] < mv) {
        mv = best_val[i];
        a = i;
        b = best_id[i];
      }
    }
    steps.push_back({static_cast<int>(a), static_cast<int>(b), mv});

    const double sa = csize[a], sb = csize[b];
    for (std::size_t x = 0; x < n; ++x) {
      if (!alive[x] || x == a || x == b) continue;
      double v;
      if (linkage == Linkage::ward) {
        const double sx = csize[x];
        v = ((sa + sx) * L(a, x) + (sb + sx) * L(b, x) - sx * L(a, b)) / (sa + sb + sx);
      } else {
        v = std::max(L(a, x), L(b, x));
      }
      L(a, x) = v;
      L(x, a) = v;
    }
    alive[b] = false;
    csize[a] = sa + sb;

    rescan_row(a);
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i] || i == a) continue;
      if (best_id[i] == a || best_id[i] == b) {
        // cached neighbor merged away or its linkage changed
        rescan_row(i);
      } else if (i < a &&
                 (L(i, a) < best_val[i] || (L(i, a) == best_val[i] && a < best_id[i]))) {
        best_val[i] = L(i, a);
        best_id[i] = a;
      }
    }
  }
  return steps;
}

Assignment agglomerative_fit(const DistanceMatrix& dm, int k, Linkage linkage) {
  const std::size_t n = dm.size();
  require_fit_preconditions(n, k);
  const auto steps = agglomerative_merges(dm, linkage);
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  const std::size_t merges = n - static_cast<std::size_t>(k);
  for (std::size_t s = 0; s < merges; ++s) {
    for (auto& r : root)
      if (r == steps[s].b) r = steps[s].a;
  }
  Assignment out;
  out.k = k;
  out.cluster_of.resize(n);
  std::vector<int> relabel(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto& id = relabel[static_cast<std::size_t>(root[i])];
    if (id < 0) id = next++;
    out.cluster_of[i] = id;
  }
  return out;
}

Assignment agglomerative_ward_fit(const LabeledDataset& ds, int k) {
  return agglomerative_fit(distance_matrix(ds, Measure::euclidean), k, Linkage::ward);
}

}  // namespace tsbench
