// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "docslim/errors.hpp"
#include "docslim/rng.hpp"
#include "docslim/tokens.hpp"

namespace docslim {

inline constexpr int kDefaultVoteR = 50;

struct DtsParams {
  int vote_r = kDefaultVoteR;
  int kmeans_max_iters = 100;
  double kmeans_tol = 1e-6;
  std::uint64_t seed = 0;
};

inline void validate(const DtsParams& p) {
  if (p.vote_r < 1) throw Error("DtsParams: vote_r must be >= 1");
  if (p.kmeans_max_iters < 1) throw Error("DtsParams: kmeans_max_iters must be >= 1");
  if (p.kmeans_tol < 0.0) throw Error("DtsParams: kmeans_tol must be >= 0");
}

struct KmeansResult {
  std::vector<int> labels;                      // length L, values 0/1
  std::array<std::vector<double>, 2> centroids; // each length D
  std::vector<double> inertia_trace;            // one entry per iteration
  int iterations = 0;
};

/// Two-way split of the token sequence. `essential_cluster` names the k-means
/// label that won the vote; index lists are sorted ascending.
struct ClusterSplit {
  std::vector<int> essential_idx;
  std::vector<int> nonessential_idx;
  std::array<std::vector<double>, 2> centroids;
  std::array<int, 2> vote_counts{0, 0};  // top-R members per cluster
  int essential_cluster = 0;
};

struct AggregationResult {
  TokenMatrix tokens;                       // N x D'
  std::vector<int> kept_idx;                // original essential indices, ascending
  std::vector<std::pair<int, int>> assignment;        // (nonessential j, essential i)
  std::vector<std::pair<int, double>> essential_weights;     // (i, w_i), J_i nonempty
  std::vector<std::pair<int, double>> nonessential_weights;  // (j, w_j)
  int input_rows = 0;
};

namespace detail {

inline std::uint64_t fnv1a64(const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::vector<std::uint64_t> row_hashes(const TokenMatrix& m) {
  std::vector<std::uint64_t> hashes(m.rows);
  for (int i = 0; i < m.rows; ++i) {
    hashes[i] = fnv1a64(m.row(i), static_cast<std::size_t>(m.cols) * sizeof(float));
  }
  return hashes;
}

// Content-determined ordering of the rows: ties in the hash fall back to a
// lexicographic value compare, then to the original index (only reached for
// bit-identical rows, which are interchangeable). Permuting the input rows
// permutes nothing but that final tie level, so draws made against this order
// are order-independent.
inline std::vector<int> canonical_order(const TokenMatrix& m,
                                        const std::vector<std::uint64_t>& hashes) {
  std::vector<int> order(m.rows);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (hashes[a] != hashes[b]) return hashes[a] < hashes[b];
    const float* ra = m.row(a);
    const float* rb = m.row(b);
    for (int j = 0; j < m.cols; ++j) {
      if (ra[j] != rb[j]) return ra[j] < rb[j];
    }
    return a < b;
  });
  return order;
}

inline double sq_dist(const float* row, const double* center, int d) {
  double acc = 0.0;
  for (int j = 0; j < d; ++j) {
    const double diff = static_cast<double>(row[j]) - center[j];
    acc += diff * diff;
  }
  return acc;
}

using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Rows scaled to unit Euclidean norm, promoted to double.
inline RowMatrixXd unit_rows(const TokenMatrix& m) {
  RowMatrixXd u(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i) {
    const float* r = m.row(i);
    double n2 = 0.0;
    for (int j = 0; j < m.cols; ++j) {
      n2 += static_cast<double>(r[j]) * static_cast<double>(r[j]);
    }
    if (n2 == 0.0) {
      throw ZeroNormToken("token " + std::to_string(i) + " has zero norm");
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (int j = 0; j < m.cols; ++j) {
      u(i, j) = static_cast<double>(r[j]) * inv;
    }
  }
  return u;
}

}  // namespace detail

/// Lloyd's algorithm with k = 2 and k-means++ seeding. Deterministic for a
/// given seed, and invariant to the order of the input rows: the seeding
/// stream is mixed with an order-independent content hash and every random or
/// accumulating step walks the rows in canonical content order. Ties in the
/// nearest-centroid assignment go to the lower centroid index; an empty
/// cluster is repaired by reassigning the point farthest from its centroid.
inline KmeansResult kmeans2(const TokenMatrix& v, const DtsParams& params) {
  validate(params);
  if (v.rows < 2) throw TooFewTokens("kmeans2: need at least 2 tokens");
  const int n = v.rows;
  const int d = v.cols;

  const std::vector<std::uint64_t> hashes = detail::row_hashes(v);
  const std::vector<int> canon = detail::canonical_order(v, hashes);
  std::uint64_t content = 0;
  for (const std::uint64_t h : hashes) content += h;  // order-independent mix
  Rng rng(params.seed ^ splitmix64(content));

  auto copy_row = [&](int i) {
    std::vector<double> c(d);
    const float* r = v.row(i);
    for (int j = 0; j < d; ++j) c[j] = r[j];
    return c;
  };

  // k-means++: first center uniform over the canonical sequence, second
  // proportional to squared distance from the first.
  std::array<std::vector<double>, 2> centroids;
  const int first = canon[std::min<std::int64_t>(
      n - 1, static_cast<std::int64_t>(rng.uniform() * n))];
  centroids[0] = copy_row(first);
  std::vector<double> d2(n);
  double total = 0.0;
  for (const int i : canon) {
    d2[i] = detail::sq_dist(v.row(i), centroids[0].data(), d);
    total += d2[i];
  }
  int second = -1;
  if (total <= 0.0) {
    // All points coincide with the first center; any other point will do.
    second = (canon[0] == first) ? canon[1] : canon[0];
  } else {
    const double target = rng.uniform() * total;
    double cum = 0.0;
    for (const int i : canon) {
      cum += d2[i];
      if (d2[i] > 0.0) {
        second = i;
        if (cum > target) break;
      }
    }
  }
  centroids[1] = copy_row(second);

  KmeansResult res;
  res.labels.assign(n, 0);
  std::vector<double> chosen(n, 0.0);
  std::array<int, 2> counts{0, 0};

  auto assign_and_repair = [&]() {
    counts = {0, 0};
    for (int i = 0; i < n; ++i) {
      const double a = detail::sq_dist(v.row(i), centroids[0].data(), d);
      const double b = detail::sq_dist(v.row(i), centroids[1].data(), d);
      const int label = (b < a) ? 1 : 0;
      res.labels[i] = label;
      chosen[i] = (label == 1) ? b : a;
      ++counts[label];
    }
    for (int c = 0; c < 2; ++c) {
      if (counts[c] != 0) continue;
      int far = -1;
      double far_d = -1.0;
      for (const int i : canon) {
        if (chosen[i] > far_d) {
          far_d = chosen[i];
          far = i;
        }
      }
      --counts[res.labels[far]];
      res.labels[far] = c;
      ++counts[c];
      centroids[c] = copy_row(far);
      chosen[far] = 0.0;
    }
  };

  for (int iter = 0; iter < params.kmeans_max_iters; ++iter) {
    assign_and_repair();
    double inertia = 0.0;
    for (const int i : canon) inertia += chosen[i];
    res.inertia_trace.push_back(inertia);
    res.iterations = iter + 1;

    std::array<std::vector<double>, 2> next;
    next[0].assign(d, 0.0);
    next[1].assign(d, 0.0);
    for (const int i : canon) {
      std::vector<double>& acc = next[res.labels[i]];
      const float* r = v.row(i);
      for (int j = 0; j < d; ++j) acc[j] += r[j];
    }
    double shift2 = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double inv = 1.0 / counts[c];
      double s = 0.0;
      for (int j = 0; j < d; ++j) {
        next[c][j] *= inv;
        const double diff = next[c][j] - centroids[c][j];
        s += diff * diff;
      }
      shift2 = std::max(shift2, s);
    }
    centroids = std::move(next);
    if (std::sqrt(shift2) < params.kmeans_tol) break;
  }

  // Labels must be consistent with the final centroids.
  assign_and_repair();
  res.centroids = centroids;
  return res;
}

/// Entry t is the maximum cosine similarity between token t and any other
/// token (self excluded). Computed as a tiled Gram matrix over the upper
/// triangle; exact double accumulation, deterministic scan order.
inline std::vector<double> max_similarities(const TokenMatrix& vp) {
  if (vp.rows < 2) throw TooFewTokens("max_similarities: need at least 2 tokens");
  const int n = vp.rows;
  const detail::RowMatrixXd u = detail::unit_rows(vp);
  std::vector<double> best(n, -2.0);
  constexpr int kTile = 256;
  Eigen::MatrixXd block;
  for (int i0 = 0; i0 < n; i0 += kTile) {
    const int ih = std::min(kTile, n - i0);
    for (int j0 = i0; j0 < n; j0 += kTile) {
      const int jh = std::min(kTile, n - j0);
      block.noalias() = u.middleRows(i0, ih) * u.middleRows(j0, jh).transpose();
      for (int i = 0; i < ih; ++i) {
        const int gi = i0 + i;
        for (int j = (i0 == j0) ? i + 1 : 0; j < jh; ++j) {
          const int gj = j0 + j;
          const double s = block(i, j);
          if (s > best[gi]) best[gi] = s;
          if (s > best[gj]) best[gj] = s;
        }
      }
    }
  }
  return best;
}

/// Vote on which cluster is nonessential: take the R highest-max-similarity
/// tokens (ties to the lower index) and count their cluster membership. The
/// cluster holding more of them is nonessential. An exact tie hands the
/// nonessential role to the cluster of the single highest-similarity token.
inline ClusterSplit identify_essential(const KmeansResult& km,
                                       const std::vector<double>& max_sims,
                                       const DtsParams& params) {
  validate(params);
  const int n = static_cast<int>(km.labels.size());
  if (static_cast<int>(max_sims.size()) != n) {
    throw ShapeMismatch("identify_essential: labels and max_sims disagree");
  }
  const int r_eff = std::min(params.vote_r, n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (max_sims[a] != max_sims[b]) return max_sims[a] > max_sims[b];
    return a < b;
  });

  ClusterSplit split;
  split.centroids = km.centroids;
  for (int k = 0; k < r_eff; ++k) ++split.vote_counts[km.labels[order[k]]];

  std::array<int, 2> members{0, 0};
  for (const int label : km.labels) ++members[label];

  int nonessential_cluster;
  if (members[0] == 0 || members[1] == 0) {
    // kmeans2 always populates both clusters; direct callers may not. With a
    // single populated cluster there is nothing to discard.
    nonessential_cluster = (members[0] == 0) ? 0 : 1;
  } else if (split.vote_counts[0] > split.vote_counts[1]) {
    nonessential_cluster = 0;
  } else if (split.vote_counts[1] > split.vote_counts[0]) {
    nonessential_cluster = 1;
  } else {
    nonessential_cluster = km.labels[order[0]];
  }
  split.essential_cluster = 1 - nonessential_cluster;

  for (int i = 0; i < n; ++i) {
    if (km.labels[i] == split.essential_cluster) {
      split.essential_idx.push_back(i);
    } else {
      split.nonessential_idx.push_back(i);
    }
  }
  return split;
}

/// Map every nonessential token to its most similar essential token (cosine,
/// ties to the lowest essential index). Returned vector is parallel to
/// split.nonessential_idx and holds original essential indices.
inline std::vector<int> assign_nonessential(const TokenMatrix& vp,
                                            const ClusterSplit& split) {
  const int ne = static_cast<int>(split.nonessential_idx.size());
  const int ess = static_cast<int>(split.essential_idx.size());
  if (ne == 0) return {};
  if (ess == 0) throw Error("assign_nonessential: essential set is empty");
  const detail::RowMatrixXd u = detail::unit_rows(vp);

  detail::RowMatrixXd ue(ess, vp.cols);
  for (int a = 0; a < ess; ++a) ue.row(a) = u.row(split.essential_idx[a]);
  detail::RowMatrixXd un(ne, vp.cols);
  for (int b = 0; b < ne; ++b) un.row(b) = u.row(split.nonessential_idx[b]);

  std::vector<int> target(ne, -1);
  std::vector<double> best(ne, -2.0);
  constexpr int kTile = 256;
  Eigen::MatrixXd block;
  for (int b0 = 0; b0 < ne; b0 += kTile) {
    const int bh = std::min(kTile, ne - b0);
    for (int a0 = 0; a0 < ess; a0 += kTile) {
      const int ah = std::min(kTile, ess - a0);
      block.noalias() = un.middleRows(b0, bh) * ue.middleRows(a0, ah).transpose();
      for (int b = 0; b < bh; ++b) {
        const int gb = b0 + b;
        for (int a = 0; a < ah; ++a) {
          const double s = block(b, a);
          if (s > best[gb]) {  // strict: earlier (lower) essential index wins ties
            best[gb] = s;
            target[gb] = split.essential_idx[a0 + a];
          }
        }
      }
    }
  }
  return target;
}

/// Similarity-weighted aggregation. For essential token i with assigned
/// nonessential set J_i:
///   d_i  = sum_j exp(c_ij) + e          (e = Euler's number)
///   w_j  = exp(c_ij) / d_i,  w_i = e / d_i
///   out_i = w_i * e_i + sum_j w_j * e_j
/// Essential tokens with no assignment pass through unchanged. Output rows
/// are ordered by ascending original index.
inline AggregationResult aggregate(const TokenMatrix& vp, const ClusterSplit& split,
                                   const std::vector<int>& assignment) {
  const int ess = static_cast<int>(split.essential_idx.size());
  const int ne = static_cast<int>(split.nonessential_idx.size());
  if (static_cast<int>(assignment.size()) != ne) {
    throw ShapeMismatch("aggregate: assignment length must match nonessential set");
  }
  const int d = vp.cols;

  std::vector<int> pos_of(vp.rows, -1);
  for (int a = 0; a < ess; ++a) pos_of[split.essential_idx[a]] = a;
  std::vector<std::vector<int>> buckets(ess);
  for (int b = 0; b < ne; ++b) {
    const int i = assignment[b];
    if (i < 0 || i >= vp.rows || pos_of[i] < 0) {
      throw Error("aggregate: assignment targets a non-essential index");
    }
    buckets[pos_of[i]].push_back(split.nonessential_idx[b]);
  }

  const detail::RowMatrixXd u = (ne > 0) ? detail::unit_rows(vp) : detail::RowMatrixXd();

  AggregationResult res;
  res.input_rows = vp.rows;
  res.kept_idx = split.essential_idx;
  res.tokens = make_tokens(ess, d);
  for (int b = 0; b < ne; ++b) {
    res.assignment.emplace_back(split.nonessential_idx[b], assignment[b]);
  }

  std::vector<double> acc(d);
  for (int a = 0; a < ess; ++a) {
    const int i = split.essential_idx[a];
    const float* src = vp.row(i);
    float* dst = res.tokens.row(a);
    if (buckets[a].empty()) {
      std::copy(src, src + d, dst);
      continue;
    }
    double denom = std::numbers::e;
    std::vector<double> cos_ij(buckets[a].size());
    for (std::size_t k = 0; k < buckets[a].size(); ++k) {
      cos_ij[k] = u.row(i).dot(u.row(buckets[a][k]));
      denom += std::exp(cos_ij[k]);
    }
    const double wi = std::numbers::e / denom;
    res.essential_weights.emplace_back(i, wi);
    for (int j = 0; j < d; ++j) acc[j] = wi * src[j];
    for (std::size_t k = 0; k < buckets[a].size(); ++k) {
      const double wj = std::exp(cos_ij[k]) / denom;
      res.nonessential_weights.emplace_back(buckets[a][k], wj);
      const float* nsrc = vp.row(buckets[a][k]);
      for (int j = 0; j < d; ++j) acc[j] += wj * nsrc[j];
    }
    for (int j = 0; j < d; ++j) dst[j] = static_cast<float>(acc[j]);
  }
  std::sort(res.nonessential_weights.begin(), res.nonessential_weights.end());
  return res;
}

/// Full dynamic token slimming pipeline. Clustering runs on `v` (encoder
/// features); voting, assignment and aggregation run on `vp` (projected
/// features), which defaults to `v` when absent.
inline AggregationResult dts(const TokenMatrix& v,
                             const std::optional<TokenMatrix>& vp_opt,
                             const DtsParams& params) {
  validate(params);
  validate(v, "dts(v)");
  if (v.rows < 2) throw TooFewTokens("dts: need at least 2 tokens");
  const TokenMatrix& vp = vp_opt ? *vp_opt : v;
  if (vp_opt) {
    validate(vp, "dts(vp)");
    if (vp.rows != v.rows) {
      throw ShapeMismatch("dts: v and vp must have the same number of rows");
    }
  }
  const KmeansResult km = kmeans2(v, params);
  const std::vector<double> sims = max_similarities(vp);
  const ClusterSplit split = identify_essential(km, sims, params);
  const std::vector<int> assignment = assign_nonessential(vp, split);
  return aggregate(vp, split, assignment);
}

inline AggregationResult dts(const TokenMatrix& v, const DtsParams& params) {
  return dts(v, std::nullopt, params);
}

}  // namespace docslim
