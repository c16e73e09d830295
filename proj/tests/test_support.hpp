// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "docslim/dts.hpp"
#include "docslim/image.hpp"
#include "docslim/rng.hpp"
#include "docslim/tokens.hpp"

namespace testsupport {

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("docslim_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Run the docslim binary with the given argument string.
inline CliResult run_cli(const std::string& binary, const std::string& args,
                         const std::filesystem::path& work_dir) {
  const std::filesystem::path out_path = work_dir / "cli_stdout.txt";
  const std::filesystem::path err_path = work_dir / "cli_stderr.txt";
  const std::string cmd = binary + " " + args + " >" + out_path.string() + " 2>" +
                          err_path.string();
  const int status = std::system(cmd.c_str());
  CliResult res;
  if (status >= 0 && WIFEXITED(status)) {
    res.exit_code = WEXITSTATUS(status);
  }
  res.out = read_file(out_path);
  res.err = read_file(err_path);
  return res;
}

/// Random finite token matrix with unit-scale gaussian entries, no zero rows.
inline docslim::TokenMatrix random_tokens(int rows, int cols, std::uint64_t seed) {
  docslim::Rng rng(seed);
  docslim::TokenMatrix m = docslim::make_tokens(rows, cols);
  for (float& v : m.data) v = static_cast<float>(rng.normal());
  for (int i = 0; i < rows; ++i) {
    float* r = m.row(i);
    bool zero = true;
    for (int j = 0; j < cols; ++j) zero = zero && r[j] == 0.0f;
    if (zero) r[0] = 1.0f;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Naive scalar reference pipeline (independent of the Eigen-backed paths).
// ---------------------------------------------------------------------------

inline double naive_cosine(const docslim::TokenMatrix& m, int a, int b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (int j = 0; j < m.cols; ++j) {
    const double x = m.at(a, j);
    const double y = m.at(b, j);
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

inline std::vector<double> naive_max_sims(const docslim::TokenMatrix& m) {
  std::vector<double> best(m.rows, -2.0);
  for (int a = 0; a < m.rows; ++a) {
    for (int b = 0; b < m.rows; ++b) {
      if (a == b) continue;
      best[a] = std::max(best[a], naive_cosine(m, a, b));
    }
  }
  return best;
}

inline docslim::ClusterSplit naive_identify(const docslim::KmeansResult& km,
                                            const std::vector<double>& sims,
                                            int vote_r) {
  const int n = static_cast<int>(km.labels.size());
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return sims[a] > sims[b]; });
  const int r = std::min(vote_r, n);
  int num[2] = {0, 0};
  for (int k = 0; k < r; ++k) ++num[km.labels[order[k]]];
  int nonessential;
  if (num[0] != num[1]) {
    nonessential = num[0] > num[1] ? 0 : 1;
  } else {
    nonessential = km.labels[order[0]];
  }
  docslim::ClusterSplit split;
  split.centroids = km.centroids;
  split.vote_counts = {num[0], num[1]};
  split.essential_cluster = 1 - nonessential;
  for (int i = 0; i < n; ++i) {
    if (km.labels[i] == split.essential_cluster) {
      split.essential_idx.push_back(i);
    } else {
      split.nonessential_idx.push_back(i);
    }
  }
  return split;
}

inline std::vector<int> naive_assign(const docslim::TokenMatrix& m,
                                     const docslim::ClusterSplit& split) {
  std::vector<int> target;
  for (const int j : split.nonessential_idx) {
    int best_i = -1;
    double best = -2.0;
    for (const int i : split.essential_idx) {
      const double c = naive_cosine(m, i, j);
      if (c > best) {
        best = c;
        best_i = i;
      }
    }
    target.push_back(best_i);
  }
  return target;
}

inline double max_abs_diff(const docslim::TokenMatrix& a,
                           const docslim::TokenMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols) return 1e30;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    worst = std::max(worst, std::abs(static_cast<double>(a.data[i]) - b.data[i]));
  }
  return worst;
}

}  // namespace testsupport
