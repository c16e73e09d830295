// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "docslim/aps.hpp"
#include "docslim/dts.hpp"
#include "docslim/errors.hpp"
#include "docslim/parallel.hpp"
#include "docslim/png_io.hpp"
#include "docslim/rng.hpp"
#include "docslim/synthcorpus.hpp"
#include "docslim/tokens.hpp"

namespace docslim {

inline constexpr const char* kApsBenchSchema = "docslim-bench-aps/v1";
inline constexpr const char* kDtsBenchSchema = "docslim-bench-dts/v1";

namespace detail {

inline std::vector<std::filesystem::path> sorted_files(
    const std::filesystem::path& dir, const std::string& ext) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("bench: not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

inline std::filesystem::path truth_sibling(const std::filesystem::path& file) {
  std::filesystem::path p = file;
  p.replace_extension("");
  p += ".truth.json";
  return p;
}

inline double now_ms_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// Band matching: a band is matched when some counterpart has both edges
// within `tol` original lines.
inline bool band_matched(const Interval& a, const std::vector<Interval>& others,
                         int tol) {
  for (const Interval& b : others) {
    if (std::abs(a.begin - b.begin) <= tol && std::abs(a.end - b.end) <= tol) {
      return true;
    }
  }
  return false;
}

inline long long overlap_lines(const std::vector<Interval>& removed, int lo, int hi) {
  long long total = 0;
  for (const Interval& iv : removed) {
    const int a = std::max(iv.begin, lo);
    const int b = std::min(iv.end, hi);
    if (b > a) total += b - a;
  }
  return total;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// APS benchmark
// ---------------------------------------------------------------------------

struct ApsBenchItem {
  std::string file;
  bool ok = false;
  std::string error;
  int orig_h = 0, orig_w = 0;
  int slim_h = 0, slim_w = 0;
  double reduction = 0.0;
  bool guard_fired = false;
  double wall_ms = 0.0;
  bool has_truth = false;
  int eligible_bands = 0;   // planted bands wider than the normalized t_c
  int recalled_bands = 0;
  int detected_bands = 0;
  int matched_bands = 0;
  long long content_violations = 0;  // removed lines through text rects
  double planted_frac = 0.0;
};

struct ApsBenchReport {
  ApsParams params;
  std::vector<ApsBenchItem> items;
  int decoded = 0;
  int skipped = 0;
  double mean_reduction = 0.0;
  double mean_wall_ms = 0.0;
  double mean_planted_frac = 0.0;
  long long eligible = 0, recalled = 0, detected = 0, matched = 0, violations = 0;
  double recall = 1.0;
  double precision = 1.0;
  int with_truth = 0;
};

/// Run APS over every PNG in `dir` (sorted); sidecar "<stem>.truth.json"
/// files, when present, add band recall/precision and content-violation
/// counts. Undecodable files are skipped and counted. The slimming stage of
/// each item is timed individually on the worker that runs it.
inline ApsBenchReport run_aps_bench(const std::filesystem::path& dir,
                                    const ApsParams& params, int threads = 0) {
  validate(params);
  ApsBenchReport report;
  report.params = params;
  const std::vector<std::filesystem::path> files = detail::sorted_files(dir, ".png");
  report.items.resize(files.size());

  parallel_for_items(
      static_cast<int>(files.size()), thread_budget(threads), [&](int idx) {
        ApsBenchItem& item = report.items[idx];
        item.file = files[idx].filename().string();
        RgbImage img;
        try {
          img = read_png_rgb(files[idx]);
        } catch (const Error& e) {
          item.error = e.what();
          return;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const SlimResult slim = aps(img, params);
        item.wall_ms = detail::now_ms_since(t0);
        item.ok = true;
        item.orig_h = img.height;
        item.orig_w = img.width;
        item.slim_h = slim.image.height;
        item.slim_w = slim.image.width;
        item.reduction = slim.reduction;
        item.guard_fired = slim.guard_fired;

        const std::filesystem::path truth_path = detail::truth_sibling(files[idx]);
        if (!std::filesystem::exists(truth_path)) return;
        std::ifstream in(truth_path);
        nlohmann::json j;
        in >> j;
        const DocTruthFile truth = doc_truth_from_json(j);
        item.has_truth = true;
        item.planted_frac = truth.blank_frac;

        auto tol = [&](int dim) {
          return 2 * ((dim + params.norm_size - 1) / params.norm_size);
        };
        auto axis_stats = [&](const std::vector<Interval>& planted,
                              const std::vector<Interval>& found, int dim) {
          for (const Interval& p : planted) {
            const double norm_width =
                static_cast<double>(p.width()) * params.norm_size / dim;
            if (norm_width <= params.run_thresh) continue;
            ++item.eligible_bands;
            if (detail::band_matched(p, found, tol(dim))) ++item.recalled_bands;
          }
          for (const Interval& f : found) {
            ++item.detected_bands;
            if (detail::band_matched(f, planted, tol(dim))) ++item.matched_bands;
          }
        };
        axis_stats(truth.row_bands, slim.row_bands.intervals, img.height);
        axis_stats(truth.col_bands, slim.col_bands.intervals, img.width);
        for (const auto& rect : truth.text_rects) {
          item.content_violations +=
              detail::overlap_lines(slim.row_bands.intervals, rect[0], rect[2]);
          item.content_violations +=
              detail::overlap_lines(slim.col_bands.intervals, rect[1], rect[3]);
        }
      });

  for (const ApsBenchItem& item : report.items) {
    if (!item.ok) {
      ++report.skipped;
      continue;
    }
    ++report.decoded;
    report.mean_reduction += item.reduction;
    report.mean_wall_ms += item.wall_ms;
    if (item.has_truth) {
      ++report.with_truth;
      report.mean_planted_frac += item.planted_frac;
      report.eligible += item.eligible_bands;
      report.recalled += item.recalled_bands;
      report.detected += item.detected_bands;
      report.matched += item.matched_bands;
      report.violations += item.content_violations;
    }
  }
  if (report.decoded > 0) {
    report.mean_reduction /= report.decoded;
    report.mean_wall_ms /= report.decoded;
  }
  if (report.with_truth > 0) report.mean_planted_frac /= report.with_truth;
  if (report.eligible > 0) {
    report.recall = static_cast<double>(report.recalled) / report.eligible;
  }
  if (report.detected > 0) {
    report.precision = static_cast<double>(report.matched) / report.detected;
  }
  return report;
}

// ---------------------------------------------------------------------------
// DTS benchmark
// ---------------------------------------------------------------------------

enum class BaselineKind { kNone, kRandom };

struct DtsBenchItem {
  std::string file;
  int l_in = 0, l_out = 0, dim = 0;
  double reduction = 0.0;
  double wall_ms = 0.0;
  bool has_truth = false;
  double retention_dts = 0.0;     // fraction of planted content tokens kept
  double retention_random = 0.0;  // same budget, seeded uniform drop
};

struct DtsBenchReport {
  DtsParams params;
  BaselineKind baseline = BaselineKind::kNone;
  std::vector<DtsBenchItem> items;
  double mean_reduction = 0.0;
  double mean_wall_ms = 0.0;
  double mean_len_in = 0.0;
  double mean_len_out = 0.0;
  double mean_retention_dts = 0.0;
  double mean_retention_random = 0.0;
  int with_truth = 0;
};

/// Run DTS over every DSTK file in `dir` (sorted). Truth sidecars add
/// content-token retention; baseline = kRandom also drops each instance to
/// the same output length with a seeded uniform sample drawn from a separate
/// stream (it never influences the DTS outputs).
inline DtsBenchReport run_dts_bench(const std::filesystem::path& dir,
                                    const DtsParams& params, BaselineKind baseline,
                                    int threads = 0) {
  validate(params);
  DtsBenchReport report;
  report.params = params;
  report.baseline = baseline;
  const std::vector<std::filesystem::path> files = detail::sorted_files(dir, ".dstk");
  report.items.resize(files.size());
  std::vector<std::string> failures(files.size());

  parallel_for_items(
      static_cast<int>(files.size()), thread_budget(threads), [&](int idx) {
        DtsBenchItem& item = report.items[idx];
        item.file = files[idx].filename().string();
        TokenMatrix tokens;
        try {
          tokens = read_dstk(files[idx]);
        } catch (const Error& e) {
          failures[idx] = e.what();
          return;
        }
        const auto t0 = std::chrono::steady_clock::now();
        const AggregationResult result = dts(tokens, params);
        item.wall_ms = detail::now_ms_since(t0);
        item.l_in = tokens.rows;
        item.l_out = result.tokens.rows;
        item.dim = tokens.cols;
        item.reduction = 1.0 - static_cast<double>(item.l_out) / item.l_in;

        const std::filesystem::path truth_path = detail::truth_sibling(files[idx]);
        if (!std::filesystem::exists(truth_path)) return;
        std::ifstream in(truth_path);
        nlohmann::json j;
        in >> j;
        const TokenTruth truth = token_truth_from_json(j);
        if (static_cast<int>(truth.is_redundant.size()) != tokens.rows ||
            truth.n_content == 0) {
          return;
        }
        item.has_truth = true;
        int kept_content = 0;
        for (const int i : result.kept_idx) {
          if (!truth.is_redundant[i]) ++kept_content;
        }
        item.retention_dts = static_cast<double>(kept_content) / truth.n_content;

        if (baseline == BaselineKind::kRandom) {
          Rng rng(child_seed(params.seed ^ 0x5eedba5eull, idx));
          std::vector<int> pool(tokens.rows);
          for (int i = 0; i < tokens.rows; ++i) pool[i] = i;
          int random_content = 0;
          for (int k = 0; k < item.l_out; ++k) {  // partial Fisher-Yates
            const int pick =
                static_cast<int>(rng.uniform_int(k, tokens.rows - 1));
            std::swap(pool[k], pool[pick]);
            if (!truth.is_redundant[pool[k]]) ++random_content;
          }
          item.retention_random =
              static_cast<double>(random_content) / truth.n_content;
        }
      });

  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (!failures[i].empty()) throw FormatError(failures[i]);
  }
  const int n = static_cast<int>(report.items.size());
  for (const DtsBenchItem& item : report.items) {
    report.mean_reduction += item.reduction;
    report.mean_wall_ms += item.wall_ms;
    report.mean_len_in += item.l_in;
    report.mean_len_out += item.l_out;
    if (item.has_truth) {
      ++report.with_truth;
      report.mean_retention_dts += item.retention_dts;
      report.mean_retention_random += item.retention_random;
    }
  }
  if (n > 0) {
    report.mean_reduction /= n;
    report.mean_wall_ms /= n;
    report.mean_len_in /= n;
    report.mean_len_out /= n;
  }
  if (report.with_truth > 0) {
    report.mean_retention_dts /= report.with_truth;
    report.mean_retention_random /= report.with_truth;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Report serialization
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const ApsBenchReport& r) {
  nlohmann::json j;
  j["schema"] = kApsBenchSchema;
  j["params"] = {{"size", r.params.norm_size},
                 {"tn", r.params.noise_thresh},
                 {"tc", r.params.run_thresh},
                 {"tv", r.params.value_thresh},
                 {"max_removal_frac", r.params.max_removal_frac}};
  j["items"] = nlohmann::json::array();
  for (const ApsBenchItem& it : r.items) {
    nlohmann::json e{{"file", it.file}, {"ok", it.ok}};
    if (!it.ok) {
      e["error"] = it.error;
    } else {
      e["orig"] = {it.orig_h, it.orig_w};
      e["slimmed"] = {it.slim_h, it.slim_w};
      e["pixel_reduction"] = it.reduction;
      e["guard_fired"] = it.guard_fired;
      e["wall_time_ms"] = it.wall_ms;
      if (it.has_truth) {
        e["planted_frac"] = it.planted_frac;
        e["eligible_bands"] = it.eligible_bands;
        e["recalled_bands"] = it.recalled_bands;
        e["detected_bands"] = it.detected_bands;
        e["matched_bands"] = it.matched_bands;
        e["content_violations"] = it.content_violations;
      }
    }
    j["items"].push_back(std::move(e));
  }
  j["aggregate"] = {{"items", r.decoded},
                    {"skipped", r.skipped},
                    {"pixel_reduction", r.mean_reduction},
                    {"wall_time_ms", r.mean_wall_ms},
                    {"planted_frac", r.mean_planted_frac},
                    {"band_recall", r.recall},
                    {"band_precision", r.precision},
                    {"content_violations", r.violations},
                    {"with_truth", r.with_truth}};
  return j;
}

inline nlohmann::json to_json(const DtsBenchReport& r) {
  nlohmann::json j;
  j["schema"] = kDtsBenchSchema;
  j["params"] = {{"vote_r", r.params.vote_r},
                 {"kmeans_max_iters", r.params.kmeans_max_iters},
                 {"kmeans_tol", r.params.kmeans_tol},
                 {"seed", r.params.seed}};
  j["baseline"] = r.baseline == BaselineKind::kRandom ? "random" : "none";
  j["items"] = nlohmann::json::array();
  for (const DtsBenchItem& it : r.items) {
    nlohmann::json e{{"file", it.file},
                     {"L_in", it.l_in},
                     {"L_out", it.l_out},
                     {"dim", it.dim},
                     {"token_reduction", it.reduction},
                     {"wall_time_ms", it.wall_ms}};
    if (it.has_truth) {
      e["content_retention"] = it.retention_dts;
      if (r.baseline == BaselineKind::kRandom) {
        e["content_retention_random"] = it.retention_random;
      }
    }
    j["items"].push_back(std::move(e));
  }
  j["aggregate"] = {{"items", static_cast<int>(r.items.size())},
                    {"token_reduction", r.mean_reduction},
                    {"avg_token_len_before", r.mean_len_in},
                    {"avg_token_len_after", r.mean_len_out},
                    {"wall_time_ms", r.mean_wall_ms},
                    {"content_retention", r.mean_retention_dts},
                    {"content_retention_random", r.mean_retention_random},
                    {"with_truth", r.with_truth}};
  return j;
}

inline void write_csv(const ApsBenchReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("write_csv: cannot open " + path.string());
  out << "file,ok,orig_h,orig_w,slim_h,slim_w,pixel_reduction,guard_fired,"
         "wall_time_ms,planted_frac,content_violations\n";
  for (const ApsBenchItem& it : r.items) {
    out << it.file << ',' << (it.ok ? 1 : 0) << ',' << it.orig_h << ',' << it.orig_w
        << ',' << it.slim_h << ',' << it.slim_w << ',' << it.reduction << ','
        << (it.guard_fired ? 1 : 0) << ',' << it.wall_ms << ',' << it.planted_frac
        << ',' << it.content_violations << '\n';
  }
}

inline void write_csv(const DtsBenchReport& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("write_csv: cannot open " + path.string());
  out << "file,L_in,L_out,dim,token_reduction,wall_time_ms,content_retention,"
         "content_retention_random\n";
  for (const DtsBenchItem& it : r.items) {
    out << it.file << ',' << it.l_in << ',' << it.l_out << ',' << it.dim << ','
        << it.reduction << ',' << it.wall_ms << ',' << it.retention_dts << ','
        << it.retention_random << '\n';
  }
}

}  // namespace docslim
