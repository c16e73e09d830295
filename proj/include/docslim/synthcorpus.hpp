// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "docslim/aps.hpp"
#include "docslim/dts.hpp"
#include "docslim/errors.hpp"
#include "docslim/image.hpp"
#include "docslim/png_io.hpp"
#include "docslim/rng.hpp"
#include "docslim/tokens.hpp"

namespace docslim {

// ---------------------------------------------------------------------------
// Synthetic document pages
// ---------------------------------------------------------------------------

/// Axis-aligned text region [y0, y1) x [x0, x1) filled with pseudo-text
/// strokes at the given density (approximate fraction of dark pixels).
struct TextBlock {
  int y0 = 0;
  int x0 = 0;
  int y1 = 0;
  int x1 = 0;
  double density = 0.3;
};

struct SynthDocSpec {
  int page_h = 0;
  int page_w = 0;
  std::vector<TextBlock> text_blocks;
  std::vector<Interval> blank_row_bands;
  std::vector<Interval> blank_col_bands;
  int noise_amp = 4;
  std::uint64_t seed = 0;
};

struct DocTruth {
  BandSet row_bands;
  BandSet col_bands;
  std::vector<TextBlock> text_blocks;
  double blank_frac = 0.0;
};

inline constexpr int kSynthBackground = 245;
// Sobel responses reach 8x the pixel amplitude, so noise must stay below
// kDefaultNoiseThresh / 8 for planted bands to denoise to exactly zero.
inline constexpr int kMaxNoiseAmp =
    static_cast<int>(kDefaultNoiseThresh / 8.0f) - 1;  // 5

namespace detail {

inline void check_sorted_bands(const std::vector<Interval>& bands, int dim,
                               const char* who) {
  int prev_end = -1;
  for (const Interval& iv : bands) {
    if (iv.end <= iv.begin || iv.begin < 0 || iv.end > dim) {
      throw Error(std::string(who) + ": invalid interval");
    }
    if (iv.begin <= prev_end) {
      throw Error(std::string(who) + ": intervals must be sorted and disjoint");
    }
    prev_end = iv.end;
  }
}

inline bool overlaps(int a0, int a1, int b0, int b1) {
  return a0 < b1 && b0 < a1;
}

}  // namespace detail

inline void validate(const SynthDocSpec& spec) {
  if (spec.page_h < 16 || spec.page_w < 16) {
    throw Error("SynthDocSpec: page must be at least 16x16");
  }
  if (spec.noise_amp < 0 || spec.noise_amp > kMaxNoiseAmp) {
    throw Error("SynthDocSpec: noise_amp must be in [0, " +
                std::to_string(kMaxNoiseAmp) + "] to stay below the denoise threshold");
  }
  detail::check_sorted_bands(spec.blank_row_bands, spec.page_h, "blank_row_bands");
  detail::check_sorted_bands(spec.blank_col_bands, spec.page_w, "blank_col_bands");
  for (const TextBlock& tb : spec.text_blocks) {
    if (tb.y0 < 0 || tb.x0 < 0 || tb.y1 > spec.page_h || tb.x1 > spec.page_w ||
        tb.y1 <= tb.y0 || tb.x1 <= tb.x0) {
      throw Error("SynthDocSpec: text block out of range");
    }
    if (!(tb.density > 0.0 && tb.density <= 1.0)) {
      throw Error("SynthDocSpec: density must be in (0, 1]");
    }
    for (const Interval& iv : spec.blank_row_bands) {
      if (detail::overlaps(iv.begin, iv.end, tb.y0, tb.y1)) {
        throw SpecConflict("SynthDocSpec: blank row band intersects a text block");
      }
    }
    for (const Interval& iv : spec.blank_col_bands) {
      if (detail::overlaps(iv.begin, iv.end, tb.x0, tb.x1)) {
        throw SpecConflict("SynthDocSpec: blank col band intersects a text block");
      }
    }
  }
}

/// Render a page: dense random strokes inside every text block (each row and
/// column of a block is guaranteed at least one stroke), uniform background
/// elsewhere, sub-threshold noise everywhere. Returns the exact planted bands.
inline std::pair<RgbImage, DocTruth> gen_document(const SynthDocSpec& spec) {
  validate(spec);
  const int h = spec.page_h;
  const int w = spec.page_w;
  RgbImage img = make_rgb(h, w, kSynthBackground, kSynthBackground, kSynthBackground);
  Rng rng(child_seed(spec.seed, 0x9a60));

  auto put = [&](int y, int x, int shade) {
    std::uint8_t* px = &img.at(y, x, 0);
    px[0] = px[1] = px[2] = static_cast<std::uint8_t>(shade);
  };

  for (const TextBlock& tb : spec.text_blocks) {
    const int bh = tb.y1 - tb.y0;
    const int bw = tb.x1 - tb.x0;
    std::vector<char> row_hit(bh, 0);
    std::vector<char> col_hit(bw, 0);
    auto mark = [&](int y, int x, int shade) {
      put(y, x, shade);
      row_hit[y - tb.y0] = 1;
      col_hit[x - tb.x0] = 1;
    };
    const double area = static_cast<double>(bh) * bw;
    const long strokes = std::max(1L, std::lround(tb.density * area / 10.0));
    for (long s = 0; s < strokes; ++s) {
      double y = static_cast<double>(rng.uniform_int(tb.y0, tb.y1 - 1));
      double x = static_cast<double>(rng.uniform_int(tb.x0, tb.x1 - 1));
      const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
      const int len = static_cast<int>(rng.uniform_int(3, 14));
      const int shade = static_cast<int>(rng.uniform_int(0, 60));
      const double dy = std::sin(angle);
      const double dx = std::cos(angle);
      for (int t = 0; t < len; ++t) {
        const int iy = static_cast<int>(std::lround(y));
        const int ix = static_cast<int>(std::lround(x));
        if (iy < tb.y0 || iy >= tb.y1 || ix < tb.x0 || ix >= tb.x1) break;
        mark(iy, ix, shade);
        y += dy;
        x += dx;
      }
    }
    // Coverage: no fully blank line may survive inside a text block.
    for (int y = tb.y0; y < tb.y1; ++y) {
      if (row_hit[y - tb.y0]) continue;
      const int x = static_cast<int>(rng.uniform_int(tb.x0, std::max(tb.x0, tb.x1 - 3)));
      const int shade = static_cast<int>(rng.uniform_int(0, 60));
      for (int t = 0; t < 3 && x + t < tb.x1; ++t) mark(y, x + t, shade);
    }
    for (int x = tb.x0; x < tb.x1; ++x) {
      if (col_hit[x - tb.x0]) continue;
      const int y = static_cast<int>(rng.uniform_int(tb.y0, std::max(tb.y0, tb.y1 - 3)));
      const int shade = static_cast<int>(rng.uniform_int(0, 60));
      for (int t = 0; t < 3 && y + t < tb.y1; ++t) mark(y + t, x, shade);
    }
  }

  if (spec.noise_amp > 0) {
    for (std::size_t i = 0; i < img.data.size(); i += 3) {
      const int delta = static_cast<int>(
          rng.uniform_int(-spec.noise_amp, spec.noise_amp));
      const int v = std::clamp(static_cast<int>(img.data[i]) + delta, 0, 255);
      img.data[i] = img.data[i + 1] = img.data[i + 2] =
          static_cast<std::uint8_t>(v);
    }
  }

  DocTruth truth;
  truth.row_bands = BandSet{BandAxis::kRows, spec.blank_row_bands};
  truth.col_bands = BandSet{BandAxis::kCols, spec.blank_col_bands};
  truth.text_blocks = spec.text_blocks;
  const double r = truth.row_bands.total_width();
  const double c = truth.col_bands.total_width();
  truth.blank_frac = (r * w + c * h - r * c) / (static_cast<double>(h) * w);
  return {std::move(img), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Synthetic token matrices
// ---------------------------------------------------------------------------

struct SynthTokenSpec {
  int n_redundant = 0;
  int n_content = 0;
  int dim = 0;
  double duplicate_jitter = 0.01;
  std::uint64_t seed = 0;
};

struct TokenTruth {
  std::vector<std::uint8_t> is_redundant;  // per row, 1 = planted duplicate
  int n_redundant = 0;
  int n_content = 0;
};

// Scale of the shared base vector for the redundant blob; pushing the blob
// away from the content shell keeps the two k-means clusters well separated.
inline constexpr double kRedundantBaseScale = 3.0;

inline void validate(const SynthTokenSpec& spec) {
  if (spec.n_redundant < 0 || spec.n_content < 0 ||
      spec.n_redundant + spec.n_content < 2) {
    throw Error("SynthTokenSpec: need at least 2 tokens in total");
  }
  if (spec.dim < 1) throw Error("SynthTokenSpec: dim must be >= 1");
  if (spec.duplicate_jitter < 0.0) {
    throw Error("SynthTokenSpec: duplicate_jitter must be >= 0");
  }
  if (spec.dim < spec.n_content) {
    throw DimTooSmall("SynthTokenSpec: dim must be >= n_content for an orthogonal content set");
  }
}

/// Planted instance: n_redundant jittered copies of one base vector plus
/// n_content mutually orthogonal unit vectors (random draws, Gram-Schmidt
/// decorrelated), shuffled. Truth labels follow the shuffle.
inline std::pair<TokenMatrix, TokenTruth> gen_tokens(const SynthTokenSpec& spec) {
  validate(spec);
  const int d = spec.dim;
  const int total = spec.n_redundant + spec.n_content;
  Rng rng(child_seed(spec.seed, 0x70c3));

  std::vector<std::vector<double>> content;
  content.reserve(spec.n_content);
  while (static_cast<int>(content.size()) < spec.n_content) {
    std::vector<double> vec(d);
    for (double& x : vec) x = rng.normal();
    for (const std::vector<double>& prev : content) {
      double dot = 0.0;
      for (int j = 0; j < d; ++j) dot += vec[j] * prev[j];
      for (int j = 0; j < d; ++j) vec[j] -= dot * prev[j];
    }
    double n2 = 0.0;
    for (const double x : vec) n2 += x * x;
    if (n2 < 1e-12) continue;  // degenerate draw, retry
    const double inv = 1.0 / std::sqrt(n2);
    for (double& x : vec) x *= inv;
    content.push_back(std::move(vec));
  }

  std::vector<double> base(d, 0.0);
  if (spec.n_redundant > 0) {
    double n2 = 0.0;
    while (n2 < 1e-12) {
      for (double& x : base) x = rng.normal();
      n2 = 0.0;
      for (const double x : base) n2 += x * x;
    }
    const double scale = kRedundantBaseScale / std::sqrt(n2);
    for (double& x : base) x *= scale;
  }

  std::vector<std::vector<double>> rows;
  rows.reserve(total);
  std::vector<std::uint8_t> redundant;
  redundant.reserve(total);
  for (int i = 0; i < spec.n_redundant; ++i) {
    std::vector<double> vec(d);
    for (int j = 0; j < d; ++j) vec[j] = base[j] + spec.duplicate_jitter * rng.normal();
    rows.push_back(std::move(vec));
    redundant.push_back(1);
  }
  for (int i = 0; i < spec.n_content; ++i) {
    rows.push_back(content[i]);
    redundant.push_back(0);
  }

  // Fisher-Yates shuffle so planted structure carries no positional signal.
  std::vector<int> order(total);
  for (int i = 0; i < total; ++i) order[i] = i;
  for (int i = total - 1; i > 0; --i) {
    const int k = static_cast<int>(rng.uniform_int(0, i));
    std::swap(order[i], order[k]);
  }

  TokenMatrix m = make_tokens(total, d);
  TokenTruth truth;
  truth.is_redundant.resize(total);
  truth.n_redundant = spec.n_redundant;
  truth.n_content = spec.n_content;
  for (int i = 0; i < total; ++i) {
    const std::vector<double>& src = rows[order[i]];
    float* dst = m.row(i);
    for (int j = 0; j < d; ++j) dst[j] = static_cast<float>(src[j]);
    truth.is_redundant[i] = redundant[order[i]];
  }
  return {std::move(m), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Reference oracle
// ---------------------------------------------------------------------------

/// Scalar triple-loop evaluation of the similarity-weighted aggregation,
/// deliberately free of any shared helpers or vectorized paths. Used only for
/// equivalence testing against dts::aggregate.
inline TokenMatrix oracle_aggregate(const TokenMatrix& vp, const ClusterSplit& split,
                                    const std::vector<int>& assignment) {
  const int d = vp.cols;
  const double euler = std::exp(1.0);
  auto cosine = [&](int a, int b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int j = 0; j < d; ++j) {
      const double x = vp.at(a, j);
      const double y = vp.at(b, j);
      dot += x * y;
      na += x * x;
      nb += y * y;
    }
    return dot / (std::sqrt(na) * std::sqrt(nb));
  };

  TokenMatrix out = make_tokens(static_cast<int>(split.essential_idx.size()), d);
  for (std::size_t a = 0; a < split.essential_idx.size(); ++a) {
    const int i = split.essential_idx[a];
    std::vector<int> assigned;
    for (std::size_t b = 0; b < split.nonessential_idx.size(); ++b) {
      if (assignment[b] == i) assigned.push_back(split.nonessential_idx[b]);
    }
    if (assigned.empty()) {
      for (int j = 0; j < d; ++j) out.at(static_cast<int>(a), j) = vp.at(i, j);
      continue;
    }
    double denom = euler;
    for (const int j : assigned) denom += std::exp(cosine(i, j));
    for (int jj = 0; jj < d; ++jj) {
      double acc = (euler / denom) * vp.at(i, jj);
      for (const int j : assigned) {
        acc += (std::exp(cosine(i, j)) / denom) * vp.at(j, jj);
      }
      out.at(static_cast<int>(a), jj) = static_cast<float>(acc);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Corpus sampling and materialization
// ---------------------------------------------------------------------------

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct DocCorpusSpec {
  int pages = 0;
  std::uint64_t seed = 0;
  IntRange page_h{800, 1400};
  IntRange page_w{800, 1400};
  IntRange row_bands{1, 3};
  IntRange col_bands{0, 2};
  RealRange blank_frac{0.30, 0.40};  // ignored when both band counts are 0
  RealRange density{0.15, 0.45};
  int noise_amp = 4;
};

struct TokenCorpusSpec {
  int instances = 0;
  std::uint64_t seed = 0;
  int dim = 64;
  IntRange n_redundant{30, 70};
  IntRange n_content{30, 70};
  double jitter = 0.01;
};

namespace detail {

// Split `total` into `parts` chunks, each at least `min_part`; the slack is
// distributed by random cuts.
inline std::vector<int> random_partition(Rng& rng, int total, int parts,
                                         int min_part) {
  std::vector<int> out(parts, min_part);
  int slack = total - parts * min_part;
  if (slack < 0) throw Error("random_partition: infeasible");
  std::vector<int> cuts(parts - 1);
  for (int& c : cuts) c = static_cast<int>(rng.uniform_int(0, slack));
  std::sort(cuts.begin(), cuts.end());
  int prev = 0;
  for (int k = 0; k + 1 < parts; ++k) {
    out[k] += cuts[k] - prev;
    prev = cuts[k];
  }
  out[parts - 1] += slack - prev;
  return out;
}

// Lay `widths.size()` disjoint bands across [0, dim) with every gap at least
// min_gap wide. Returns sorted intervals.
inline std::vector<Interval> place_bands(Rng& rng, int dim,
                                         const std::vector<int>& widths,
                                         int min_gap) {
  const int k = static_cast<int>(widths.size());
  if (k == 0) return {};
  int total_band = 0;
  for (const int w : widths) total_band += w;
  const std::vector<int> gaps =
      random_partition(rng, dim - total_band, k + 1, min_gap);
  std::vector<Interval> out;
  int pos = 0;
  for (int i = 0; i < k; ++i) {
    pos += gaps[i];
    out.push_back(Interval{pos, pos + widths[i]});
    pos += widths[i];
  }
  return out;
}

}  // namespace detail

/// Sample one page spec from the corpus distribution. Text blocks tile the
/// complement of the planted bands so that every unplanted line carries ink:
/// the planted bands are then exactly the redundant structure of the page.
inline SynthDocSpec sample_page_spec(const DocCorpusSpec& corpus, int index) {
  Rng rng(child_seed(corpus.seed, 0xd0c0 + static_cast<std::uint64_t>(index)));
  SynthDocSpec spec;
  spec.page_h = static_cast<int>(rng.uniform_int(corpus.page_h.lo, corpus.page_h.hi));
  spec.page_w = static_cast<int>(rng.uniform_int(corpus.page_w.lo, corpus.page_w.hi));
  spec.noise_amp = corpus.noise_amp;
  spec.seed = child_seed(corpus.seed, 0xbeef + static_cast<std::uint64_t>(index));

  int kr = static_cast<int>(rng.uniform_int(corpus.row_bands.lo, corpus.row_bands.hi));
  int kc = static_cast<int>(rng.uniform_int(corpus.col_bands.lo, corpus.col_bands.hi));
  const double target = rng.uniform(corpus.blank_frac.lo, corpus.blank_frac.hi);

  double row_frac = 0.0;
  double col_frac = 0.0;
  if (kr > 0 && kc > 0) {
    const double u = rng.uniform(0.35, 0.65);
    row_frac = target * u;
    col_frac = (target - row_frac) / (1.0 - row_frac);
  } else if (kr > 0) {
    row_frac = target;
  } else if (kc > 0) {
    col_frac = target;
  }

  auto make_axis = [&](int dim, int count, double frac) -> std::vector<Interval> {
    if (count == 0 || frac <= 0.0) return {};
    const int min_band = std::max(12, dim / 128 + 2);
    const int min_gap = std::max(24, dim / 40);
    int total = static_cast<int>(std::lround(frac * dim));
    total = std::min(total, dim - (count + 1) * min_gap);
    while (count > 1 && total < count * min_band) --count;
    if (count < 1 || total < min_band) return {};
    const std::vector<int> widths = detail::random_partition(rng, total, count, min_band);
    return detail::place_bands(rng, dim, widths, min_gap);
  };
  spec.blank_row_bands = make_axis(spec.page_h, kr, row_frac);
  spec.blank_col_bands = make_axis(spec.page_w, kc, col_frac);

  // Tile the complement of the bands with text blocks.
  auto segments = [](int dim, const std::vector<Interval>& bands) {
    std::vector<Interval> segs;
    int pos = 0;
    for (const Interval& iv : bands) {
      if (iv.begin > pos) segs.push_back(Interval{pos, iv.begin});
      pos = iv.end;
    }
    if (pos < dim) segs.push_back(Interval{pos, dim});
    return segs;
  };
  for (const Interval& rs : segments(spec.page_h, spec.blank_row_bands)) {
    for (const Interval& cs : segments(spec.page_w, spec.blank_col_bands)) {
      TextBlock tb;
      tb.y0 = rs.begin;
      tb.y1 = rs.end;
      tb.x0 = cs.begin;
      tb.x1 = cs.end;
      tb.density = rng.uniform(corpus.density.lo, corpus.density.hi);
      spec.text_blocks.push_back(tb);
    }
  }
  return spec;
}

inline SynthTokenSpec sample_token_spec(const TokenCorpusSpec& corpus, int index) {
  Rng rng(child_seed(corpus.seed, 0x70ce + static_cast<std::uint64_t>(index)));
  SynthTokenSpec spec;
  spec.dim = corpus.dim;
  spec.n_redundant =
      static_cast<int>(rng.uniform_int(corpus.n_redundant.lo, corpus.n_redundant.hi));
  spec.n_content =
      static_cast<int>(rng.uniform_int(corpus.n_content.lo, corpus.n_content.hi));
  spec.duplicate_jitter = corpus.jitter;
  spec.seed = child_seed(corpus.seed, 0xfeed + static_cast<std::uint64_t>(index));
  return spec;
}

// ---------------------------------------------------------------------------
// JSON forms
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const DocTruth& truth, int page_h, int page_w) {
  nlohmann::json j;
  j["h"] = page_h;
  j["w"] = page_w;
  j["row_bands"] = nlohmann::json::array();
  for (const Interval& iv : truth.row_bands.intervals) {
    j["row_bands"].push_back({iv.begin, iv.end});
  }
  j["col_bands"] = nlohmann::json::array();
  for (const Interval& iv : truth.col_bands.intervals) {
    j["col_bands"].push_back({iv.begin, iv.end});
  }
  j["text_rects"] = nlohmann::json::array();
  for (const TextBlock& tb : truth.text_blocks) {
    j["text_rects"].push_back({tb.y0, tb.x0, tb.y1, tb.x1});
  }
  j["blank_frac"] = truth.blank_frac;
  return j;
}

struct DocTruthFile {
  int h = 0;
  int w = 0;
  std::vector<Interval> row_bands;
  std::vector<Interval> col_bands;
  std::vector<std::array<int, 4>> text_rects;  // y0, x0, y1, x1
  double blank_frac = 0.0;
};

inline DocTruthFile doc_truth_from_json(const nlohmann::json& j) {
  DocTruthFile t;
  t.h = j.at("h").get<int>();
  t.w = j.at("w").get<int>();
  for (const auto& b : j.at("row_bands")) {
    t.row_bands.push_back(Interval{b.at(0).get<int>(), b.at(1).get<int>()});
  }
  for (const auto& b : j.at("col_bands")) {
    t.col_bands.push_back(Interval{b.at(0).get<int>(), b.at(1).get<int>()});
  }
  if (j.contains("text_rects")) {
    for (const auto& r : j.at("text_rects")) {
      t.text_rects.push_back({r.at(0).get<int>(), r.at(1).get<int>(),
                              r.at(2).get<int>(), r.at(3).get<int>()});
    }
  }
  t.blank_frac = j.value("blank_frac", 0.0);
  return t;
}

inline nlohmann::json to_json(const TokenTruth& truth) {
  nlohmann::json j;
  j["n_redundant"] = truth.n_redundant;
  j["n_content"] = truth.n_content;
  j["redundant_mask"] = truth.is_redundant;
  return j;
}

inline TokenTruth token_truth_from_json(const nlohmann::json& j) {
  TokenTruth t;
  t.n_redundant = j.at("n_redundant").get<int>();
  t.n_content = j.at("n_content").get<int>();
  for (const auto& v : j.at("redundant_mask")) {
    t.is_redundant.push_back(v.get<int>() ? 1 : 0);
  }
  return t;
}

namespace detail {

inline IntRange int_range(const nlohmann::json& j, const char* key, IntRange def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (v.is_number()) return IntRange{v.get<int>(), v.get<int>()};
  return IntRange{v.at(0).get<int>(), v.at(1).get<int>()};
}

inline RealRange real_range(const nlohmann::json& j, const char* key, RealRange def) {
  if (!j.contains(key)) return def;
  const auto& v = j.at(key);
  if (v.is_number()) return RealRange{v.get<double>(), v.get<double>()};
  return RealRange{v.at(0).get<double>(), v.at(1).get<double>()};
}

}  // namespace detail

inline DocCorpusSpec doc_corpus_from_json(const nlohmann::json& j) {
  DocCorpusSpec s;
  s.pages = j.at("pages").get<int>();
  s.seed = j.value("seed", 0ull);
  s.page_h = detail::int_range(j, "page_h", s.page_h);
  s.page_w = detail::int_range(j, "page_w", s.page_w);
  s.row_bands = detail::int_range(j, "row_bands", s.row_bands);
  s.col_bands = detail::int_range(j, "col_bands", s.col_bands);
  s.blank_frac = detail::real_range(j, "blank_frac", s.blank_frac);
  s.density = detail::real_range(j, "density", s.density);
  s.noise_amp = j.value("noise_amp", 4);
  return s;
}

inline TokenCorpusSpec token_corpus_from_json(const nlohmann::json& j) {
  TokenCorpusSpec s;
  s.instances = j.at("instances").get<int>();
  s.seed = j.value("seed", 0ull);
  s.dim = j.value("dim", 64);
  s.n_redundant = detail::int_range(j, "n_redundant", s.n_redundant);
  s.n_content = detail::int_range(j, "n_content", s.n_content);
  s.jitter = j.value("jitter", 0.01);
  return s;
}

inline SynthDocSpec page_spec_from_json(const nlohmann::json& j) {
  SynthDocSpec s;
  s.page_h = j.at("page_h").get<int>();
  s.page_w = j.at("page_w").get<int>();
  s.seed = j.value("seed", 0ull);
  s.noise_amp = j.value("noise_amp", 4);
  if (j.contains("text_blocks")) {
    for (const auto& b : j.at("text_blocks")) {
      TextBlock tb;
      const auto& r = b.at("rect");
      tb.y0 = r.at(0).get<int>();
      tb.x0 = r.at(1).get<int>();
      tb.y1 = r.at(2).get<int>();
      tb.x1 = r.at(3).get<int>();
      tb.density = b.value("density", 0.3);
      s.text_blocks.push_back(tb);
    }
  }
  if (j.contains("row_bands")) {
    for (const auto& b : j.at("row_bands")) {
      s.blank_row_bands.push_back(Interval{b.at(0).get<int>(), b.at(1).get<int>()});
    }
  }
  if (j.contains("col_bands")) {
    for (const auto& b : j.at("col_bands")) {
      s.blank_col_bands.push_back(Interval{b.at(0).get<int>(), b.at(1).get<int>()});
    }
  }
  return s;
}

/// Write `pages` numbered PNG + truth JSON pairs into `dir`.
inline int write_doc_corpus(const DocCorpusSpec& corpus,
                            const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (int i = 0; i < corpus.pages; ++i) {
    const SynthDocSpec spec = sample_page_spec(corpus, i);
    const auto [img, truth] = gen_document(spec);
    std::snprintf(name, sizeof(name), "page_%05d", i);
    write_png(dir / (std::string(name) + ".png"), img);
    std::ofstream out(dir / (std::string(name) + ".truth.json"));
    out << to_json(truth, spec.page_h, spec.page_w).dump(2) << "\n";
    if (!out) throw IoError("write_doc_corpus: cannot write truth JSON");
  }
  return corpus.pages;
}

/// Write `instances` numbered DSTK + truth JSON pairs into `dir`.
inline int write_token_corpus(const TokenCorpusSpec& corpus,
                              const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  char name[32];
  for (int i = 0; i < corpus.instances; ++i) {
    const SynthTokenSpec spec = sample_token_spec(corpus, i);
    const auto [tokens, truth] = gen_tokens(spec);
    std::snprintf(name, sizeof(name), "tokens_%05d", i);
    write_dstk(dir / (std::string(name) + ".dstk"), tokens);
    std::ofstream out(dir / (std::string(name) + ".truth.json"));
    out << to_json(truth).dump(2) << "\n";
    if (!out) throw IoError("write_token_corpus: cannot write truth JSON");
  }
  return corpus.instances;
}

}  // namespace docslim
