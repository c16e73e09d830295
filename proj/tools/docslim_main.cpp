// Copyright (c) 2026 The docslim Authors
// SPDX-License-Identifier: Apache-2.0
//
// docslim command line: slim images and token files, generate synthetic
// corpora with ground truth, render overlays and run benchmarks.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "docslim/docslim.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Exit codes: 0 ok, 2 bad arguments or conflicting spec, 3 I/O or decode
// failure, 4 image too small, 5 malformed token file, 1 unexpected.
constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitBadArgs = 2;
constexpr int kExitIo = 3;
constexpr int kExitImageTooSmall = 4;
constexpr int kExitBadTokenFile = 5;

std::int64_t parse_max_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) {
      return std::stoll(text);
    }
    return std::stoll(text.substr(0, x)) * std::stoll(text.substr(x + 1));
  } catch (const std::exception&) {
    throw docslim::Error("--max-size: expected an integer or NxM, got '" + text + "'");
  }
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw docslim::IoError("cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw docslim::IoError("write failed " + path.string());
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw docslim::IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw docslim::Error("bad JSON in " + path.string() + ": " + e.what());
  }
  return j;
}

struct ApsCliOpts {
  std::string input;
  std::string output;
  std::string report;
  std::string overlay;
  docslim::ApsParams params;
};

json slim_report(const std::string& input, const docslim::SlimResult& res,
                 int orig_h, int orig_w) {
  json bands_r = json::array();
  for (const docslim::Interval& iv : res.row_bands.intervals) {
    bands_r.push_back({iv.begin, iv.end});
  }
  json bands_c = json::array();
  for (const docslim::Interval& iv : res.col_bands.intervals) {
    bands_c.push_back({iv.begin, iv.end});
  }
  return json{{"input", input},
              {"orig", {orig_h, orig_w}},
              {"slimmed", {res.image.height, res.image.width}},
              {"row_bands", bands_r},
              {"col_bands", bands_c},
              {"reduction", res.reduction},
              {"guard_fired", res.guard_fired}};
}

int run_aps(const ApsCliOpts& opt) {
  const docslim::RgbImage img = docslim::read_png_rgb(opt.input);
  const docslim::SlimResult res = docslim::aps(img, opt.params);
  docslim::write_png(opt.output, res.image);
  if (!opt.overlay.empty()) {
    docslim::write_png(opt.overlay,
                       docslim::render_overlay(img, res.row_bands, res.col_bands));
  }
  if (!opt.report.empty()) {
    write_json_file(opt.report, slim_report(opt.input, res, img.height, img.width));
  }
  std::cout << opt.input << ": " << img.height << "x" << img.width << " -> "
            << res.image.height << "x" << res.image.width << " (reduction "
            << res.reduction << (res.guard_fired ? ", guard fired" : "") << ")\n";
  return kExitOk;
}

struct ResizeCliOpts {
  std::string input;
  std::string output;
  std::string max_size = "1728x1728";
};

int run_resize(const ResizeCliOpts& opt) {
  docslim::ResizePolicy policy;
  policy.max_pixels = parse_max_size(opt.max_size);
  if (policy.max_pixels < 1) {
    throw docslim::Error("--max-size: must be at least 1 pixel");
  }
  const docslim::RgbImage img = docslim::read_png_rgb(opt.input);
  const docslim::ResizePlan plan =
      docslim::plan_flexible_resize(img.height, img.width, policy);
  if (!plan.resized) {
    // Under the cap: the output is a byte-identical copy of the input file.
    fs::copy_file(opt.input, opt.output, fs::copy_options::overwrite_existing);
  } else {
    docslim::write_png(opt.output, docslim::resize_image(img, plan.out_h, plan.out_w));
  }
  std::cout << opt.input << ": " << img.height << "x" << img.width << " -> "
            << plan.out_h << "x" << plan.out_w << " (scale " << plan.scale << ")\n";
  return kExitOk;
}

struct DtsCliOpts {
  std::string input;
  std::string output;
  std::string sidecar;
  std::string projected;
  docslim::DtsParams params;
};

int run_dts(const DtsCliOpts& opt) {
  const docslim::TokenMatrix v = docslim::read_tokens_auto(opt.input);
  std::optional<docslim::TokenMatrix> vp;
  if (!opt.projected.empty()) vp = docslim::read_tokens_auto(opt.projected);
  const docslim::AggregationResult res = docslim::dts(v, vp, opt.params);
  docslim::write_dstk(opt.output, res.tokens);

  json sidecar;
  sidecar["kept_idx"] = res.kept_idx;
  json assignment = json::object();
  for (const auto& [j_idx, i_idx] : res.assignment) {
    assignment[std::to_string(j_idx)] = i_idx;
  }
  sidecar["assignment"] = assignment;
  json wi = json::object();
  for (const auto& [i_idx, w] : res.essential_weights) wi[std::to_string(i_idx)] = w;
  json wj = json::object();
  for (const auto& [j_idx, w] : res.nonessential_weights) wj[std::to_string(j_idx)] = w;
  sidecar["weights"] = json{{"w_i", wi}, {"w_j", wj}};
  sidecar["L_in"] = v.rows;
  sidecar["L_out"] = res.tokens.rows;
  sidecar["reduction"] = 1.0 - static_cast<double>(res.tokens.rows) / v.rows;
  sidecar["seed"] = opt.params.seed;
  const fs::path sidecar_path =
      opt.sidecar.empty() ? fs::path(opt.output + ".json") : fs::path(opt.sidecar);
  write_json_file(sidecar_path, sidecar);

  std::cout << opt.input << ": " << v.rows << " -> " << res.tokens.rows
            << " tokens (reduction " << sidecar["reduction"].get<double>() << ")\n";
  return kExitOk;
}

struct SynthCliOpts {
  std::string spec_path;
  std::string out_dir;
};

int run_synth(const SynthCliOpts& opt) {
  const json spec = load_json_file(opt.spec_path);
  const std::string kind = spec.value("kind", "doc");
  if (kind == "doc") {
    const int n = docslim::write_doc_corpus(docslim::doc_corpus_from_json(spec),
                                            opt.out_dir);
    std::cout << "wrote " << n << " pages to " << opt.out_dir << "\n";
  } else if (kind == "tokens") {
    const int n = docslim::write_token_corpus(docslim::token_corpus_from_json(spec),
                                              opt.out_dir);
    std::cout << "wrote " << n << " token instances to " << opt.out_dir << "\n";
  } else if (kind == "page") {
    const docslim::SynthDocSpec page = docslim::page_spec_from_json(spec);
    const auto [img, truth] = docslim::gen_document(page);
    fs::create_directories(opt.out_dir);
    docslim::write_png(fs::path(opt.out_dir) / "page_00000.png", img);
    write_json_file(fs::path(opt.out_dir) / "page_00000.truth.json",
                    docslim::to_json(truth, page.page_h, page.page_w));
    std::cout << "wrote 1 page to " << opt.out_dir << "\n";
  } else {
    throw docslim::Error("synth: unknown kind '" + kind + "'");
  }
  return kExitOk;
}

struct BenchApsCliOpts {
  std::string dir;
  std::string report;
  std::string csv;
  docslim::ApsParams params;
  int threads = 0;
};

int run_bench_aps(const BenchApsCliOpts& opt) {
  const docslim::ApsBenchReport report =
      docslim::run_aps_bench(opt.dir, opt.params, opt.threads);
  if (!opt.report.empty()) write_json_file(opt.report, docslim::to_json(report));
  if (!opt.csv.empty()) docslim::write_csv(report, opt.csv);
  std::cout << "items " << report.decoded << " (skipped " << report.skipped
            << "), mean reduction " << report.mean_reduction << ", mean ms "
            << report.mean_wall_ms;
  if (report.with_truth > 0) {
    std::cout << ", recall " << report.recall << ", precision " << report.precision
              << ", violations " << report.violations;
  }
  std::cout << "\n";
  return kExitOk;
}

struct BenchDtsCliOpts {
  std::string dir;
  std::string report;
  std::string csv;
  std::string baseline = "none";
  docslim::DtsParams params;
  int threads = 0;
};

int run_bench_dts(const BenchDtsCliOpts& opt) {
  const docslim::BaselineKind baseline = opt.baseline == "random"
                                             ? docslim::BaselineKind::kRandom
                                             : docslim::BaselineKind::kNone;
  const docslim::DtsBenchReport report =
      docslim::run_dts_bench(opt.dir, opt.params, baseline, opt.threads);
  if (!opt.report.empty()) write_json_file(opt.report, docslim::to_json(report));
  if (!opt.csv.empty()) docslim::write_csv(report, opt.csv);
  std::cout << "items " << report.items.size() << ", mean token reduction "
            << report.mean_reduction << ", avg len " << report.mean_len_in << " -> "
            << report.mean_len_out << ", mean ms " << report.mean_wall_ms;
  if (report.with_truth > 0) {
    std::cout << ", retention " << report.mean_retention_dts;
    if (baseline == docslim::BaselineKind::kRandom) {
      std::cout << " (random " << report.mean_retention_random << ")";
    }
  }
  std::cout << "\n";
  return kExitOk;
}

struct CalibrateCliOpts {
  int pages = 120;
  std::uint64_t seed = 20260601;
  std::string report;
};

// Sweep the redundancy threshold t_v over a grid on a built-in corpus that
// spans page sizes below and above the normalization size and text densities
// down to very sparse. A value passes when every planted band (wider than the
// normalized run threshold) is recalled and no removed line crosses a text
// block. The shipped default is the smallest passing grid value.
int run_calibrate_tv(const CalibrateCliOpts& opt) {
  docslim::DocCorpusSpec corpus;
  corpus.pages = opt.pages;
  corpus.seed = opt.seed;
  corpus.page_h = {600, 3000};
  corpus.page_w = {600, 3000};
  corpus.row_bands = {1, 3};
  corpus.col_bands = {0, 2};
  corpus.blank_frac = {0.25, 0.45};
  corpus.density = {0.05, 0.50};
  corpus.noise_amp = 4;

  docslim::ApsParams params;  // defaults except t_v, swept below

  struct PageProfiles {
    std::vector<double> rows, cols;
    int h = 0, w = 0;
    docslim::DocTruth truth;
  };
  std::vector<PageProfiles> pages(corpus.pages);
  docslim::parallel_for_items(
      corpus.pages, docslim::thread_budget(0), [&](int i) {
        const docslim::SynthDocSpec spec = docslim::sample_page_spec(corpus, i);
        auto [img, truth] = docslim::gen_document(spec);
        const docslim::GradientMap grad =
            docslim::gradient_map(docslim::to_grayscale(img), params.noise_thresh);
        const docslim::GradientMap norm =
            docslim::resize_map(grad, params.norm_size, params.norm_size);
        pages[i].rows = docslim::profile_sums(norm, docslim::BandAxis::kRows);
        pages[i].cols = docslim::profile_sums(norm, docslim::BandAxis::kCols);
        pages[i].h = img.height;
        pages[i].w = img.width;
        pages[i].truth = std::move(truth);
      });

  const std::vector<double> grid = {1,    2,    5,    10,    20,    50,   100,
                                    200,  500,  1000, 2000,  5000,  10000,
                                    20000, 50000, 100000};
  json rows = json::array();
  double chosen = -1.0;
  std::printf("%10s %10s %10s %10s\n", "t_v", "recall", "violations", "verdict");
  for (const double tv : grid) {
    long long eligible = 0, recalled = 0, violations = 0;
    for (const PageProfiles& page : pages) {
      auto eval_axis = [&](const std::vector<double>& profile, int dim,
                           const std::vector<docslim::Interval>& planted,
                           auto rect_lo, auto rect_hi) {
        const std::vector<docslim::Interval> bands = docslim::denormalize_bands(
            docslim::icr(profile, tv, params.run_thresh), params.norm_size, dim);
        const int tol = 2 * ((dim + params.norm_size - 1) / params.norm_size);
        for (const docslim::Interval& p : planted) {
          if (static_cast<double>(p.width()) * params.norm_size / dim <=
              params.run_thresh) {
            continue;
          }
          ++eligible;
          for (const docslim::Interval& b : bands) {
            if (std::abs(b.begin - p.begin) <= tol && std::abs(b.end - p.end) <= tol) {
              ++recalled;
              break;
            }
          }
        }
        for (const docslim::TextBlock& tb : page.truth.text_blocks) {
          const int lo = rect_lo(tb);
          const int hi = rect_hi(tb);
          for (const docslim::Interval& b : bands) {
            const int a = std::max(b.begin, lo);
            const int z = std::min(b.end, hi);
            if (z > a) violations += z - a;
          }
        }
      };
      eval_axis(page.rows, page.h, page.truth.row_bands.intervals,
                [](const docslim::TextBlock& tb) { return tb.y0; },
                [](const docslim::TextBlock& tb) { return tb.y1; });
      eval_axis(page.cols, page.w, page.truth.col_bands.intervals,
                [](const docslim::TextBlock& tb) { return tb.x0; },
                [](const docslim::TextBlock& tb) { return tb.x1; });
    }
    const bool full_recall = recalled == eligible && eligible > 0;
    const bool pass = full_recall && violations == 0;
    if (pass && chosen < 0.0) chosen = tv;
    std::printf("%10.0f %10.4f %10lld %10s\n", tv,
                eligible ? static_cast<double>(recalled) / eligible : 0.0, violations,
                pass ? "pass" : "FAIL");
    rows.push_back({{"tv", tv},
                    {"recall", eligible ? static_cast<double>(recalled) / eligible : 0.0},
                    {"violations", violations},
                    {"pass", pass}});
  }
  if (chosen < 0.0) {
    std::cerr << "no grid value passed; defaults unchanged\n";
    return kExitUnexpected;
  }
  std::printf("smallest passing t_v: %.0f (compiled default %.0f)\n", chosen,
              docslim::kDefaultValueThresh);
  if (!opt.report.empty()) {
    write_json_file(opt.report, json{{"grid", rows},
                                     {"chosen_tv", chosen},
                                     {"compiled_default", docslim::kDefaultValueThresh},
                                     {"pages", corpus.pages},
                                     {"seed", corpus.seed}});
  }
  return kExitOk;
}

void add_aps_params(CLI::App* cmd, docslim::ApsParams& params) {
  cmd->add_option("--size", params.norm_size, "Normalization size for the gradient map")
      ->capture_default_str();
  cmd->add_option("--tn", params.noise_thresh, "Gradient denoise threshold")
      ->capture_default_str();
  cmd->add_option("--tc", params.run_thresh, "Minimum redundant run length (strict)")
      ->capture_default_str();
  cmd->add_option("--tv", params.value_thresh, "Profile-sum redundancy threshold")
      ->capture_default_str();
  cmd->add_option("--max-removal-frac", params.max_removal_frac,
                  "Per-axis degeneracy guard")
      ->capture_default_str();
}

void add_dts_params(CLI::App* cmd, docslim::DtsParams& params) {
  cmd->add_option("--seed", params.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--vote-r", params.vote_r, "Top-R vote size")->capture_default_str();
  cmd->add_option("--kmeans-iters", params.kmeans_max_iters, "Max k-means iterations")
      ->capture_default_str();
  cmd->add_option("--kmeans-tol", params.kmeans_tol, "Centroid shift tolerance")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"docslim: pixel and token slimming for document imagery"};
  app.set_version_flag("--version", "docslim 0.1.0");
  app.require_subcommand(1);

  ApsCliOpts aps_opts;
  CLI::App* aps_cmd =
      app.add_subcommand("aps", "Remove redundant row/column bands from a PNG");
  aps_cmd->add_option("input", aps_opts.input, "Input PNG")->required();
  aps_cmd->add_option("-o,--output", aps_opts.output, "Slimmed PNG")->required();
  aps_cmd->add_option("--report", aps_opts.report, "Write a JSON report");
  aps_cmd->add_option("--overlay", aps_opts.overlay,
                      "Write an overlay PNG with removed bands tinted");
  add_aps_params(aps_cmd, aps_opts.params);

  ResizeCliOpts resize_opts;
  CLI::App* resize_cmd =
      app.add_subcommand("resize", "Cap total pixels, preserving aspect ratio");
  resize_cmd->add_option("input", resize_opts.input, "Input PNG")->required();
  resize_cmd->add_option("-o,--output", resize_opts.output, "Output PNG")->required();
  resize_cmd->add_option("--max-size", resize_opts.max_size,
                         "Pixel cap as NxM or a plain count")
      ->capture_default_str();

  DtsCliOpts dts_opts;
  CLI::App* dts_cmd =
      app.add_subcommand("dts", "Cluster and aggregate a token matrix");
  dts_cmd->add_option("input", dts_opts.input, "Input tokens (.dstk or .csv)")
      ->required();
  dts_cmd->add_option("-o,--output", dts_opts.output, "Compressed DSTK output")
      ->required();
  dts_cmd->add_option("--sidecar", dts_opts.sidecar,
                      "Sidecar JSON path (default: <output>.json)");
  dts_cmd->add_option("--projected", dts_opts.projected,
                      "Optional projected token matrix (.dstk or .csv)");
  add_dts_params(dts_cmd, dts_opts.params);

  SynthCliOpts synth_opts;
  CLI::App* synth_cmd =
      app.add_subcommand("synth", "Materialize a synthetic corpus from a JSON spec");
  synth_cmd->add_option("spec", synth_opts.spec_path, "Corpus spec JSON")->required();
  synth_cmd->add_option("-o,--out-dir", synth_opts.out_dir, "Output directory")
      ->required();

  BenchApsCliOpts bench_aps_opts;
  CLI::App* bench_aps_cmd =
      app.add_subcommand("bench-aps", "Benchmark APS over a PNG corpus");
  bench_aps_cmd->add_option("dir", bench_aps_opts.dir, "Corpus directory")->required();
  bench_aps_cmd->add_option("--report", bench_aps_opts.report, "Write JSON report");
  bench_aps_cmd->add_option("--csv", bench_aps_opts.csv, "Write CSV summary");
  bench_aps_cmd->add_option("--threads", bench_aps_opts.threads,
                            "Worker count (0 = auto, capped by DOCSLIM_THREADS)");
  add_aps_params(bench_aps_cmd, bench_aps_opts.params);

  BenchDtsCliOpts bench_dts_opts;
  CLI::App* bench_dts_cmd =
      app.add_subcommand("bench-dts", "Benchmark DTS over a DSTK corpus");
  bench_dts_cmd->add_option("dir", bench_dts_opts.dir, "Corpus directory")->required();
  bench_dts_cmd->add_option("--report", bench_dts_opts.report, "Write JSON report");
  bench_dts_cmd->add_option("--csv", bench_dts_opts.csv, "Write CSV summary");
  bench_dts_cmd->add_option("--baseline", bench_dts_opts.baseline,
                            "Comparison baseline: none or random")
      ->check(CLI::IsMember({"none", "random"}))
      ->capture_default_str();
  bench_dts_cmd->add_option("--threads", bench_dts_opts.threads,
                            "Worker count (0 = auto, capped by DOCSLIM_THREADS)");
  add_dts_params(bench_dts_cmd, bench_dts_opts.params);

  CalibrateCliOpts cal_opts;
  CLI::App* cal_cmd = app.add_subcommand(
      "calibrate-tv", "Sweep the t_v grid on the built-in calibration corpus");
  cal_cmd->add_option("--pages", cal_opts.pages, "Corpus size")->capture_default_str();
  cal_cmd->add_option("--seed", cal_opts.seed, "Corpus seed")->capture_default_str();
  cal_cmd->add_option("--report", cal_opts.report, "Write the sweep as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadArgs;
  }

  try {
    if (aps_cmd->parsed()) return run_aps(aps_opts);
    if (resize_cmd->parsed()) return run_resize(resize_opts);
    if (dts_cmd->parsed()) return run_dts(dts_opts);
    if (synth_cmd->parsed()) return run_synth(synth_opts);
    if (bench_aps_cmd->parsed()) return run_bench_aps(bench_aps_opts);
    if (bench_dts_cmd->parsed()) return run_bench_dts(bench_dts_opts);
    if (cal_cmd->parsed()) return run_calibrate_tv(cal_opts);
  } catch (const docslim::ImageTooSmall& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitImageTooSmall;
  } catch (const docslim::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadTokenFile;
  } catch (const docslim::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const docslim::Error& e) {
    // Validation problems, conflicting specs, degenerate outputs.
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadArgs;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return kExitUnexpected;
  }
  return kExitBadArgs;
}
