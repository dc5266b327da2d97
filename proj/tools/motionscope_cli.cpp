// motionscope command-line front end: trajectory cleaning, wavelet energy
// analysis, window selection and extraction, batch processing, frame
// metrics, and rotary-embedding inspection utilities.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "motionscope/error.hpp"
#include "motionscope/image_io.hpp"
#include "motionscope/keypoints.hpp"
#include "motionscope/latent.hpp"
#include "motionscope/metrics.hpp"
#include "motionscope/pipeline.hpp"
#include "motionscope/plot.hpp"
#include "motionscope/rope.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace motionscope;

namespace {

struct CliOptions {
  PipelineConfig config;
  std::string config_file;
};

void load_config_file(PipelineConfig& config, const std::string& path) {
  json doc = json::parse(read_file(path));
  if (doc.contains("joint_index")) config.joint_index = doc["joint_index"].get<int>();
  if (doc.contains("window_seconds")) config.window_seconds = doc["window_seconds"].get<double>();
  if (doc.contains("peak_threshold_frames"))
    config.peak_threshold_frames = doc["peak_threshold_frames"].get<int>();
  if (doc.contains("boundary_margin_frames"))
    config.boundary_margin_frames = doc["boundary_margin_frames"].get<int>();
  if (doc.contains("conf_min")) config.cleaning.conf_min = doc["conf_min"].get<double>();
  if (doc.contains("outlier_factor"))
    config.cleaning.outlier_factor = doc["outlier_factor"].get<double>();
  if (doc.contains("scale_min")) config.cwt.scale_min = doc["scale_min"].get<int>();
  if (doc.contains("scale_max")) config.cwt.scale_max = doc["scale_max"].get<int>();
  if (doc.contains("scale_step")) config.cwt.scale_step = doc["scale_step"].get<int>();
  if (doc.contains("morlet_omega0")) config.cwt.morlet_omega0 = doc["morlet_omega0"].get<double>();
  if (doc.contains("codec")) config.transcoder.codec = doc["codec"].get<std::string>();
  if (doc.contains("quality")) config.transcoder.quality = doc["quality"].get<int>();
  if (doc.contains("transcoder")) config.transcoder.executable = doc["transcoder"].get<std::string>();
  if (doc.contains("workers")) config.workers = doc["workers"].get<int>();
}

// Shared pipeline flags. The config file is applied before CLI11
// parses (see main), so explicit flags always win over file values.
void add_config_flags(CLI::App* app, CliOptions& opts) {
  app->add_option("--config", opts.config_file, "JSON config file")
      ->check(CLI::ExistingFile);
  app->add_option("--joint-index", opts.config.joint_index, "joint to analyze (default 0)");
  app->add_option("--window-seconds", opts.config.window_seconds, "target window length");
  app->add_option("--peak-threshold", opts.config.peak_threshold_frames,
                  "minimum peak width in frames");
  app->add_option("--boundary-margin", opts.config.boundary_margin_frames,
                  "boundary snap margin in frames");
  app->add_option("--conf-min", opts.config.cleaning.conf_min, "confidence validity threshold");
  app->add_option("--outlier-factor", opts.config.cleaning.outlier_factor,
                  "outlier threshold as a multiple of the median displacement");
  app->add_option("--scale-min", opts.config.cwt.scale_min, "smallest wavelet scale");
  app->add_option("--scale-max", opts.config.cwt.scale_max, "largest wavelet scale");
  app->add_option("--scale-step", opts.config.cwt.scale_step, "wavelet scale stride");
  app->add_option("--codec", opts.config.transcoder.codec, "transcoder video codec");
  app->add_option("--quality", opts.config.transcoder.quality, "transcoder quality factor (CRF)");
  app->add_option("--workers", opts.config.workers, "batch worker count");
}

int cmd_clean(const std::string& input, const std::string& output,
              const std::string& report_path, const CliOptions& opts) {
  auto [cleaned, report] =
      clean_sequence(parse_keypoints(read_file(input)), opts.config.cleaning);
  const std::string doc = serialize_keypoints(cleaned) + "\n";
  if (output.empty()) {
    std::cout << doc;
  } else {
    write_file(output, doc);
  }
  if (!report_path.empty()) write_file(report_path, cleaning_report_json(report));
  std::cerr << "interpolated " << report.interpolated_count << " joints, removed "
            << report.outlier_count << " outliers\n";
  return kExitOk;
}

int cmd_analyze(const std::string& input, const std::string& csv_path,
                const std::string& velocity_csv_path, const std::string& svg_path,
                const CliOptions& opts) {
  AnalysisResult result = analyze_file(input, opts.config);
  const std::string csv = energy_csv(result.energy);
  if (csv_path.empty()) {
    std::cout << csv;
  } else {
    write_file(csv_path, csv);
  }
  if (!velocity_csv_path.empty()) write_file(velocity_csv_path, velocity_csv(result.velocity));
  if (!svg_path.empty()) {
    const WindowSelection sel =
        select_window(result.energy, result.cleaned.fps,
                      static_cast<int>(result.cleaned.frame_count()),
                      opts.config.window_seconds, opts.config.boundary_margin_frames);
    write_file(svg_path, energy_svg(result.energy, sel));
  }
  return kExitOk;
}

int cmd_select(const std::string& input, const std::string& output, const CliOptions& opts) {
  SelectionResult result = select_file(input, opts.config);
  const std::string doc = selection_to_json(result.selection);
  if (output.empty()) {
    std::cout << doc;
  } else {
    write_file(output, doc);
  }
  return kExitOk;
}

int cmd_extract(const std::string& video, const std::string& keypoints,
                const std::string& output, const CliOptions& opts) {
  run_extract(video, keypoints, output, opts.config);
  std::cerr << "wrote " << output << "\n";
  return kExitOk;
}

int cmd_batch(const std::string& manifest, bool select_only, const CliOptions& opts) {
  BatchReport report = run_batch(manifest, opts.config, select_only);
  for (const BatchEntryResult& r : report.entries) {
    if (r.ok) {
      std::cout << "ok\t" << r.entry.output_path << "\n";
    } else {
      std::cout << "fail\t" << r.entry.keypoints_path << "\t" << r.error << "\n";
    }
  }
  std::cerr << report.entries.size() - report.failures << " succeeded, " << report.failures
            << " failed\n";
  return report.failures == 0 ? kExitOk : kExitPartialBatchFailure;
}

std::map<std::string, fs::path> list_frames(const fs::path& dir) {
  std::map<std::string, fs::path> frames;
  if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension();
    if (ext == ".png" || ext == ".ppm" || ext == ".pgm") {
      frames[entry.path().filename()] = entry.path();
    }
  }
  if (frames.empty()) throw InputError("no frame images in " + dir.string());
  return frames;
}

int cmd_eval(const std::string& dir_a, const std::string& dir_b, const std::string& output,
             const std::string& per_frame_csv, const std::string& pred_kp,
             const std::string& gt_kp, double pck_alpha) {
  const auto frames_a = list_frames(dir_a);
  const auto frames_b = list_frames(dir_b);

  std::vector<FrameMetrics> per_frame;
  for (const auto& [name, path_a] : frames_a) {
    auto it = frames_b.find(name);
    if (it == frames_b.end()) throw InputError("missing counterpart for frame " + name);
    const FrameImage a = load_image(path_a);
    const FrameImage b = load_image(it->second);
    FrameMetrics m;
    m.name = name;
    const PsnrValue p = psnr(a, b);
    if (!p.infinite) m.psnr_db = p.db;
    m.ssim = ssim(a, b);
    m.l1 = l1(a, b);
    per_frame.push_back(std::move(m));
  }
  MetricReport report = aggregate_metrics(per_frame);
  if (!pred_kp.empty() && !gt_kp.empty()) {
    report.pck =
        pck(parse_keypoints(read_file(pred_kp)), parse_keypoints(read_file(gt_kp)), pck_alpha);
  }

  json doc{{"frames", report.per_frame.size()},
           {"psnr_infinite", report.psnr_infinite},
           {"ssim", report.ssim},
           {"l1", report.l1}};
  if (!report.psnr_infinite) doc["psnr_db"] = report.psnr_db;
  if (report.pck) doc["pck"] = *report.pck;
  const std::string text = doc.dump(2) + "\n";
  if (output.empty()) {
    std::cout << text;
  } else {
    write_file(output, text);
  }

  if (!per_frame_csv.empty()) {
    std::string csv = "frame,psnr_db,ssim,l1\n";
    for (const FrameMetrics& m : report.per_frame) {
      csv += m.name + "," + (m.psnr_db ? std::to_string(*m.psnr_db) : "inf") + "," +
             std::to_string(m.ssim) + "," + std::to_string(m.l1) + "\n";
    }
    write_file(per_frame_csv, csv);
  }
  return kExitOk;
}

int cmd_eval_pck(const std::string& pred, const std::string& gt, double alpha) {
  const double value =
      pck(parse_keypoints(read_file(pred)), parse_keypoints(read_file(gt)), alpha);
  json doc{{"pck", value}, {"alpha", alpha}};
  std::cout << doc.dump(2) << "\n";
  return kExitOk;
}

bool nearly_equal(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Randomized invariant sweep over layouts, vectors and positions.
int cmd_rope_selfcheck(int cases, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<int> pos_dist(0, 63);
  std::uniform_int_distribution<int> offs_dist(1, 32);
  const std::vector<int> dims{8, 16, 32, 64, 128};

  int failures = 0;
  auto check = [&failures](bool ok, const std::string& what) {
    std::cout << (ok ? "pass" : "FAIL") << "  " << what << "\n";
    if (!ok) ++failures;
  };

  for (int c = 0; c < cases; ++c) {
    FrequencyLayout layout = FrequencyLayout::make(dims[c % dims.size()]);
    const AxisFrequencies base = base_frequencies(layout);

    // Norm preservation
    std::vector<double> vec(layout.head_dim);
    for (double& v : vec) v = unit(rng);
    GridPosition pos{pos_dist(rng), pos_dist(rng), pos_dist(rng)};
    const std::vector<double> rotated = apply_rope(vec, pos, base, layout);
    double n0 = 0.0, n1 = 0.0;
    for (int d = 0; d < layout.head_dim; ++d) {
      n0 += vec[d] * vec[d];
      n1 += rotated[d] * rotated[d];
    }
    check(nearly_equal(std::sqrt(n0), std::sqrt(n1), 1e-12),
          "norm preserved (d'=" + std::to_string(layout.head_dim) + ")");

    // Translation invariance of scores, with and without low-frequency scaling
    std::vector<std::vector<double>> q(3, std::vector<double>(layout.head_dim));
    std::vector<std::vector<double>> k(3, std::vector<double>(layout.head_dim));
    std::vector<GridPosition> qp(3), kp(3);
    for (int i = 0; i < 3; ++i) {
      for (double& v : q[i]) v = unit(rng);
      for (double& v : k[i]) v = unit(rng);
      qp[i] = {pos_dist(rng), pos_dist(rng), pos_dist(rng)};
      kp[i] = {pos_dist(rng), pos_dist(rng), pos_dist(rng)};
    }
    const GridPosition offset{offs_dist(rng), offs_dist(rng), offs_dist(rng)};
    for (bool low_freq : {false, true}) {
      const auto s0 = attention_scores(q, qp, k, kp, layout, low_freq);
      std::vector<GridPosition> qp2 = qp, kp2 = kp;
      for (auto* ps : {&qp2, &kp2}) {
        for (GridPosition& p : *ps) {
          p.t += offset.t;
          p.h += offset.h;
          p.w += offset.w;
        }
      }
      const auto s1 = attention_scores(q, qp2, k, kp2, layout, low_freq);
      double max_diff = 0.0;
      for (std::size_t i = 0; i < s0.size(); ++i) {
        for (std::size_t j = 0; j < s0[i].size(); ++j) {
          max_diff = std::max(max_diff, std::abs(s0[i][j] - s1[i][j]));
        }
      }
      check(max_diff <= 1e-10, std::string("translation invariance") +
                                   (low_freq ? " (low-freq scaled)" : " (standard)"));
    }

    // Scaling locality: exactly the expected entries change, all by gamma
    const LowFreqScaleResult scaled = scale_low_frequencies(layout, base);
    const int expected = static_cast<int>(std::lround(layout.alpha * layout.pairs_h)) +
                         static_cast<int>(std::lround(layout.alpha * layout.pairs_w));
    bool locality = scaled.scaled_count == expected;
    for (std::size_t j = 0; j < base.t.size(); ++j) {
      locality = locality && scaled.freqs.t[j] == base.t[j];
    }
    check(locality, "low-frequency scaling locality");
    if (!scaled.monotonic) {
      std::cout << "note  scaling broke per-axis frequency ordering (gamma too large)\n";
    }
  }

  std::cout << (failures == 0 ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  return failures == 0 ? kExitOk : kExitInputError;
}

int cmd_rope_dump_freqs(int head_dim, double base, double alpha, double motion_scale,
                        double space_scale_factor) {
  FrequencyLayout layout = FrequencyLayout::make(head_dim);
  layout.base = base;
  layout.alpha = alpha;
  layout.motion_scale = motion_scale;
  layout.space_scale_factor = space_scale_factor;
  const AxisFrequencies freqs = base_frequencies(layout);
  const LowFreqScaleResult scaled = scale_low_frequencies(layout, freqs);

  std::cout << "axis,index,base_freq,scaled_freq\n";
  auto dump = [&](const char* axis, const std::vector<double>& before,
                  const std::vector<double>& after) {
    for (std::size_t j = 0; j < before.size(); ++j) {
      std::printf("%s,%zu,%.17g,%.17g\n", axis, j + 1, before[j], after[j]);
    }
  };
  dump("t", freqs.t, scaled.freqs.t);
  dump("h", freqs.h, scaled.freqs.h);
  dump("w", freqs.w, scaled.freqs.w);
  if (scaled.no_low_band) std::cerr << "warning: low band is empty (round(alpha*c) == 0)\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Complex-motion window extraction, rotary embedding kernels, and "
               "frame metrics"};
  app.require_subcommand(1);
  CliOptions opts;

  // Apply the config file before flag parsing so flag values override it.
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string_view(argv[i]) == "--config") {
      try {
        load_config_file(opts.config, argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "error: bad config file: " << e.what() << "\n";
        return kExitInputError;
      }
    }
  }

  // clean
  auto* clean = app.add_subcommand("clean", "Clean a keypoint document");
  std::string clean_in, clean_out, clean_report;
  clean->add_option("input", clean_in, "keypoint document")->required()->check(CLI::ExistingFile);
  clean->add_option("-o,--output", clean_out, "cleaned document path (default stdout)");
  clean->add_option("--report", clean_report, "cleaning report path");
  add_config_flags(clean, opts);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute the wavelet energy series");
  std::string an_in, an_csv, an_vel_csv, an_svg;
  analyze->add_option("input", an_in, "keypoint document")->required()->check(CLI::ExistingFile);
  analyze->add_option("-o,--csv", an_csv, "energy CSV path (default stdout)");
  analyze->add_option("--velocity-csv", an_vel_csv, "velocity CSV path");
  analyze->add_option("--svg", an_svg, "energy plot SVG path");
  add_config_flags(analyze, opts);

  // select-window
  auto* select = app.add_subcommand("select-window", "Choose the highest-energy window");
  std::string sel_in, sel_out;
  select->add_option("input", sel_in, "keypoint document")->required()->check(CLI::ExistingFile);
  select->add_option("-o,--output", sel_out, "selection document path (default stdout)");
  add_config_flags(select, opts);

  // extract
  auto* extract = app.add_subcommand("extract", "Extract the selected clip via the transcoder");
  std::string ex_video, ex_kp, ex_out;
  extract->add_option("video", ex_video, "input video")->required();
  extract->add_option("keypoints", ex_kp, "keypoint document")->required()->check(CLI::ExistingFile);
  extract->add_option("-o,--output", ex_out, "output clip path")->required();
  add_config_flags(extract, opts);

  // batch
  auto* batch = app.add_subcommand("batch", "Process a newline-delimited manifest");
  std::string batch_manifest;
  bool batch_select_only = false;
  batch->add_option("manifest", batch_manifest, "manifest path")->required()->check(CLI::ExistingFile);
  batch->add_flag("--select-only", batch_select_only,
                  "write selection documents without transcoding");
  add_config_flags(batch, opts);

  // eval
  auto* eval = app.add_subcommand("eval", "Frame metrics between two directories");
  std::string eval_a, eval_b, eval_out, eval_csv, eval_pred_kp, eval_gt_kp;
  double eval_alpha = 0.5;
  eval->add_option("reference", eval_a, "reference frame directory")->required();
  eval->add_option("candidate", eval_b, "candidate frame directory")->required();
  eval->add_option("-o,--output", eval_out, "metric report path (default stdout)");
  eval->add_option("--per-frame-csv", eval_csv, "per-frame CSV path");
  eval->add_option("--pred-keypoints", eval_pred_kp, "predicted keypoint document for PCK");
  eval->add_option("--gt-keypoints", eval_gt_kp, "ground-truth keypoint document for PCK");
  eval->add_option("--pck-alpha", eval_alpha, "PCK threshold fraction");

  // eval-pck
  auto* evalpck = app.add_subcommand("eval-pck", "PCK between two keypoint documents");
  std::string pck_pred, pck_gt;
  double pck_alpha = 0.5;
  evalpck->add_option("predicted", pck_pred)->required()->check(CLI::ExistingFile);
  evalpck->add_option("ground_truth", pck_gt)->required()->check(CLI::ExistingFile);
  evalpck->add_option("--alpha", pck_alpha, "threshold fraction of the box diagonal");

  // rope
  auto* rope = app.add_subcommand("rope", "Rotary embedding utilities");
  rope->require_subcommand(1);
  auto* selfcheck = rope->add_subcommand("selfcheck", "Run the randomized invariant suite");
  int sc_cases = 25;
  unsigned sc_seed = 12345;
  selfcheck->add_option("--cases", sc_cases, "number of random cases");
  selfcheck->add_option("--seed", sc_seed, "RNG seed");
  auto* dumpfreqs = rope->add_subcommand("dump-freqs", "Emit per-axis frequencies as CSV");
  int df_dim = 128;
  double df_base = 10000.0, df_alpha = 0.30, df_motion = 1.5, df_space = 0.02;
  dumpfreqs->add_option("--head-dim", df_dim, "head dimension d'");
  dumpfreqs->add_option("--base", df_base, "frequency base b");
  dumpfreqs->add_option("--alpha", df_alpha, "low-frequency fraction");
  dumpfreqs->add_option("--motion-scale", df_motion, "motion scale");
  dumpfreqs->add_option("--space-scale-factor", df_space, "space scale factor");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*clean) return cmd_clean(clean_in, clean_out, clean_report, opts);
    if (*analyze) return cmd_analyze(an_in, an_csv, an_vel_csv, an_svg, opts);
    if (*select) return cmd_select(sel_in, sel_out, opts);
    if (*extract) return cmd_extract(ex_video, ex_kp, ex_out, opts);
    if (*batch) return cmd_batch(batch_manifest, batch_select_only, opts);
    if (*eval) return cmd_eval(eval_a, eval_b, eval_out, eval_csv, eval_pred_kp, eval_gt_kp,
                               eval_alpha);
    if (*evalpck) return cmd_eval_pck(pck_pred, pck_gt, pck_alpha);
    if (*selfcheck) return cmd_rope_selfcheck(sc_cases, sc_seed);
    if (*dumpfreqs) return cmd_rope_dump_freqs(df_dim, df_base, df_alpha, df_motion, df_space);
  } catch (const TranscoderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTranscoderError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
