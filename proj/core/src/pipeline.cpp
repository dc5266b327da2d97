#include "motionscope/pipeline.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include <sys/wait.h>

#include <json.hpp>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

using nlohmann::json;

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string shell_quote(const std::string& arg) {
  std::string out = "'";
  for (char c : arg) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

json selection_json(const WindowSelection& sel) {
  return json{{"start_frame", sel.start_frame},
              {"end_frame", sel.end_frame},
              {"start_seconds", sel.start_seconds},
              {"duration_seconds", sel.duration_seconds},
              {"window_energy", sel.window_energy},
              {"boundary_adjusted", sel.boundary_adjusted},
              {"whole_video", sel.whole_video}};
}

// Runs a command line, capturing combined output; returns the exit
// status (127 when the executable is missing, per POSIX shells).
int run_command(const std::vector<std::string>& args, std::string* output) {
  std::string cmd;
  for (const std::string& a : args) {
    if (!cmd.empty()) cmd += ' ';
    cmd += shell_quote(a);
  }
  cmd += " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw TranscoderError("failed to launch transcoder process");
  std::string captured;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), pipe)) > 0) captured.append(buf, got);
  const int status = pclose(pipe);
  if (output) *output = captured;
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

BatchEntry parse_batch_entry(const json& doc) {
  BatchEntry entry;
  for (const char* key : {"video_path", "keypoints_path", "output_path"}) {
    if (!doc.contains(key) || !doc.at(key).is_string() ||
        doc.at(key).get<std::string>().empty()) {
      throw InputError(std::string("manifest entry missing '") + key + "'");
    }
  }
  entry.video_path = doc.at("video_path").get<std::string>();
  entry.keypoints_path = doc.at("keypoints_path").get<std::string>();
  entry.output_path = doc.at("output_path").get<std::string>();
  if (doc.contains("window_seconds")) entry.window_seconds = doc.at("window_seconds").get<double>();
  if (doc.contains("joint_index")) entry.joint_index = doc.at("joint_index").get<int>();
  return entry;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw InputError("failed writing " + path.string());
}

AnalysisResult analyze_keypoints(const KeypointSequence& seq, const PipelineConfig& config) {
  AnalysisResult result;
  auto [cleaned, report] = clean_sequence(seq, config.cleaning);
  result.cleaned = std::move(cleaned);
  result.report = std::move(report);
  result.velocity = compute_velocity(result.cleaned, config.joint_index);
  EnergySeries raw = energy_series(result.velocity.values, config.cwt);
  result.energy = filter_peaks(raw, config.peak_threshold_frames);
  return result;
}

AnalysisResult analyze_file(const std::filesystem::path& keypoints_path,
                            const PipelineConfig& config) {
  KeypointSequence seq;
  try {
    seq = parse_keypoints(read_file(keypoints_path));
  } catch (const InputError& e) {
    throw InputError(keypoints_path.string() + ": " + e.what());
  }
  try {
    return analyze_keypoints(seq, config);
  } catch (const InputError& e) {
    throw InputError(keypoints_path.string() + ": " + e.what());
  }
}

SelectionResult select_file(const std::filesystem::path& keypoints_path,
                            const PipelineConfig& config) {
  SelectionResult result;
  result.analysis = analyze_file(keypoints_path, config);
  result.selection = select_window(result.analysis.energy, result.analysis.cleaned.fps,
                                   static_cast<int>(result.analysis.cleaned.frame_count()),
                                   config.window_seconds, config.boundary_margin_frames);
  return result;
}

std::string selection_to_json(const WindowSelection& sel) {
  return selection_json(sel).dump(2) + "\n";
}

std::string energy_csv(const EnergySeries& e) {
  std::string out = "sample_index,raw,filtered\n";
  for (std::size_t t = 0; t < e.raw.size(); ++t) {
    out += std::to_string(t) + "," + format_value(e.raw[t]) + "," +
           format_value(e.filtered[t]) + "\n";
  }
  return out;
}

std::string velocity_csv(const VelocitySeries& v) {
  std::string out = "frame_index,velocity\n";
  for (std::size_t t = 0; t < v.values.size(); ++t) {
    out += std::to_string(t) + "," + format_value(v.values[t]) + "\n";
  }
  return out;
}

std::string cleaning_report_json(const CleaningReport& report) {
  json per_joint = json::array();
  for (const JointCleanStats& s : report.per_joint) {
    per_joint.push_back(json{{"joint_index", s.joint_index},
                             {"interpolated", s.interpolated},
                             {"outliers", s.outliers}});
  }
  return json{{"interpolated_count", report.interpolated_count},
              {"outlier_count", report.outlier_count},
              {"per_joint", std::move(per_joint)}}
             .dump(2) +
         "\n";
}

std::string transcoder_executable(const TranscoderSettings& settings) {
  if (const char* env = std::getenv(kTranscoderEnvVar); env && *env) return env;
  return settings.executable;
}

std::vector<std::string> transcoder_command(const std::string& executable,
                                            const TranscoderSettings& settings,
                                            const WindowSelection& sel,
                                            const std::filesystem::path& video_path,
                                            const std::filesystem::path& output_path) {
  std::vector<std::string> cmd{executable, "-y", "-loglevel", "error"};
  if (!sel.whole_video) {
    // Seek before the input for speed; re-encoding keeps the cut
    // frame-accurate.
    cmd.insert(cmd.end(), {"-ss", format_value(sel.start_seconds)});
  }
  cmd.insert(cmd.end(), {"-i", video_path.string()});
  if (!sel.whole_video) {
    cmd.insert(cmd.end(), {"-t", format_value(sel.duration_seconds)});
  }
  cmd.insert(cmd.end(), {"-c:v", settings.codec, "-crf", std::to_string(settings.quality),
                         "-an", output_path.string()});
  return cmd;
}

ExtractResult run_extract(const std::filesystem::path& video_path,
                          const std::filesystem::path& keypoints_path,
                          const std::filesystem::path& output_path,
                          const PipelineConfig& config) {
  ExtractResult result;
  result.selection = select_file(keypoints_path, config);

  if (!std::filesystem::exists(video_path)) {
    throw InputError("video not found: " + video_path.string());
  }

  const std::string exe = transcoder_executable(config.transcoder);
  result.command = transcoder_command(exe, config.transcoder, result.selection.selection,
                                      video_path, output_path);

  std::string transcoder_output;
  const int status = run_command(result.command, &transcoder_output);
  if (status != 0) {
    std::error_code ec;
    std::filesystem::remove(output_path, ec);  // never leave partial output
    if (status == 127) {
      throw TranscoderError("transcoder executable not found: " + exe);
    }
    throw TranscoderError("transcoder exited with status " + std::to_string(status) + ": " +
                          transcoder_output);
  }

  std::string command_line;
  for (const std::string& a : result.command) {
    if (!command_line.empty()) command_line += ' ';
    command_line += a;
  }
  json sidecar{{"selection", selection_json(result.selection.selection)},
               {"command", result.command},
               {"command_line", command_line},
               {"audio", "dropped"}};
  result.sidecar_json = sidecar.dump(2) + "\n";

  std::filesystem::path sidecar_path = output_path;
  sidecar_path += ".selection.json";
  write_file(sidecar_path, result.sidecar_json);
  return result;
}

std::vector<BatchEntry> parse_batch_manifest(std::string_view text) {
  std::vector<BatchEntry> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      entries.push_back(parse_batch_entry(json::parse(line)));
    } catch (const json::parse_error& e) {
      throw InputError("manifest line " + std::to_string(lineno) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (entries.empty()) throw InputError("empty batch manifest");
  return entries;
}

BatchReport run_batch(const std::filesystem::path& manifest_path, const PipelineConfig& config,
                      bool select_only) {
  const std::vector<BatchEntry> entries = parse_batch_manifest(read_file(manifest_path));

  BatchReport report;
  report.entries.resize(entries.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= entries.size()) return;
      BatchEntryResult& result = report.entries[i];
      result.entry = entries[i];
      PipelineConfig entry_config = config;
      if (entries[i].window_seconds) entry_config.window_seconds = *entries[i].window_seconds;
      if (entries[i].joint_index) entry_config.joint_index = *entries[i].joint_index;
      try {
        if (select_only) {
          SelectionResult sel = select_file(entries[i].keypoints_path, entry_config);
          result.selection_json = selection_to_json(sel.selection);
          write_file(entries[i].output_path, result.selection_json);
        } else {
          ExtractResult ex = run_extract(entries[i].video_path, entries[i].keypoints_path,
                                         entries[i].output_path, entry_config);
          result.selection_json = selection_to_json(ex.selection.selection);
        }
        result.ok = true;
      } catch (const std::exception& e) {
        result.ok = false;
        result.error = e.what();
      }
    }
  };

  const int workers = std::max(1, config.workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (const BatchEntryResult& r : report.entries) {
    if (!r.ok) ++report.failures;
  }
  return report;
}

}  // namespace motionscope
