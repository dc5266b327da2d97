#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "motionscope/keypoints.hpp"
#include "motionscope/motion_signal.hpp"
#include "motionscope/wavelet.hpp"
#include "motionscope/window.hpp"

namespace motionscope {

// Environment variable that overrides the transcoder executable path.
inline constexpr const char* kTranscoderEnvVar = "MOTIONSCOPE_FFMPEG";

struct TranscoderSettings {
  std::string executable = "ffmpeg";
  std::string codec = "libx264";
  int quality = 23;  // CRF
};

struct PipelineConfig {
  int joint_index = 0;
  double window_seconds = 6.0;
  int peak_threshold_frames = 3;
  int boundary_margin_frames = 10;
  CwtConfig cwt;
  CleaningOptions cleaning;
  TranscoderSettings transcoder;
  int workers = 1;
};

// Process exit codes shared by the CLI and batch runner.
enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitTranscoderError = 2,
  kExitPartialBatchFailure = 3,
};

struct AnalysisResult {
  KeypointSequence cleaned;
  CleaningReport report;
  VelocitySeries velocity;
  EnergySeries energy;
};

// clean -> velocity -> CWT energy -> peak filter, all in memory.
AnalysisResult analyze_keypoints(const KeypointSequence& seq, const PipelineConfig& config);

AnalysisResult analyze_file(const std::filesystem::path& keypoints_path,
                            const PipelineConfig& config);

struct SelectionResult {
  AnalysisResult analysis;
  WindowSelection selection;
};

SelectionResult select_file(const std::filesystem::path& keypoints_path,
                            const PipelineConfig& config);

std::string selection_to_json(const WindowSelection& sel);
std::string energy_csv(const EnergySeries& e);
std::string velocity_csv(const VelocitySeries& v);
std::string cleaning_report_json(const CleaningReport& report);

// Resolves the transcoder executable, honoring kTranscoderEnvVar.
std::string transcoder_executable(const TranscoderSettings& settings);

// Builds the transcoder argument list for a selection. Whole-video
// selections re-encode without trimming arguments; otherwise the seek is
// placed before the input and the duration after it. Audio is dropped.
std::vector<std::string> transcoder_command(const std::string& executable,
                                            const TranscoderSettings& settings,
                                            const WindowSelection& sel,
                                            const std::filesystem::path& video_path,
                                            const std::filesystem::path& output_path);

struct ExtractResult {
  SelectionResult selection;
  std::vector<std::string> command;
  std::string sidecar_json;  // selection + verbatim command line
};

// Runs select_file, invokes the external transcoder, and writes the
// sidecar document next to the output. Throws TranscoderError when the
// executable is missing or exits nonzero; no partial output is left
// behind on failure.
ExtractResult run_extract(const std::filesystem::path& video_path,
                          const std::filesystem::path& keypoints_path,
                          const std::filesystem::path& output_path,
                          const PipelineConfig& config);

struct BatchEntry {
  std::string video_path;
  std::string keypoints_path;
  std::string output_path;
  std::optional<double> window_seconds;
  std::optional<int> joint_index;
};

struct BatchEntryResult {
  BatchEntry entry;
  bool ok = false;
  std::string error;
  std::string selection_json;
};

struct BatchReport {
  std::vector<BatchEntryResult> entries;  // manifest order
  int failures = 0;
};

std::vector<BatchEntry> parse_batch_manifest(std::string_view text);

// Processes manifest entries with up to config.workers threads. Entry
// failures are isolated; the report preserves manifest order regardless
// of completion order. select_only skips the transcoder and only writes
// selection documents.
BatchReport run_batch(const std::filesystem::path& manifest_path,
                      const PipelineConfig& config, bool select_only);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace motionscope
