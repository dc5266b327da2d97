#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace motionscope {

struct Joint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;

  bool operator==(const Joint&) const = default;
};

// Per-frame 2D joint annotations for one video. Joint ordering follows
// COCO-17 by convention (index 0 = nose) but any fixed layout works;
// the pipeline only ever addresses joints by index.
struct KeypointSequence {
  double fps = 0.0;
  int frame_width = 0;
  int frame_height = 0;
  std::vector<std::vector<Joint>> frames;

  std::size_t frame_count() const { return frames.size(); }
  std::size_t joint_count() const { return frames.empty() ? 0 : frames.front().size(); }
};

struct JointCleanStats {
  int joint_index = 0;
  int interpolated = 0;
  int outliers = 0;
};

struct CleaningReport {
  int interpolated_count = 0;
  int outlier_count = 0;
  std::vector<JointCleanStats> per_joint;
};

struct CleaningOptions {
  double conf_min = 0.3;
  double outlier_factor = 5.0;
};

// Parses one keypoint document:
//   {fps, width, height, joints_per_frame, frames: [[[x,y,conf],...],...]}
// Validates joint-count consistency, positive fps/dimensions and finite
// coordinates. Frame order is preserved.
KeypointSequence parse_keypoints(std::string_view text);

// Accepts either a single document or newline-delimited documents
// (batch manifests of sequences). Blank lines are skipped.
std::vector<KeypointSequence> parse_keypoint_stream(std::string_view text);

std::string serialize_keypoints(const KeypointSequence& seq);

// Replaces low-confidence joints and displacement outliers by linear
// interpolation between the nearest valid frames on both sides; at the
// sequence edges the nearest valid coordinate is held. Outlier detection
// iterates to a fixed point, and replaced joints get confidence 0 in the
// output, which makes the operation exactly idempotent.
// Throws InputError when a joint has no valid observation at all.
std::pair<KeypointSequence, CleaningReport> clean_sequence(
    const KeypointSequence& seq, const CleaningOptions& opts = {});

}  // namespace motionscope
