#include "motionscope/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

using nlohmann::json;

double require_finite(const json& v, const char* what, std::size_t frame) {
  if (!v.is_number()) {
    throw InputError("non-numeric " + std::string(what) + " at frame " + std::to_string(frame));
  }
  double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw InputError("non-finite " + std::string(what) + " at frame " + std::to_string(frame));
  }
  return d;
}

KeypointSequence parse_document(const json& doc) {
  if (!doc.is_object()) throw InputError("keypoint document must be an object");
  for (const char* key : {"fps", "width", "height", "joints_per_frame", "frames"}) {
    if (!doc.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  }

  KeypointSequence seq;
  seq.fps = doc.at("fps").get<double>();
  if (!(seq.fps > 0.0) || !std::isfinite(seq.fps)) throw InputError("non-positive fps");
  seq.frame_width = doc.at("width").get<int>();
  seq.frame_height = doc.at("height").get<int>();
  if (seq.frame_width <= 0 || seq.frame_height <= 0) {
    throw InputError("non-positive frame dimensions");
  }

  const auto joints_per_frame = doc.at("joints_per_frame").get<long long>();
  if (joints_per_frame < 1) throw InputError("joints_per_frame must be >= 1");

  const json& frames = doc.at("frames");
  if (!frames.is_array()) throw InputError("'frames' must be an array");
  if (frames.empty()) throw InputError("no frames");

  seq.frames.reserve(frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const json& frame = frames[f];
    if (!frame.is_array()) {
      throw InputError("frame " + std::to_string(f) + " is not an array");
    }
    if (static_cast<long long>(frame.size()) != joints_per_frame) {
      throw InputError("inconsistent joint count at frame " + std::to_string(f));
    }
    std::vector<Joint> joints;
    joints.reserve(frame.size());
    for (const json& j : frame) {
      if (!j.is_array() || j.size() != 3) {
        throw InputError("joint entry at frame " + std::to_string(f) +
                         " must be [x, y, confidence]");
      }
      Joint joint;
      joint.x = require_finite(j[0], "x coordinate", f);
      joint.y = require_finite(j[1], "y coordinate", f);
      joint.confidence = require_finite(j[2], "confidence", f);
      if (joint.confidence < 0.0 || joint.confidence > 1.0) {
        throw InputError("confidence outside [0,1] at frame " + std::to_string(f));
      }
      joints.push_back(joint);
    }
    seq.frames.push_back(std::move(joints));
  }
  return seq;
}

double displacement(const Joint& a, const Joint& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
  return (v[mid - 1] + hi) / 2.0;
}

// Fills invalid frames of one joint track in place by linear
// interpolation between the nearest valid frames; edges hold the nearest
// valid value. `valid` must contain at least one true entry.
void interpolate_track(std::vector<Joint>& track, const std::vector<bool>& valid) {
  const int n = static_cast<int>(track.size());
  int prev = -1;
  for (int t = 0; t < n; ++t) {
    if (!valid[t]) continue;
    if (prev == -1 && t > 0) {
      for (int k = 0; k < t; ++k) {  // leading edge: hold
        track[k].x = track[t].x;
        track[k].y = track[t].y;
      }
    } else if (prev != -1 && t > prev + 1) {
      const double span = t - prev;
      for (int k = prev + 1; k < t; ++k) {
        const double w = (k - prev) / span;
        track[k].x = track[prev].x + w * (track[t].x - track[prev].x);
        track[k].y = track[prev].y + w * (track[t].y - track[prev].y);
      }
    }
    prev = t;
  }
  for (int k = prev + 1; k < n; ++k) {  // trailing edge: hold
    track[k].x = track[prev].x;
    track[k].y = track[prev].y;
  }
}

// Spike detector on the current coordinates: an interior frame is an
// outlier when both its backward and forward displacements exceed the
// threshold; an edge frame when its single displacement does and the
// adjacent interior frame is not itself a spike.
std::vector<bool> detect_outliers(const std::vector<Joint>& track,
                                  const std::vector<bool>& eligible,
                                  double outlier_factor) {
  const int n = static_cast<int>(track.size());
  std::vector<bool> flagged(n, false);
  if (n < 2) return flagged;

  std::vector<double> disp(n - 1);
  for (int t = 0; t + 1 < n; ++t) disp[t] = displacement(track[t], track[t + 1]);
  const double threshold = outlier_factor * median(disp);

  for (int t = 1; t + 1 < n; ++t) {
    if (eligible[t] && disp[t - 1] > threshold && disp[t] > threshold) flagged[t] = true;
  }
  if (eligible[0] && disp[0] > threshold && !flagged[1]) flagged[0] = true;
  if (eligible[n - 1] && disp[n - 2] > threshold && !flagged[n - 2]) flagged[n - 1] = true;
  return flagged;
}

}  // namespace

KeypointSequence parse_keypoints(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed keypoint document: ") + e.what());
  }
  return parse_document(doc);
}

std::vector<KeypointSequence> parse_keypoint_stream(std::string_view text) {
  // A single document may span lines; try whole-input parse first, then
  // fall back to newline-delimited documents.
  try {
    return {parse_keypoints(text)};
  } catch (const InputError&) {
  }
  std::vector<KeypointSequence> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_keypoints(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (out.empty()) throw InputError("no keypoint documents found");
  return out;
}

std::string serialize_keypoints(const KeypointSequence& seq) {
  json frames = json::array();
  for (const auto& frame : seq.frames) {
    json fj = json::array();
    for (const Joint& j : frame) fj.push_back(json::array({j.x, j.y, j.confidence}));
    frames.push_back(std::move(fj));
  }
  json doc{{"fps", seq.fps},
           {"width", seq.frame_width},
           {"height", seq.frame_height},
           {"joints_per_frame", seq.joint_count()},
           {"frames", std::move(frames)}};
  return doc.dump();
}

std::pair<KeypointSequence, CleaningReport> clean_sequence(const KeypointSequence& seq,
                                                           const CleaningOptions& opts) {
  if (opts.conf_min < 0.0 || opts.conf_min > 1.0) throw InputError("conf_min outside [0,1]");
  if (!(opts.outlier_factor > 0.0)) throw InputError("outlier_factor must be positive");

  KeypointSequence out = seq;
  CleaningReport report;
  const int n = static_cast<int>(seq.frame_count());
  const int joints = static_cast<int>(seq.joint_count());
  report.per_joint.resize(joints);

  for (int j = 0; j < joints; ++j) {
    report.per_joint[j].joint_index = j;

    std::vector<Joint> track(n);
    for (int t = 0; t < n; ++t) track[t] = seq.frames[t][j];

    std::vector<bool> valid(n);
    int valid_count = 0;
    for (int t = 0; t < n; ++t) {
      valid[t] = track[t].confidence >= opts.conf_min;
      valid_count += valid[t];
    }
    if (valid_count == 0) {
      throw InputError("joint " + std::to_string(j) +
                       " has no observation above the confidence threshold");
    }
    for (int t = 0; t < n; ++t) {
      if (!valid[t]) ++report.per_joint[j].interpolated;
    }
    interpolate_track(track, valid);

    // Outlier passes run to a fixed point: once a frame is replaced it
    // stays replaced, so re-cleaning the output changes nothing.
    while (true) {
      std::vector<bool> spikes = detect_outliers(track, valid, opts.outlier_factor);
      int added = 0;
      for (int t = 0; t < n; ++t) {
        if (spikes[t]) {
          valid[t] = false;
          ++added;
          ++report.per_joint[j].outliers;
        }
      }
      if (added == 0) break;
      int remaining = 0;
      for (int t = 0; t < n; ++t) remaining += valid[t];
      if (remaining == 0) {
        throw InputError("joint " + std::to_string(j) + " has no valid observations left");
      }
      interpolate_track(track, valid);
    }

    // Replaced frames are marked with confidence 0 so the output is
    // self-describing and re-cleaning it reconstructs exactly the same
    // valid mask — the fixed point of the outlier loop — bit for bit.
    for (int t = 0; t < n; ++t) {
      out.frames[t][j].x = track[t].x;
      out.frames[t][j].y = track[t].y;
      if (!valid[t]) out.frames[t][j].confidence = 0.0;
    }
    report.interpolated_count += report.per_joint[j].interpolated;
    report.outlier_count += report.per_joint[j].outliers;
  }
  return {std::move(out), std::move(report)};
}

}  // namespace motionscope
