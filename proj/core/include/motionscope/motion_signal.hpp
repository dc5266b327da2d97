#pragma once

#include <vector>

#include "motionscope/keypoints.hpp"

namespace motionscope {

// Forward-difference joint speed in pixels/second; one sample per frame
// interval, so an N-frame sequence yields N-1 values. Sample t covers the
// interval [frame t, frame t+1).
struct VelocitySeries {
  std::vector<double> values;
  double fps = 0.0;
  int joint_index = 0;
};

// values[t] = hypot(x[t+1]-x[t], y[t+1]-y[t]) * fps
VelocitySeries compute_velocity(const KeypointSequence& seq, int joint_index = 0);

}  // namespace motionscope
