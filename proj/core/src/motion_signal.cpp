#include "motionscope/motion_signal.hpp"

#include <cmath>

#include "motionscope/error.hpp"

namespace motionscope {

VelocitySeries compute_velocity(const KeypointSequence& seq, int joint_index) {
  if (seq.frame_count() < 2) throw InputError("need at least 2 frames to compute velocity");
  if (joint_index < 0 || joint_index >= static_cast<int>(seq.joint_count())) {
    throw InputError("joint index " + std::to_string(joint_index) + " out of range");
  }
  VelocitySeries v;
  v.fps = seq.fps;
  v.joint_index = joint_index;
  v.values.resize(seq.frame_count() - 1);
  for (std::size_t t = 0; t + 1 < seq.frame_count(); ++t) {
    const Joint& a = seq.frames[t][joint_index];
    const Joint& b = seq.frames[t + 1][joint_index];
    v.values[t] = std::hypot(b.x - a.x, b.y - a.y) * seq.fps;
  }
  return v;
}

}  // namespace motionscope
