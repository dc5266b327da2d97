#pragma once

#include <cstddef>
#include <vector>

namespace motionscope {

// Abstract 4D latent tensor (channels, T, H, W), row-major, one batch
// element. Shape conventions: noisy/pose are 16xTxHxW, reference is
// 16x1xHxW, the mask is 4xTxHxW with ones only at temporal index 0.
struct LatentBlock {
  enum class Role { kNoisy, kPose, kReference, kMask, kComposed };

  Role role = Role::kNoisy;
  int channels = 0;
  int temporal = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  static LatentBlock zeros(Role role, int channels, int temporal, int height, int width);

  std::size_t index(int c, int t, int h, int w) const {
    return ((static_cast<std::size_t>(c) * temporal + t) * height + h) * width + w;
  }
  double at(int c, int t, int h, int w) const { return values[index(c, t, h, w)]; }
  double& at(int c, int t, int h, int w) { return values[index(c, t, h, w)]; }
};

// Channel-wise concatenation (noisy, pose, reference-at-frame-0, mask)
// -> 16+16+16+4 = 52 channels. The reference is placed at temporal index
// 0 of an otherwise zero block; the 4-channel mask is 1 at temporal
// index 0 and 0 elsewhere.
LatentBlock compose_latents(const LatentBlock& noisy, const LatentBlock& pose,
                            const LatentBlock& reference);

// Copies channels [begin, end) into a new block with the given role.
LatentBlock slice_channels(const LatentBlock& block, int begin, int end,
                           LatentBlock::Role role);

}  // namespace motionscope
