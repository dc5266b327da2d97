#include "motionscope/latent.hpp"

#include <string>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

constexpr int kLatentChannels = 16;
constexpr int kMaskChannels = 4;

void require_shape(const LatentBlock& b, int channels, int temporal, const char* name) {
  if (b.channels != channels) {
    throw InputError(std::string(name) + " must have " + std::to_string(channels) +
                     " channels, got " + std::to_string(b.channels));
  }
  if (temporal > 0 && b.temporal != temporal) {
    throw InputError(std::string(name) + " has unexpected temporal extent " +
                     std::to_string(b.temporal));
  }
  if (b.values.size() != static_cast<std::size_t>(b.channels) * b.temporal * b.height * b.width) {
    throw InputError(std::string(name) + " value buffer does not match its shape");
  }
}

}  // namespace

LatentBlock LatentBlock::zeros(Role role, int channels, int temporal, int height, int width) {
  LatentBlock b;
  b.role = role;
  b.channels = channels;
  b.temporal = temporal;
  b.height = height;
  b.width = width;
  b.values.assign(static_cast<std::size_t>(channels) * temporal * height * width, 0.0);
  return b;
}

LatentBlock compose_latents(const LatentBlock& noisy, const LatentBlock& pose,
                            const LatentBlock& reference) {
  require_shape(noisy, kLatentChannels, 0, "noisy latent");
  require_shape(pose, kLatentChannels, 0, "pose latent");
  require_shape(reference, kLatentChannels, 1, "reference latent");
  if (noisy.temporal < 1) throw InputError("noisy latent needs temporal extent >= 1");
  if (pose.temporal != noisy.temporal || pose.height != noisy.height ||
      pose.width != noisy.width) {
    throw InputError("pose latent shape does not match noisy latent");
  }
  if (reference.height != noisy.height || reference.width != noisy.width) {
    throw InputError("reference latent spatial shape does not match noisy latent");
  }

  const int t_len = noisy.temporal;
  const int h = noisy.height;
  const int w = noisy.width;
  LatentBlock out = LatentBlock::zeros(LatentBlock::Role::kComposed,
                                       2 * kLatentChannels + kLatentChannels + kMaskChannels,
                                       t_len, h, w);

  const std::size_t plane = static_cast<std::size_t>(t_len) * h * w;
  for (int c = 0; c < kLatentChannels; ++c) {
    std::copy(noisy.values.begin() + c * plane, noisy.values.begin() + (c + 1) * plane,
              out.values.begin() + c * plane);
    std::copy(pose.values.begin() + c * plane, pose.values.begin() + (c + 1) * plane,
              out.values.begin() + (kLatentChannels + c) * plane);
  }

  // Reference occupies temporal index 0 of a zero block; the mask marks
  // exactly that frame.
  for (int c = 0; c < kLatentChannels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(2 * kLatentChannels + c, 0, y, x) = reference.at(c, 0, y, x);
      }
    }
  }
  for (int c = 0; c < kMaskChannels; ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        out.at(3 * kLatentChannels + c, 0, y, x) = 1.0;
      }
    }
  }
  return out;
}

LatentBlock slice_channels(const LatentBlock& block, int begin, int end,
                           LatentBlock::Role role) {
  if (begin < 0 || end > block.channels || begin >= end) {
    throw InputError("invalid channel slice [" + std::to_string(begin) + ", " +
                     std::to_string(end) + ")");
  }
  LatentBlock out =
      LatentBlock::zeros(role, end - begin, block.temporal, block.height, block.width);
  const std::size_t plane =
      static_cast<std::size_t>(block.temporal) * block.height * block.width;
  std::copy(block.values.begin() + begin * plane, block.values.begin() + end * plane,
            out.values.begin());
  return out;
}

}  // namespace motionscope
