#pragma once

#include <filesystem>

#include "motionscope/metrics.hpp"

namespace motionscope {

// Loads an 8-bit PNG (gray or RGB; palette expanded, alpha dropped,
// 16-bit narrowed) or binary PPM/PGM (P6/P5, maxval 255) into [0,1]
// reals. Throws InputError on unreadable or unsupported files.
FrameImage load_image(const std::filesystem::path& path);

}  // namespace motionscope
