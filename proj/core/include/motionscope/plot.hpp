#pragma once

#include <optional>
#include <string>

#include "motionscope/wavelet.hpp"
#include "motionscope/window.hpp"

namespace motionscope {

// Static SVG line plot of raw and filtered energy with the selected
// window shaded. Purely cosmetic; never feeds back into any numbers.
std::string energy_svg(const EnergySeries& e,
                       const std::optional<WindowSelection>& selection,
                       int width = 960, int height = 320);

}  // namespace motionscope
