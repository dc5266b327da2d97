#pragma once

#include "motionscope/wavelet.hpp"

namespace motionscope {

struct WindowSelection {
  int start_frame = 0;
  int end_frame = 0;  // exclusive
  double window_energy = 0.0;
  bool boundary_adjusted = false;
  bool whole_video = false;
  double start_seconds = 0.0;
  double duration_seconds = 0.0;
};

// Slides a window of L = round(window_seconds * fps) frames over the
// filtered energy and picks the start index maximizing the window sum
// (ties broken toward the smallest index). Energy samples live on frame
// intervals, so the sum covers samples [i, i+L-1] clipped to the series
// end. Videos with total_frames <= L are returned whole. A best start
// within boundary_margin_frames of either end snaps to that end.
WindowSelection select_window(const EnergySeries& e, double fps, int total_frames,
                              double window_seconds, int boundary_margin_frames = 10);

}  // namespace motionscope
