#include "motionscope/window.hpp"

#include <algorithm>
#include <cmath>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

// Sum of filtered energy over samples [begin, end) clipped to the series.
double energy_sum(const std::vector<double>& filtered, int begin, int end) {
  begin = std::max(begin, 0);
  end = std::min(end, static_cast<int>(filtered.size()));
  double sum = 0.0;
  for (int t = begin; t < end; ++t) sum += filtered[t];
  return sum;
}

}  // namespace

WindowSelection select_window(const EnergySeries& e, double fps, int total_frames,
                              double window_seconds, int boundary_margin_frames) {
  if (!(fps > 0.0)) throw InputError("fps must be positive");
  if (total_frames < 1) throw InputError("total_frames must be >= 1");
  if (!(window_seconds > 0.0)) throw InputError("window_seconds must be positive");
  const int samples = static_cast<int>(e.filtered.size());
  if (samples != std::max(total_frames - 1, 0)) {
    throw InputError("energy length " + std::to_string(samples) +
                     " inconsistent with total_frames " + std::to_string(total_frames));
  }

  const int window_frames =
      std::max(1, static_cast<int>(std::llround(window_seconds * fps)));

  WindowSelection sel;
  if (total_frames <= window_frames) {
    sel.whole_video = true;
    sel.start_frame = 0;
    sel.end_frame = total_frames;
    sel.window_energy = energy_sum(e.filtered, 0, samples);
    sel.start_seconds = 0.0;
    sel.duration_seconds = total_frames / fps;
    return sel;
  }

  // Prefix sums over the filtered energy; window starting at frame i
  // covers samples [i, i+L-1], clipped to the series end.
  std::vector<double> prefix(samples + 1, 0.0);
  for (int t = 0; t < samples; ++t) prefix[t + 1] = prefix[t] + e.filtered[t];

  int best = 0;
  double best_energy = -1.0;
  for (int i = 0; i + window_frames <= total_frames; ++i) {
    const int hi = std::min(i + window_frames, samples);
    const double energy = prefix[hi] - prefix[i];
    if (energy > best_energy) {
      best_energy = energy;
      best = i;
    }
  }

  int start = best;
  if (start < boundary_margin_frames) start = 0;
  if (start + window_frames > total_frames - boundary_margin_frames) {
    start = total_frames - window_frames;
  }
  sel.boundary_adjusted = (start != best);
  sel.start_frame = start;
  sel.end_frame = start + window_frames;
  sel.window_energy = energy_sum(e.filtered, start, start + window_frames);
  sel.start_seconds = start / fps;
  sel.duration_seconds = window_frames / fps;
  return sel;
}

}  // namespace motionscope
