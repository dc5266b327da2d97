#pragma once

#include <span>
#include <vector>

namespace motionscope {

// Channel-pair layout for 3D rotary embeddings over a (t, h, w) token
// grid, plus the low-frequency spatial scaling parameters.
struct FrequencyLayout {
  int head_dim = 0;  // d', even; pairs_t + pairs_h + pairs_w == head_dim/2
  int pairs_t = 0;
  int pairs_h = 0;
  int pairs_w = 0;
  double base = 10000.0;
  double alpha = 0.30;              // fraction of spatial pairs treated as low-frequency
  double motion_scale = 1.5;
  double space_scale_factor = 0.02;

  // gamma = 1 + space_scale_factor * motion_scale
  double gamma() const { return 1.0 + space_scale_factor * motion_scale; }

  void validate() const;

  // Default axis split: h and w each get floor(d'/6) pairs, t the rest.
  static FrequencyLayout make(int head_dim);
};

struct GridPosition {
  int t = 0;
  int h = 0;
  int w = 0;
};

struct AxisFrequencies {
  std::vector<double> t;
  std::vector<double> h;
  std::vector<double> w;
};

// theta_j = base^(-2(j-1)/(2*c_a)) for j = 1..c_a on each axis;
// strictly decreasing within an axis.
AxisFrequencies base_frequencies(const FrequencyLayout& layout);

struct LowFreqScaleResult {
  AxisFrequencies freqs;
  int scaled_count = 0;       // number of frequency entries multiplied by gamma
  bool no_low_band = false;   // round(alpha * c_a) was 0 on both spatial axes
  bool monotonic = true;      // false when scaling broke the per-axis ordering
};

// Multiplies the last round(alpha * c_a) entries (the lowest frequencies)
// of the h and w axes by gamma; the temporal axis is never touched.
LowFreqScaleResult scale_low_frequencies(const FrequencyLayout& layout,
                                         const AxisFrequencies& freqs);

// Rotates channel pairs of `vec` by the position-dependent angles
// p_a * theta_j, pairs ordered (t-pairs, h-pairs, w-pairs).
std::vector<double> apply_rope(std::span<const double> vec, const GridPosition& pos,
                               const AxisFrequencies& freqs, const FrequencyLayout& layout);

// scores[i][j] = <rope(q_i), rope(k_j)> / sqrt(d'), with the low-frequency
// scaled table when use_low_freq_scaling is set.
std::vector<std::vector<double>> attention_scores(
    const std::vector<std::vector<double>>& queries,
    const std::vector<GridPosition>& query_positions,
    const std::vector<std::vector<double>>& keys,
    const std::vector<GridPosition>& key_positions,
    const FrequencyLayout& layout, bool use_low_freq_scaling);

}  // namespace motionscope
