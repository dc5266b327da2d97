#include "motionscope/rope.hpp"

#include <cmath>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

std::vector<double> axis_frequencies(int pairs, double base) {
  std::vector<double> out(pairs);
  const double axis_dim = 2.0 * pairs;
  for (int j = 1; j <= pairs; ++j) {
    out[j - 1] = std::pow(base, -2.0 * (j - 1) / axis_dim);
  }
  return out;
}

int low_band_size(double alpha, int pairs) {
  return static_cast<int>(std::lround(alpha * pairs));
}

void rotate_pairs(std::vector<double>& vec, std::size_t pair_offset,
                  const std::vector<double>& freqs, double position) {
  for (std::size_t j = 0; j < freqs.size(); ++j) {
    const double angle = position * freqs[j];
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const std::size_t k = 2 * (pair_offset + j);
    const double x0 = vec[k];
    const double x1 = vec[k + 1];
    vec[k] = c * x0 - s * x1;
    vec[k + 1] = s * x0 + c * x1;
  }
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

}  // namespace

void FrequencyLayout::validate() const {
  if (head_dim < 2 || head_dim % 2 != 0) throw InputError("head_dim must be even and >= 2");
  if (pairs_t < 0 || pairs_h < 0 || pairs_w < 0) throw InputError("negative pair count");
  if (pairs_t + pairs_h + pairs_w != head_dim / 2) {
    throw InputError("pair counts must sum to head_dim/2");
  }
  if (!(base > 0.0)) throw InputError("base must be positive");
  if (alpha < 0.0 || alpha > 1.0) throw InputError("alpha outside [0,1]");
}

FrequencyLayout FrequencyLayout::make(int head_dim) {
  FrequencyLayout layout;
  layout.head_dim = head_dim;
  layout.pairs_h = head_dim / 6;
  layout.pairs_w = head_dim / 6;
  layout.pairs_t = head_dim / 2 - layout.pairs_h - layout.pairs_w;
  layout.validate();
  return layout;
}

AxisFrequencies base_frequencies(const FrequencyLayout& layout) {
  layout.validate();
  return {axis_frequencies(layout.pairs_t, layout.base),
          axis_frequencies(layout.pairs_h, layout.base),
          axis_frequencies(layout.pairs_w, layout.base)};
}

LowFreqScaleResult scale_low_frequencies(const FrequencyLayout& layout,
                                         const AxisFrequencies& freqs) {
  layout.validate();
  LowFreqScaleResult result;
  result.freqs = freqs;
  const double gamma = layout.gamma();

  // Frequencies decrease with j, so the low band is the tail of each
  // spatial axis. The temporal axis is never scaled.
  for (std::vector<double>* axis : {&result.freqs.h, &result.freqs.w}) {
    const int pairs = static_cast<int>(axis->size());
    const int n_low = low_band_size(layout.alpha, pairs);
    for (int j = pairs - n_low; j < pairs; ++j) {
      (*axis)[j] *= gamma;
      ++result.scaled_count;
    }
  }
  result.no_low_band = (result.scaled_count == 0);
  result.monotonic =
      strictly_decreasing(result.freqs.h) && strictly_decreasing(result.freqs.w);
  return result;
}

std::vector<double> apply_rope(std::span<const double> vec, const GridPosition& pos,
                               const AxisFrequencies& freqs, const FrequencyLayout& layout) {
  layout.validate();
  if (static_cast<int>(vec.size()) != layout.head_dim) {
    throw InputError("vector length does not match head_dim");
  }
  if (static_cast<int>(freqs.t.size()) != layout.pairs_t ||
      static_cast<int>(freqs.h.size()) != layout.pairs_h ||
      static_cast<int>(freqs.w.size()) != layout.pairs_w) {
    throw InputError("frequency table does not match layout");
  }
  std::vector<double> out(vec.begin(), vec.end());
  rotate_pairs(out, 0, freqs.t, pos.t);
  rotate_pairs(out, freqs.t.size(), freqs.h, pos.h);
  rotate_pairs(out, freqs.t.size() + freqs.h.size(), freqs.w, pos.w);
  return out;
}

std::vector<std::vector<double>> attention_scores(
    const std::vector<std::vector<double>>& queries,
    const std::vector<GridPosition>& query_positions,
    const std::vector<std::vector<double>>& keys,
    const std::vector<GridPosition>& key_positions, const FrequencyLayout& layout,
    bool use_low_freq_scaling) {
  layout.validate();
  if (queries.size() != query_positions.size() || keys.size() != key_positions.size()) {
    throw InputError("positions must pair one-to-one with vectors");
  }

  AxisFrequencies freqs = base_frequencies(layout);
  if (use_low_freq_scaling) freqs = scale_low_frequencies(layout, freqs).freqs;

  std::vector<std::vector<double>> rotated_q(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    rotated_q[i] = apply_rope(queries[i], query_positions[i], freqs, layout);
  }
  std::vector<std::vector<double>> rotated_k(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    rotated_k[i] = apply_rope(keys[i], key_positions[i], freqs, layout);
  }

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(layout.head_dim));
  std::vector<std::vector<double>> scores(queries.size(),
                                          std::vector<double>(keys.size(), 0.0));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    for (std::size_t j = 0; j < keys.size(); ++j) {
      double dot = 0.0;
      for (int d = 0; d < layout.head_dim; ++d) dot += rotated_q[i][d] * rotated_k[j][d];
      scores[i][j] = dot * inv_sqrt_d;
    }
  }
  return scores;
}

}  // namespace motionscope
