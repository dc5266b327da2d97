#pragma once

#include <optional>
#include <vector>

#include "motionscope/keypoints.hpp"

namespace motionscope {

// Image with values in [0, 1], row-major (y, x, channel).
struct FrameImage {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 or 3
  std::vector<double> values;

  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width + x) * channels + c;
  }
  double at(int y, int x, int c) const { return values[index(y, x, c)]; }
  double& at(int y, int x, int c) { return values[index(y, x, c)]; }
};

struct PsnrValue {
  bool infinite = false;  // identical images (MSE == 0)
  double db = 0.0;
};

// 10*log10(1/MSE) with MAX = 1.
PsnrValue psnr(const FrameImage& a, const FrameImage& b);

// Mean local SSIM, 11x11 Gaussian window sigma=1.5, C1=0.01^2, C2=0.03^2
// on [0,1] range; windows fully inside the image; channels averaged.
// Requires min(width, height) >= 11.
double ssim(const FrameImage& a, const FrameImage& b);

// Mean absolute difference over all pixels and channels.
double l1(const FrameImage& a, const FrameImage& b);

// PCK: a predicted joint is correct when its Euclidean error is within
// alpha times the ground-truth bounding-box diagonal of that frame
// (box over joints with confidence > 0). Frames without valid ground
// truth are skipped; returns a percentage in [0, 100].
double pck(const KeypointSequence& pred, const KeypointSequence& gt, double alpha = 0.5);

struct FrameMetrics {
  std::string name;
  std::optional<double> psnr_db;  // nullopt = infinite (identical frames)
  double ssim = 0.0;
  double l1 = 0.0;
};

struct MetricReport {
  bool psnr_infinite = false;
  double psnr_db = 0.0;
  double ssim = 0.0;
  double l1 = 0.0;
  std::optional<double> pck;
  std::vector<FrameMetrics> per_frame;
};

// Aggregates per-frame metrics with compensated summation so the result
// does not depend on accumulation order. PSNR aggregates as the mean of
// finite per-frame values and reports infinite only when every frame
// pair is identical.
MetricReport aggregate_metrics(const std::vector<FrameMetrics>& per_frame);

}  // namespace motionscope
