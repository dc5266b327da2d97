#include "motionscope/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

constexpr int kSsimWindow = 11;
constexpr double kSsimSigma = 1.5;
constexpr double kSsimC1 = 0.01 * 0.01;
constexpr double kSsimC2 = 0.03 * 0.03;

void require_same_shape(const FrameImage& a, const FrameImage& b) {
  if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
    throw InputError("image shape mismatch");
  }
  if (a.values.size() != static_cast<std::size_t>(a.width) * a.height * a.channels ||
      b.values.size() != a.values.size()) {
    throw InputError("image value buffer does not match its shape");
  }
}

// Order-independent (compensated) accumulator.
struct NeumaierSum {
  double sum = 0.0;
  double compensation = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + compensation; }
};

std::vector<double> gaussian_kernel() {
  std::vector<double> k(kSsimWindow);
  const double center = (kSsimWindow - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < kSsimWindow; ++i) {
    const double d = i - center;
    k[i] = std::exp(-d * d / (2.0 * kSsimSigma * kSsimSigma));
    total += k[i];
  }
  for (double& v : k) v /= total;
  return k;
}

// Separable valid-mode filter; output is (h-10) x (w-10).
std::vector<double> filter_valid(const std::vector<double>& img, int h, int w,
                                 const std::vector<double>& kernel) {
  const int oh = h - kSsimWindow + 1;
  const int ow = w - kSsimWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += kernel[k] * img[y * w + x + k];
      rows[y * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int k = 0; k < kSsimWindow; ++k) acc += kernel[k] * rows[(y + k) * ow + x];
      out[y * ow + x] = acc;
    }
  }
  return out;
}

double mse(const FrameImage& a, const FrameImage& b) {
  NeumaierSum acc;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    acc.add(d * d);
  }
  return acc.value() / static_cast<double>(a.values.size());
}

}  // namespace

PsnrValue psnr(const FrameImage& a, const FrameImage& b) {
  require_same_shape(a, b);
  const double err = mse(a, b);
  if (err == 0.0) return {.infinite = true, .db = 0.0};
  return {.infinite = false, .db = 10.0 * std::log10(1.0 / err)};
}

double ssim(const FrameImage& a, const FrameImage& b) {
  require_same_shape(a, b);
  if (std::min(a.width, a.height) < kSsimWindow) {
    throw InputError("image smaller than the SSIM window");
  }
  const std::vector<double> kernel = gaussian_kernel();
  const int h = a.height;
  const int w = a.width;
  const std::size_t pixels = static_cast<std::size_t>(h) * w;

  NeumaierSum channel_mean;
  for (int c = 0; c < a.channels; ++c) {
    std::vector<double> x(pixels), y(pixels), xx(pixels), yy(pixels), xy(pixels);
    for (int p = 0; p < static_cast<int>(pixels); ++p) {
      const double xv = a.values[p * a.channels + c];
      const double yv = b.values[p * a.channels + c];
      x[p] = xv;
      y[p] = yv;
      xx[p] = xv * xv;
      yy[p] = yv * yv;
      xy[p] = xv * yv;
    }
    const auto mu_x = filter_valid(x, h, w, kernel);
    const auto mu_y = filter_valid(y, h, w, kernel);
    const auto m_xx = filter_valid(xx, h, w, kernel);
    const auto m_yy = filter_valid(yy, h, w, kernel);
    const auto m_xy = filter_valid(xy, h, w, kernel);

    NeumaierSum acc;
    for (std::size_t i = 0; i < mu_x.size(); ++i) {
      const double var_x = m_xx[i] - mu_x[i] * mu_x[i];
      const double var_y = m_yy[i] - mu_y[i] * mu_y[i];
      const double cov = m_xy[i] - mu_x[i] * mu_y[i];
      const double num = (2.0 * mu_x[i] * mu_y[i] + kSsimC1) * (2.0 * cov + kSsimC2);
      const double den =
          (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + kSsimC1) * (var_x + var_y + kSsimC2);
      acc.add(num / den);
    }
    channel_mean.add(acc.value() / static_cast<double>(mu_x.size()));
  }
  return channel_mean.value() / a.channels;
}

double l1(const FrameImage& a, const FrameImage& b) {
  require_same_shape(a, b);
  NeumaierSum acc;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    acc.add(std::abs(a.values[i] - b.values[i]));
  }
  return acc.value() / static_cast<double>(a.values.size());
}

double pck(const KeypointSequence& pred, const KeypointSequence& gt, double alpha) {
  if (!(alpha > 0.0)) throw InputError("pck alpha must be positive");
  if (pred.frame_count() != gt.frame_count() || pred.joint_count() != gt.joint_count()) {
    throw InputError("keypoint sequences must have matching frame and joint counts");
  }

  long long correct = 0;
  long long total = 0;
  for (std::size_t f = 0; f < gt.frame_count(); ++f) {
    double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
    bool any = false;
    for (const Joint& j : gt.frames[f]) {
      if (j.confidence <= 0.0) continue;
      if (!any) {
        min_x = max_x = j.x;
        min_y = max_y = j.y;
        any = true;
      } else {
        min_x = std::min(min_x, j.x);
        max_x = std::max(max_x, j.x);
        min_y = std::min(min_y, j.y);
        max_y = std::max(max_y, j.y);
      }
    }
    if (!any) continue;  // no valid ground truth in this frame
    const double threshold = alpha * std::hypot(max_x - min_x, max_y - min_y);

    for (std::size_t j = 0; j < gt.frames[f].size(); ++j) {
      const Joint& g = gt.frames[f][j];
      if (g.confidence <= 0.0) continue;
      const Joint& p = pred.frames[f][j];
      ++total;
      if (std::hypot(p.x - g.x, p.y - g.y) <= threshold) ++correct;
    }
  }
  if (total == 0) throw InputError("no valid ground-truth joints in any frame");
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

MetricReport aggregate_metrics(const std::vector<FrameMetrics>& per_frame) {
  if (per_frame.empty()) throw InputError("no frames to aggregate");
  MetricReport report;
  report.per_frame = per_frame;

  NeumaierSum psnr_sum, ssim_sum, l1_sum;
  int finite_psnr = 0;
  for (const FrameMetrics& m : per_frame) {
    if (m.psnr_db) {
      psnr_sum.add(*m.psnr_db);
      ++finite_psnr;
    }
    ssim_sum.add(m.ssim);
    l1_sum.add(m.l1);
  }
  report.ssim = ssim_sum.value() / static_cast<double>(per_frame.size());
  report.l1 = l1_sum.value() / static_cast<double>(per_frame.size());
  if (finite_psnr == 0) {
    report.psnr_infinite = true;
  } else {
    report.psnr_db = psnr_sum.value() / finite_psnr;
  }
  return report;
}

}  // namespace motionscope
