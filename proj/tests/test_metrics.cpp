#include <doctest.h>

#include <cmath>
#include <random>

#include "motionscope/error.hpp"
#include "motionscope/metrics.hpp"
#include "oracles.hpp"

using namespace motionscope;

namespace {

FrameImage constant_image(int w, int h, int channels, double value) {
  FrameImage img;
  img.width = w;
  img.height = h;
  img.channels = channels;
  img.values.assign(static_cast<std::size_t>(w) * h * channels, value);
  return img;
}

FrameImage random_image(int w, int h, int channels, std::mt19937& rng) {
  FrameImage img = constant_image(w, h, channels, 0.0);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (double& v : img.values) v = dist(rng);
  return img;
}

}  // namespace

TEST_CASE("psnr of identical images is infinite") {
  const FrameImage a = constant_image(16, 16, 3, 0.42);
  const PsnrValue p = psnr(a, a);
  CHECK(p.infinite);
}

TEST_CASE("psnr closed form for 0 vs 0.5") {
  const FrameImage zero = constant_image(8, 8, 1, 0.0);
  const FrameImage half = constant_image(8, 8, 1, 0.5);
  const PsnrValue p = psnr(zero, half);
  CHECK_FALSE(p.infinite);
  CHECK(p.db == doctest::Approx(10.0 * std::log10(4.0)).epsilon(1e-12));
  CHECK(p.db == doctest::Approx(6.0206).epsilon(1e-4));
}

TEST_CASE("psnr matches a direct per-pixel oracle") {
  std::mt19937 rng(5);
  const FrameImage a = random_image(20, 14, 3, rng);
  const FrameImage b = random_image(20, 14, 3, rng);
  double sq = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    sq += (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
  }
  const double expected = 10.0 * std::log10(a.values.size() / sq);
  CHECK(psnr(a, b).db == doctest::Approx(expected).epsilon(1e-9));
  CHECK(psnr(b, a).db == doctest::Approx(expected).epsilon(1e-9));  // symmetry
}

TEST_CASE("psnr shape mismatch") {
  CHECK_THROWS_AS(psnr(constant_image(4, 4, 1, 0.0), constant_image(4, 5, 1, 0.0)), InputError);
}

TEST_CASE("ssim of identical images is exactly 1") {
  std::mt19937 rng(6);
  const FrameImage a = random_image(24, 16, 3, rng);
  CHECK(ssim(a, a) == 1.0);
}

TEST_CASE("ssim zero-variance closed form") {
  const FrameImage a = constant_image(16, 16, 1, 0.2);
  const FrameImage b = constant_image(16, 16, 1, 0.8);
  const double c1 = 0.01 * 0.01;
  const double expected = (2.0 * 0.2 * 0.8 + c1) / (0.2 * 0.2 + 0.8 * 0.8 + c1);
  CHECK(ssim(a, b) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ssim(a, b) < 1.0);
}

TEST_CASE("ssim matches the sliding-window oracle on random pairs") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int w = 12 + static_cast<int>(rng() % 20);
    const int h = 12 + static_cast<int>(rng() % 20);
    const int channels = (trial % 2) ? 3 : 1;
    const FrameImage a = random_image(w, h, channels, rng);
    const FrameImage b = random_image(w, h, channels, rng);
    CHECK(ssim(a, b) == doctest::Approx(oracles::ssim_direct(a, b)).epsilon(1e-7));
    CHECK(ssim(a, b) == doctest::Approx(ssim(b, a)).epsilon(1e-12));
  }
}

TEST_CASE("ssim rejects images smaller than the window") {
  CHECK_THROWS_AS(ssim(constant_image(10, 30, 1, 0.5), constant_image(10, 30, 1, 0.5)),
                  InputError);
}

TEST_CASE("l1 basics and oracle") {
  const FrameImage zero = constant_image(6, 6, 3, 0.0);
  const FrameImage one = constant_image(6, 6, 3, 1.0);
  CHECK(l1(zero, zero) == 0.0);
  CHECK(l1(zero, one) == 1.0);

  std::mt19937 rng(8);
  const FrameImage a = random_image(9, 7, 3, rng);
  const FrameImage b = random_image(9, 7, 3, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::abs(a.values[i] - b.values[i]);
  CHECK(l1(a, b) == doctest::Approx(sum / a.values.size()).epsilon(1e-12));
  CHECK(l1(a, b) == l1(b, a));
}

TEST_CASE("pck is 100 for exact predictions and 0 for far ones") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> coord(100.0, 500.0);
  KeypointSequence gt;
  gt.fps = 30;
  gt.frame_width = 640;
  gt.frame_height = 480;
  for (int f = 0; f < 5; ++f) {
    std::vector<Joint> joints;
    for (int j = 0; j < 6; ++j) joints.push_back({coord(rng), coord(rng), 1.0});
    gt.frames.push_back(joints);
  }
  CHECK(pck(gt, gt, 0.5) == 100.0);

  KeypointSequence far = gt;
  for (auto& frame : far.frames) {
    for (Joint& j : frame) j.x += 5000.0;
  }
  CHECK(pck(far, gt, 0.5) == 0.0);
}

TEST_CASE("pck splits displacements against the per-frame box diagonal") {
  // Two joints per frame spanning a 300x400 box: diagonal 500,
  // threshold 250 at alpha 0.5. One joint lands just inside, one just
  // outside, over 10 frames -> exactly 50%.
  KeypointSequence gt;
  gt.fps = 30;
  gt.frame_width = 1000;
  gt.frame_height = 1000;
  KeypointSequence pred = gt;
  for (int f = 0; f < 10; ++f) {
    gt.frames.push_back({{100, 100, 1.0}, {400, 500, 1.0}});
    pred.frames.push_back({{100 + 249.0, 100, 1.0}, {400 + 251.0, 500, 1.0}});
  }
  CHECK(pck(pred, gt, 0.5) == 50.0);
}

TEST_CASE("pck ignores invalid ground-truth joints and translated pairs agree") {
  KeypointSequence gt;
  gt.fps = 30;
  gt.frame_width = 640;
  gt.frame_height = 480;
  gt.frames.push_back({{10, 10, 1.0}, {200, 300, 1.0}, {999, 999, 0.0}});
  KeypointSequence pred = gt;
  pred.frames[0][2] = {0, 0, 1.0};  // prediction for invalid gt joint is ignored
  CHECK(pck(pred, gt, 0.5) == 100.0);

  // rigid translation of both leaves pck unchanged
  KeypointSequence gt2 = gt, pred2 = pred;
  for (auto* seq : {&gt2, &pred2}) {
    for (auto& frame : seq->frames) {
      for (Joint& j : frame) {
        j.x += 77.0;
        j.y -= 13.0;
      }
    }
  }
  CHECK(pck(pred2, gt2, 0.5) == pck(pred, gt, 0.5));
}

TEST_CASE("pck errors") {
  KeypointSequence gt;
  gt.fps = 30;
  gt.frame_width = 64;
  gt.frame_height = 64;
  gt.frames.push_back({{1, 1, 0.0}});
  CHECK_THROWS_AS(pck(gt, gt, 0.5), InputError);  // no valid joints anywhere
  KeypointSequence other = gt;
  other.frames.push_back({{1, 1, 1.0}});
  CHECK_THROWS_AS(pck(other, gt, 0.5), InputError);  // frame count mismatch
}

TEST_CASE("aggregation is the mean of the per-frame breakdown") {
  std::vector<FrameMetrics> frames(3);
  frames[0] = {"a", 30.0, 0.9, 0.01};
  frames[1] = {"b", 40.0, 0.8, 0.02};
  frames[2] = {"c", 35.0, 0.7, 0.03};
  const MetricReport r = aggregate_metrics(frames);
  CHECK(r.psnr_db == doctest::Approx(35.0).epsilon(1e-12));
  CHECK(r.ssim == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(r.l1 == doctest::Approx(0.02).epsilon(1e-12));

  std::vector<FrameMetrics> identical(2);
  identical[0] = {"a", std::nullopt, 1.0, 0.0};
  identical[1] = {"b", std::nullopt, 1.0, 0.0};
  CHECK(aggregate_metrics(identical).psnr_infinite);
}
