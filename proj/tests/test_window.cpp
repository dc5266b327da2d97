#include <doctest.h>

#include <random>

#include "motionscope/error.hpp"
#include "motionscope/window.hpp"
#include "oracles.hpp"

using namespace motionscope;

namespace {

EnergySeries series(std::vector<double> filtered) {
  EnergySeries e;
  e.raw = filtered;
  e.filtered = std::move(filtered);
  return e;
}

// Values on a dyadic grid keep every window sum exactly representable,
// so prefix-sum and direct summation agree bit-for-bit.
std::vector<double> dyadic_random(std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<int> grid(0, 1 << 20);
  std::vector<double> v(n);
  for (double& x : v) x = grid(rng) / 1024.0;
  return v;
}

}  // namespace

TEST_CASE("unique maximal window is found away from boundaries") {
  std::vector<double> filtered(40, 0.0);
  filtered[20] = 5.0;
  filtered[21] = 5.0;
  const WindowSelection sel = select_window(series(filtered), 1.0, 41, 2.0);
  CHECK(sel.start_frame == 20);
  CHECK(sel.end_frame == 22);
  CHECK(sel.window_energy == 10.0);
  CHECK_FALSE(sel.whole_video);
  CHECK_FALSE(sel.boundary_adjusted);
}

TEST_CASE("all-zero energy ties break to the smallest start index") {
  const WindowSelection sel = select_window(series(std::vector<double>(40, 0.0)), 1.0, 41, 2.0);
  CHECK(sel.start_frame == 0);
  CHECK(sel.window_energy == 0.0);
  CHECK_FALSE(sel.boundary_adjusted);  // already at 0, no snap happened
}

TEST_CASE("short video returns the whole video") {
  const WindowSelection sel = select_window(series(std::vector<double>(119, 1.0)), 30.0, 120, 6.0);
  CHECK(sel.whole_video);
  CHECK(sel.start_frame == 0);
  CHECK(sel.end_frame == 120);
  CHECK(sel.duration_seconds == doctest::Approx(4.0));
}

TEST_CASE("boundary snapping toward both ends") {
  // Window [4, 24) uniquely catches both bumps; 4 is inside the margin.
  std::vector<double> near_start(99, 0.0);
  near_start[4] = 100.0;
  near_start[23] = 50.0;
  WindowSelection sel = select_window(series(near_start), 1.0, 100, 20.0);
  CHECK(sel.start_frame == 0);
  CHECK(sel.boundary_adjusted);

  // Peak near the end: best index 78 with L=20 ends at 98 > 100-10.
  std::vector<double> near_end(99, 0.0);
  near_end[95] = 100.0;
  sel = select_window(series(near_end), 1.0, 100, 20.0);
  CHECK(sel.start_frame == 80);
  CHECK(sel.end_frame == 100);
  CHECK(sel.boundary_adjusted);
}

TEST_CASE("energy length inconsistent with frame count is an error") {
  CHECK_THROWS_AS(select_window(series(std::vector<double>(10, 0.0)), 30.0, 100, 6.0),
                  InputError);
}

TEST_CASE("uniform shift of the energy does not move the selection") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int total = 100 + static_cast<int>(rng() % 200);
    std::vector<double> filtered = dyadic_random(total - 1, rng);
    const double window_seconds = 1.0 + (rng() % 40);
    const WindowSelection a = select_window(series(filtered), 1.0, total, window_seconds);
    for (double& x : filtered) x += 64.0;
    const WindowSelection b = select_window(series(filtered), 1.0, total, window_seconds);
    CHECK(a.start_frame == b.start_frame);
  }
}

TEST_CASE("prefix-sum selection equals brute force on random inputs") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int total = 2 + static_cast<int>(rng() % 999);
    const std::vector<double> filtered = dyadic_random(total - 1, rng);
    const double fps = 1.0 + (rng() % 60);
    const double window_seconds = 0.25 * (1 + rng() % 40);

    const WindowSelection got = select_window(series(filtered), fps, total, window_seconds);
    const WindowSelection want =
        oracles::select_window_brute(filtered, fps, total, window_seconds);

    CHECK(got.start_frame == want.start_frame);
    CHECK(got.end_frame == want.end_frame);
    CHECK(got.window_energy == want.window_energy);
    CHECK(got.whole_video == want.whole_video);
    CHECK(got.boundary_adjusted == want.boundary_adjusted);
    CHECK(got.start_frame >= 0);
    CHECK(got.end_frame <= total);
  }
}
