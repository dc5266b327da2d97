#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "motionscope/error.hpp"
#include "motionscope/motion_signal.hpp"
#include "oracles.hpp"

using namespace motionscope;

TEST_CASE("static joint yields zero velocity") {
  const auto seq = oracles::track_sequence({{10, 20}, {10, 20}, {10, 20}});
  const VelocitySeries v = compute_velocity(seq, 0);
  CHECK(v.values.size() == 2);
  for (double x : v.values) CHECK(x == 0.0);
}

TEST_CASE("a 3-4-5 displacement at 30 fps gives 150 px/s") {
  const auto seq = oracles::track_sequence({{0, 0}, {3, 4}}, 30.0);
  const VelocitySeries v = compute_velocity(seq, 0);
  REQUIRE(v.values.size() == 1);
  CHECK(v.values[0] == doctest::Approx(150.0).epsilon(1e-12));
}

TEST_CASE("velocity matches element-wise recomputation on a random trajectory") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  std::vector<std::pair<double, double>> xy(100);
  for (auto& p : xy) p = {coord(rng), coord(rng)};
  const auto seq = oracles::track_sequence(xy, 27.5);

  const VelocitySeries v = compute_velocity(seq, 0);
  REQUIRE(v.values.size() == 99);
  for (std::size_t t = 0; t < v.values.size(); ++t) {
    const double dx = xy[t + 1].first - xy[t].first;
    const double dy = xy[t + 1].second - xy[t].second;
    CHECK(v.values[t] == doctest::Approx(std::sqrt(dx * dx + dy * dy) * 27.5).epsilon(1e-12));
  }
}

TEST_CASE("velocity errors") {
  CHECK_THROWS_AS(compute_velocity(oracles::track_sequence({{0, 0}})), InputError);
  CHECK_THROWS_AS(compute_velocity(oracles::track_sequence({{0, 0}, {1, 1}}), 5), InputError);
  CHECK_THROWS_AS(compute_velocity(oracles::track_sequence({{0, 0}, {1, 1}}), -1), InputError);
}

TEST_CASE("velocity scaling properties") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::vector<std::pair<double, double>> xy(40);
  for (auto& p : xy) p = {coord(rng), coord(rng)};

  auto seq = oracles::track_sequence(xy, 24.0);
  const VelocitySeries base = compute_velocity(seq, 0);

  // Coordinate scaling by s scales every value by s.
  auto scaled = seq;
  for (auto& frame : scaled.frames) {
    frame[0].x *= 2.5;
    frame[0].y *= 2.5;
  }
  const VelocitySeries vs = compute_velocity(scaled, 0);
  for (std::size_t t = 0; t < base.values.size(); ++t) {
    CHECK(vs.values[t] == doctest::Approx(2.5 * base.values[t]).epsilon(1e-12));
  }

  // Doubling fps doubles every value.
  auto faster = seq;
  faster.fps *= 2.0;
  const VelocitySeries vf = compute_velocity(faster, 0);
  for (std::size_t t = 0; t < base.values.size(); ++t) {
    CHECK(vf.values[t] == doctest::Approx(2.0 * base.values[t]).epsilon(1e-12));
  }

  // Reversal preserves the multiset of values.
  auto reversed = seq;
  std::reverse(reversed.frames.begin(), reversed.frames.end());
  VelocitySeries vr = compute_velocity(reversed, 0);
  std::vector<double> a = base.values, b = vr.values;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t t = 0; t < a.size(); ++t) CHECK(a[t] == doctest::Approx(b[t]).epsilon(1e-12));
}
