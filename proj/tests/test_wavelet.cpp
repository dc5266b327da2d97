#include <doctest.h>

#include <cmath>
#include <random>

#include "motionscope/error.hpp"
#include "motionscope/wavelet.hpp"
#include "oracles.hpp"

using namespace motionscope;

namespace {

std::vector<double> random_series(std::size_t n, unsigned seed, double lo = 0.0,
                                  double hi = 100.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

double matrix_rel_error(const std::vector<std::vector<std::complex<double>>>& a,
                        const std::vector<std::vector<std::complex<double>>>& b) {
  double num = 0.0, den = 0.0;
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    REQUIRE(a[i].size() == b[i].size());
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      num += std::norm(a[i][j] - b[i][j]);
      den += std::norm(b[i][j]);
    }
  }
  return den > 0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace

TEST_CASE("constant series has near-zero coefficients") {
  const std::vector<double> v(64, 1.0);
  const auto matrix = cwt_matrix(v);
  for (const auto& row : matrix) {
    for (const auto& c : row) CHECK(std::abs(c) < 1e-6 * v.size());
  }
}

TEST_CASE("impulses reproduce the sampled wavelet") {
  // +1/-1 impulse pair keeps the series zero-mean, so the transform's
  // mean removal leaves the sifting property exact.
  std::vector<double> v(120, 0.0);
  const int k1 = 30, k2 = 90;
  v[k1] = 1.0;
  v[k2] = -1.0;
  CwtConfig cfg;
  cfg.scale_min = 4;
  cfg.scale_max = 4;
  const auto matrix = cwt_matrix(v, cfg);
  auto term = [](int k, int b) -> std::complex<double> {
    if (std::abs(k - b) > 32) return 0.0;
    return std::conj(morlet((k - b) / 4.0, 6.0)) / std::sqrt(4.0);
  };
  for (int b = 0; b < 120; ++b) {
    CHECK(std::abs(matrix[0][b] - (term(k1, b) - term(k2, b))) < 1e-12);
  }
}

TEST_CASE("fast convolution matches the direct double-loop sum") {
  const auto v = random_series(200, 99);
  const auto fast = cwt_matrix(v);
  const auto direct = oracles::cwt_direct(v);
  CHECK(matrix_rel_error(fast, direct) < 1e-9);
}

TEST_CASE("cwt input validation") {
  CHECK_THROWS_AS(cwt_matrix(std::vector<double>{}), InputError);
  CwtConfig bad;
  bad.scale_min = 10;
  bad.scale_max = 5;
  CHECK_THROWS_AS(cwt_matrix(std::vector<double>{1.0, 2.0}, bad), InputError);
  bad = {};
  bad.scale_step = 0;
  CHECK_THROWS_AS(cwt_matrix(std::vector<double>{1.0, 2.0}, bad), InputError);
}

TEST_CASE("energy is the column-wise magnitude sum of the matrix") {
  const auto v = random_series(80, 3);
  CwtConfig cfg;
  cfg.scale_max = 32;
  const auto matrix = cwt_matrix(v, cfg);
  const EnergySeries e = energy_series(v, cfg);
  REQUIRE(e.raw.size() == v.size());
  CHECK(e.filtered == e.raw);
  for (std::size_t t = 0; t < v.size(); ++t) {
    double sum = 0.0;
    for (const auto& row : matrix) sum += std::abs(row[t]);
    CHECK(e.raw[t] == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("constant series energy is near zero per sample") {
  const std::vector<double> v(100, 3.5);
  const EnergySeries e = energy_series(v);
  for (double x : e.raw) CHECK(x <= 3.5 * 1e-4);
}

TEST_CASE("sinusoidal burst concentrates energy inside its support") {
  std::vector<double> v(240, 10.0);
  for (int t = 90; t < 150; ++t) v[t] = 10.0 + 40.0 * std::sin(2.0 * M_PI * 0.25 * t);
  const EnergySeries e = energy_series(v);
  std::size_t argmax = 0;
  for (std::size_t t = 1; t < e.raw.size(); ++t) {
    if (e.raw[t] > e.raw[argmax]) argmax = t;
  }
  CHECK(argmax >= 90);
  CHECK(argmax < 150);
}

TEST_CASE("energy scales linearly with velocity") {
  const auto v = random_series(120, 21);
  auto v3 = v;
  for (double& x : v3) x *= 3.0;
  CwtConfig cfg;
  cfg.scale_max = 64;
  const EnergySeries e1 = energy_series(v, cfg);
  const EnergySeries e3 = energy_series(v3, cfg);
  for (std::size_t t = 0; t < v.size(); ++t) {
    CHECK(e3.raw[t] == doctest::Approx(3.0 * e1.raw[t]).epsilon(1e-9));
  }
}

TEST_CASE("narrow spikes are zeroed, wide plateaus survive") {
  EnergySeries e;
  e.raw = {0, 0, 0, 9, 0, 0, 1, 2, 5, 5, 5, 5, 5, 2, 1, 0};
  e.filtered = e.raw;

  const EnergySeries filtered = filter_peaks(e, 3);
  CHECK(filtered.filtered[3] == 0.0);  // width-1 spike removed
  for (int t = 8; t <= 12; ++t) CHECK(filtered.filtered[t] == e.raw[t]);  // plateau kept
  CHECK(filtered.peak_threshold_frames == 3);
}

TEST_CASE("monotonic series passes through the peak filter") {
  EnergySeries e;
  for (int t = 0; t < 30; ++t) e.raw.push_back(t * 1.5);
  e.filtered = e.raw;
  const EnergySeries out = filter_peaks(e, 3);
  CHECK(out.filtered == e.raw);
}

TEST_CASE("flat series passes through the peak filter") {
  EnergySeries e;
  e.raw.assign(20, 4.0);
  e.filtered = e.raw;
  CHECK(filter_peaks(e, 5).filtered == e.raw);
}

TEST_CASE("peak filter contract on random series") {
  for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
    EnergySeries e;
    e.raw = random_series(300, seed);
    e.filtered = e.raw;

    // threshold 1 is the identity
    CHECK(filter_peaks(e, 1).filtered == e.raw);

    // filtered[t] is 0 or raw[t]; never increases
    const EnergySeries f = filter_peaks(e, 4);
    for (std::size_t t = 0; t < e.raw.size(); ++t) {
      const bool kept = f.filtered[t] == e.raw[t];
      const bool zeroed = f.filtered[t] == 0.0;
      CHECK((kept || zeroed));
    }

    // samples outside narrow-peak supports are untouched
    std::vector<bool> in_narrow_support(e.raw.size(), false);
    for (const Peak& p : find_peaks(e.raw)) {
      if (p.width() < 4) {
        for (int t = p.support_begin; t <= p.support_end; ++t) in_narrow_support[t] = true;
      }
    }
    for (std::size_t t = 0; t < e.raw.size(); ++t) {
      if (!in_narrow_support[t]) CHECK(f.filtered[t] == e.raw[t]);
    }
  }
}

TEST_CASE("energy is translation covariant away from the boundary") {
  // Shift a localized bump; interior energy samples must shift with it.
  const int n = 400;
  std::vector<double> v(n, 0.0), shifted(n, 0.0);
  const int k = 17;
  for (int t = 150; t < 190; ++t) {
    const double x = 20.0 * std::sin(0.9 * t);
    v[t] = x;
    shifted[t + k] = x;
  }
  CwtConfig cfg;
  cfg.scale_max = 16;  // keep the boundary-affected margin small
  const EnergySeries e1 = energy_series(v, cfg);
  const EnergySeries e2 = energy_series(shifted, cfg);
  const int margin = 16 * 8;
  for (int t = margin; t + k < n - margin; ++t) {
    CHECK(std::abs(e2.raw[t + k] - e1.raw[t]) <= 1e-9 + 1e-9 * e1.raw[t]);
  }
}
