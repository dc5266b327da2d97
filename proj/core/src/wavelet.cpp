#include "motionscope/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "motionscope/error.hpp"

namespace motionscope {
namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// In-place unnormalized DFT via FFTW. std::complex<double> is
// layout-compatible with fftw_complex. The FFTW planner is not
// thread-safe, so plan creation/destruction is serialized; execution of
// distinct plans is safe to run concurrently.
void dft(std::vector<std::complex<double>>& data, int sign) {
  static std::mutex planner_mutex;
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex);
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), ptr, ptr, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex);
  fftw_destroy_plan(plan);
}

int support_radius(int scale, std::size_t n) {
  const auto r = static_cast<std::size_t>(kWaveletSupportRadiusSigmas * scale);
  return static_cast<int>(std::min(r, n - 1));
}

}  // namespace

void CwtConfig::validate() const {
  if (scale_min < 1 || scale_max < 1 || scale_min > scale_max) {
    throw InputError("invalid scale range [" + std::to_string(scale_min) + ", " +
                     std::to_string(scale_max) + "]");
  }
  if (scale_step < 1) throw InputError("scale_step must be >= 1");
  if (!(morlet_omega0 > 0.0)) throw InputError("morlet_omega0 must be positive");
}

std::vector<int> CwtConfig::scales() const {
  validate();
  std::vector<int> out;
  for (int a = scale_min; a <= scale_max; a += scale_step) out.push_back(a);
  return out;
}

std::complex<double> morlet(double u, double omega0) {
  const double envelope = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * u * u);
  return {envelope * std::cos(omega0 * u), envelope * std::sin(omega0 * u)};
}

std::vector<std::vector<std::complex<double>>> cwt_matrix(std::span<const double> velocity,
                                                          const CwtConfig& cfg) {
  cfg.validate();
  if (velocity.empty()) throw InputError("empty velocity series");

  const std::size_t n = velocity.size();
  const std::vector<int> scales = cfg.scales();
  const int max_radius = support_radius(scales.back(), n);
  const std::size_t m = next_pow2(n + 2 * static_cast<std::size_t>(max_radius) + 1);

  // The series mean is removed first. The wavelet is zero-mean, so this
  // leaves fully-overlapped coefficients unchanged, but it stops the DC
  // level from leaking into boundary coefficients where the kernel only
  // partially overlaps the zero-padded series.
  double mean = 0.0;
  for (double v : velocity) mean += v;
  mean /= static_cast<double>(n);

  std::vector<std::complex<double>> signal_fft(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) signal_fft[i] = velocity[i] - mean;
  dft(signal_fft, FFTW_FORWARD);

  std::vector<std::vector<std::complex<double>>> out;
  out.reserve(scales.size());
  std::vector<std::complex<double>> kernel(m);

  for (int a : scales) {
    const int radius = support_radius(a, n);
    const double inv_sqrt_a = 1.0 / std::sqrt(static_cast<double>(a));

    // C(a,b) = sum_t v(t) conj(psi((t-b)/a)) / sqrt(a) is a convolution
    // of v with g(i) = conj(psi(-i/a)) / sqrt(a).
    std::fill(kernel.begin(), kernel.end(), std::complex<double>(0.0));
    for (int i = -radius; i <= radius; ++i) {
      const std::complex<double> g = inv_sqrt_a * std::conj(morlet(-i / double(a), cfg.morlet_omega0));
      kernel[(i % static_cast<int>(m) + m) % m] = g;
    }
    dft(kernel, FFTW_FORWARD);
    for (std::size_t i = 0; i < m; ++i) kernel[i] *= signal_fft[i];
    dft(kernel, FFTW_BACKWARD);

    std::vector<std::complex<double>> row(n);
    for (std::size_t b = 0; b < n; ++b) row[b] = kernel[b] / static_cast<double>(m);
    out.push_back(std::move(row));
  }
  return out;
}

EnergySeries energy_series(std::span<const double> velocity, const CwtConfig& cfg) {
  const auto matrix = cwt_matrix(velocity, cfg);
  EnergySeries e;
  e.raw.assign(velocity.size(), 0.0);
  for (const auto& row : matrix) {
    for (std::size_t t = 0; t < row.size(); ++t) e.raw[t] += std::abs(row[t]);
  }
  e.filtered = e.raw;
  return e;
}

std::vector<Peak> find_peaks(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  std::vector<Peak> peaks;

  int i = 1;
  while (i + 1 < n) {
    if (values[i] <= values[i - 1]) {
      ++i;
      continue;
    }
    int j = i;  // plateau [i, j] of equal values
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    if (j + 1 >= n || values[j + 1] >= values[i]) {
      i = j + 1;
      continue;
    }

    Peak peak;
    peak.index = (i + j) / 2;
    const double h = values[peak.index];

    double left_min = h;
    for (int k = i - 1; k >= 0 && values[k] <= h; --k) left_min = std::min(left_min, values[k]);
    double right_min = h;
    for (int k = j + 1; k < n && values[k] <= h; ++k) right_min = std::min(right_min, values[k]);
    peak.prominence = h - std::max(left_min, right_min);

    // Support region: contiguous samples strictly above the
    // half-prominence reference height.
    const double ref = h - 0.5 * peak.prominence;
    int lo = i;
    while (lo > 0 && values[lo - 1] > ref) --lo;
    int hi = j;
    while (hi + 1 < n && values[hi + 1] > ref) ++hi;
    peak.support_begin = lo;
    peak.support_end = hi;

    peaks.push_back(peak);
    i = j + 1;
  }
  return peaks;
}

EnergySeries filter_peaks(const EnergySeries& e, int threshold_frames) {
  if (threshold_frames < 1) throw InputError("peak width threshold must be >= 1");
  EnergySeries out = e;
  out.filtered = e.raw;
  out.peak_threshold_frames = threshold_frames;
  for (const Peak& p : find_peaks(e.raw)) {
    if (p.width() < threshold_frames) {
      for (int t = p.support_begin; t <= p.support_end; ++t) out.filtered[t] = 0.0;
    }
  }
  return out;
}

}  // namespace motionscope
