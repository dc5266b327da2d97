#pragma once

#include <complex>
#include <span>
#include <vector>

namespace motionscope {

struct CwtConfig {
  int scale_min = 1;
  int scale_max = 128;
  int scale_step = 1;
  double morlet_omega0 = 6.0;

  // Throws InputError on scale_min > scale_max, non-positive entries, etc.
  void validate() const;
  std::vector<int> scales() const;
};

// Morlet mother wavelet: pi^(-1/4) * exp(i*omega0*u) * exp(-u^2/2).
std::complex<double> morlet(double u, double omega0);

// Samples beyond this many time steps from the wavelet center are
// treated as zero (|u| <= 8 in mother-wavelet units).
inline constexpr double kWaveletSupportRadiusSigmas = 8.0;

// Scale-by-time matrix of CWT coefficients:
//   C(a,b) = (1/sqrt(a)) * sum_t (v(t) - mean(v)) * conj(morlet((t-b)/a))
// discretized with unit time step, zero-padded outside the series. The
// series mean is removed so constant input yields zero coefficients even
// at boundary samples where the kernel overhangs the padding. Computed
// per scale via FFT convolution; matches the direct sum to floating-point
// rounding because both use the same truncation radius.
std::vector<std::vector<std::complex<double>>> cwt_matrix(
    std::span<const double> velocity, const CwtConfig& cfg = {});

struct EnergySeries {
  std::vector<double> raw;       // E(t): sum of |C(a,t)| over scales
  std::vector<double> filtered;  // E'(t): raw with narrow peaks zeroed
  int peak_threshold_frames = 0;
};

// raw[t] = sum over configured scales of |C(a,t)|; filtered starts equal
// to raw (call filter_peaks to populate it).
EnergySeries energy_series(std::span<const double> velocity, const CwtConfig& cfg = {});

// One detected local maximum of a series. Width is the number of samples
// in the half-prominence support region [support_begin, support_end].
struct Peak {
  int index = 0;
  double prominence = 0.0;
  int support_begin = 0;
  int support_end = 0;
  int width() const { return support_end - support_begin + 1; }
};

// Strict local maxima (plateaus count once); prominence is measured
// against the higher of the two flanking minima.
std::vector<Peak> find_peaks(std::span<const double> values);

// Zeroes every sample inside the support region of each peak whose width
// is below threshold_frames; all other samples keep their raw value.
EnergySeries filter_peaks(const EnergySeries& e, int threshold_frames);

}  // namespace motionscope
