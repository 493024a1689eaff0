#pragma once

#include <complex>
#include <vector>

#include "nlrt/config.hpp"

namespace nlrt {

// Phasor illumination spectrum, sampled on the DFT grid of the histogram
// span: a Gaussian centered on c/lambda_v, truncated at the spectral cutoff.
struct FrequencySet {
  std::vector<double> frequencies_hz;        // ascending, spacing 1/histogram_span
  std::vector<std::complex<double>> weights;

  int count() const { return static_cast<int>(frequencies_hz.size()); }
  double spacing_hz() const;
};

FrequencySet build_frequency_set(const PhasorParams& phasor);

// Pulse envelope std dev in seconds: FWHM = cycles * lambda_v / c.
double pulse_sigma_s(const PhasorParams& phasor);

}  // namespace nlrt
