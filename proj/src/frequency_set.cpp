#include "nlrt/frequency_set.hpp"

#include <cmath>

namespace nlrt {

double FrequencySet::spacing_hz() const {
  return frequencies_hz.size() >= 2 ? frequencies_hz[1] - frequencies_hz[0] : 0.0;
}

double pulse_sigma_s(const PhasorParams& phasor) {
  const double fwhm = phasor.cycles_in_pulse * phasor.virtual_wavelength_m / kSpeedOfLight;
  return fwhm * kFwhmToSigma;
}

FrequencySet build_frequency_set(const PhasorParams& phasor) {
  const double f_center = phasor.center_frequency_hz();
  const double sigma_t = pulse_sigma_s(phasor);
  const double sigma_f = 1.0 / (2.0 * kPi * sigma_t);
  const double df = 1.0 / phasor.histogram_span_s;

  // Peak weight over the sampled grid; the center rarely falls on a bin.
  const int64_t n_center = std::llround(f_center / df);
  double peak = 0.0;
  for (int64_t n = n_center - 1; n <= n_center + 1; ++n) {
    if (n < 1) continue;
    const double d = n * df - f_center;
    peak = std::max(peak, std::exp(-d * d / (2.0 * sigma_f * sigma_f)));
  }

  FrequencySet set;
  // Scan outward far enough to cover any cutoff above the double underflow.
  const int64_t reach = static_cast<int64_t>(std::ceil(40.0 * sigma_f / df)) + 2;
  for (int64_t n = std::max<int64_t>(1, n_center - reach); n <= n_center + reach; ++n) {
    const double f = n * df;
    const double d = f - f_center;
    const double w = std::exp(-d * d / (2.0 * sigma_f * sigma_f));
    if (w >= phasor.spectral_cutoff * peak) {
      set.frequencies_hz.push_back(f);
      set.weights.emplace_back(w, 0.0);
    }
  }
  if (set.frequencies_hz.empty()) {
    throw ConfigError("spectral cutoff leaves no frequencies; lower phasor.spectral_cutoff");
  }
  return set;
}

}  // namespace nlrt
