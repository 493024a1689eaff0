#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nlrt/common.hpp"

namespace nlrt {

struct RelayGeometry {
  double wall_width_m = 1.9;
  double wall_height_m = 1.9;
  Vec3 laser_origin{0.95, 0.95, 2.0};     // device standoff 2 m from wall
  Vec3 detector_origin{0.95, 0.95, 2.0};
};

struct ScanPattern {
  int rows = 190;
  int cols = 22;
  double row_pitch_m = 0.01;
  double col_pitch_m = 0.09;
  bool serpentine = false;

  int point_count() const { return rows * cols; }
};

struct SpadLayout {
  int pixel_count = 28;
  double span_m = 0.08;  // leftmost-to-rightmost focus width on the wall
  // Offset of each pixel's sensing spot to the LEFT of the reference pixel
  // x_c1 (the rightmost one). Empty -> pixel q gets (Q-1-q)*span/(Q-1), so
  // the highest-numbered pixel is the reference with offset 0.
  std::vector<double> offsets_m;
  // Sensing-row center on the wall; NaN -> wall center, resolved at validate.
  double center_x_m = std::nan("");
  double center_y_m = std::nan("");
  // Delay-window boundaries in seconds (W+1 entries for W windows).
  std::vector<double> window_bounds_s = {0e-9, 40e-9, 90e-9, 140e-9, 180e-9};
  // Pixels used for aperture remapping, one per integer column shift. Empty
  // -> chosen automatically (nearest offset per shift).
  std::vector<int> remap_pixels;

  int window_count() const { return static_cast<int>(window_bounds_s.size()) - 1; }
  // pixel -> (TCSPC channel, delay window)
  int channel_of(int pixel) const { return pixel / window_count(); }
  int window_of(int pixel) const { return pixel % window_count(); }
  int pixel_of(int channel, int window) const { return channel * window_count() + window; }
};

struct PhasorParams {
  double virtual_wavelength_m = 0.08;
  double cycles_in_pulse = 5.0;
  double spectral_cutoff = 0.01;
  double time_bin_s = 8e-12;
  double histogram_span_s = 200e-9;  // also the laser sync period

  int64_t span_ticks() const {
    return static_cast<int64_t>(std::llround(histogram_span_s / time_bin_s));
  }
  double center_frequency_hz() const { return kSpeedOfLight / virtual_wavelength_m; }
  double rep_rate_hz() const { return 1.0 / histogram_span_s; }
};

struct VoxelGridSpec {
  double x_extent_m = 1.9;
  double y_extent_m = 1.9;
  int rows = 190;
  int cols = 190;
  double z_min_m = 1.0;
  double z_max_m = 3.5;
  double z_step_m = 0.02;

  int plane_count() const {
    return static_cast<int>(std::floor((z_max_m - z_min_m) / z_step_m + 1e-9)) + 1;
  }
  double plane_depth(int i) const { return z_min_m + i * z_step_m; }
};

struct NoiseParams {
  double ambient_rate_hz = 0.0;  // uniform in time, per pixel
  double dark_rate_hz = 0.0;
  double jitter_fwhm_s = 85e-12;
  double quantum_efficiency = 1.0;
  // Detector gate, wall-relative time within the sync period. The first
  // bounce lands at exactly t=0 on this axis, so the gate opens just after
  // it and stays open for the paper's 40 ns window.
  double gate_on_s = 2e-9;
  double gate_off_s = 42e-9;

  double gate_span_s() const { return gate_off_s - gate_on_s; }
};

enum class DropPolicy { kBlock, kDropOldest };

struct PipelineTuning {
  int queue_capacity = 4;
  int binning_workers = 0;  // 0 -> auto
  int recon_workers = 0;    // 0 -> auto
  DropPolicy drop_policy = DropPolicy::kBlock;
  int fdh_table_size = 65536;
  double kernel_budget_mb = 4096.0;
  // Artificial per-stage delays, used by fault-injection tests.
  double debug_parse_delay_ms = 0.0;
  double debug_bin_delay_ms = 0.0;
  double debug_recon_delay_ms = 0.0;
};

struct AveragingParams {
  double scale = 1.0;  // frames averaged per meter of depth: N = ceil(z*scale)
};

struct SystemConfig {
  double frame_rate_hz = 5.0;
  RelayGeometry relay;
  ScanPattern scan;
  SpadLayout spads;
  PhasorParams phasor;
  VoxelGridSpec volume;
  NoiseParams noise;
  AveragingParams averaging;
  PipelineTuning pipeline;

  double exposure_per_point_s() const {
    return 1.0 / (frame_rate_hz * scan.point_count());
  }
  int64_t pulses_per_frame() const {
    return static_cast<int64_t>(std::llround(phasor.rep_rate_hz() / frame_rate_hz));
  }

  // Resolves derived defaults (SPAD offsets/centers) and checks every
  // invariant; throws ConfigError with the offending key on failure.
  void validate();
};

SystemConfig default_config();

// key = value sections, one per sub-config.
SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);
std::string serialize_config(const SystemConfig& cfg);
void save_config(const SystemConfig& cfg, const std::string& path);

// Applies "section.key=value" overrides (CLI --set). Unknown keys throw.
void apply_override(SystemConfig& cfg, const std::string& spec);

// FNV-1a over the stream-decoding-relevant sections (relay, scan, spads,
// phasor, frame rate). Volume/noise/pipeline tuning can change without
// invalidating a recorded stream.
uint64_t stream_config_hash(const SystemConfig& cfg);

}  // namespace nlrt
