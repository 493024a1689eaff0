#include "nlrt/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace nlrt {
namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vec3& v) {
  return fmt_double(v.x) + " " + fmt_double(v.y) + " " + fmt_double(v.z);
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += fmt_double(v[i]);
  }
  return out;
}

std::string fmt_list(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += " ";
    out += std::to_string(v[i]);
  }
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for " + key + ": '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    int i = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw ConfigError("config: bad boolean value for " + key + ": '" + v + "'");
}

Vec3 parse_vec(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  Vec3 out;
  if (!(is >> out.x >> out.y >> out.z)) {
    throw ConfigError("config: expected three numbers for " + key + ": '" + v + "'");
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<double> out;
  double d;
  while (is >> d) out.push_back(d);
  if (!is.eof()) throw ConfigError("config: bad list for " + key + ": '" + v + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::istringstream is(v);
  std::vector<int> out;
  int d;
  while (is >> d) out.push_back(d);
  if (!is.eof()) throw ConfigError("config: bad list for " + key + ": '" + v + "'");
  return out;
}

// One place defines every (section, key): serialization, parsing and CLI
// overrides all walk this table.
struct KeyBinding {
  std::string section;
  std::string key;
  std::function<std::string(const SystemConfig&)> get;
  std::function<void(SystemConfig&, const std::string&)> set;
};

std::vector<KeyBinding> bindings() {
  std::vector<KeyBinding> b;
  auto add = [&b](const char* sec, const char* key, auto get, auto set) {
    b.push_back({sec, key, get, set});
  };

  add("system", "frame_rate_hz",
      [](const SystemConfig& c) { return fmt_double(c.frame_rate_hz); },
      [](SystemConfig& c, const std::string& v) { c.frame_rate_hz = parse_double("frame_rate_hz", v); });

  add("relay", "wall_width_m",
      [](const SystemConfig& c) { return fmt_double(c.relay.wall_width_m); },
      [](SystemConfig& c, const std::string& v) { c.relay.wall_width_m = parse_double("wall_width_m", v); });
  add("relay", "wall_height_m",
      [](const SystemConfig& c) { return fmt_double(c.relay.wall_height_m); },
      [](SystemConfig& c, const std::string& v) { c.relay.wall_height_m = parse_double("wall_height_m", v); });
  add("relay", "laser_origin",
      [](const SystemConfig& c) { return fmt_vec(c.relay.laser_origin); },
      [](SystemConfig& c, const std::string& v) { c.relay.laser_origin = parse_vec("laser_origin", v); });
  add("relay", "detector_origin",
      [](const SystemConfig& c) { return fmt_vec(c.relay.detector_origin); },
      [](SystemConfig& c, const std::string& v) { c.relay.detector_origin = parse_vec("detector_origin", v); });

  add("scan", "rows",
      [](const SystemConfig& c) { return std::to_string(c.scan.rows); },
      [](SystemConfig& c, const std::string& v) { c.scan.rows = parse_int("rows", v); });
  add("scan", "cols",
      [](const SystemConfig& c) { return std::to_string(c.scan.cols); },
      [](SystemConfig& c, const std::string& v) { c.scan.cols = parse_int("cols", v); });
  add("scan", "row_pitch_m",
      [](const SystemConfig& c) { return fmt_double(c.scan.row_pitch_m); },
      [](SystemConfig& c, const std::string& v) { c.scan.row_pitch_m = parse_double("row_pitch_m", v); });
  add("scan", "col_pitch_m",
      [](const SystemConfig& c) { return fmt_double(c.scan.col_pitch_m); },
      [](SystemConfig& c, const std::string& v) { c.scan.col_pitch_m = parse_double("col_pitch_m", v); });
  add("scan", "serpentine",
      [](const SystemConfig& c) { return std::string(c.scan.serpentine ? "true" : "false"); },
      [](SystemConfig& c, const std::string& v) { c.scan.serpentine = parse_bool("serpentine", v); });

  add("spads", "pixel_count",
      [](const SystemConfig& c) { return std::to_string(c.spads.pixel_count); },
      [](SystemConfig& c, const std::string& v) { c.spads.pixel_count = parse_int("pixel_count", v); });
  add("spads", "span_m",
      [](const SystemConfig& c) { return fmt_double(c.spads.span_m); },
      [](SystemConfig& c, const std::string& v) { c.spads.span_m = parse_double("span_m", v); });
  add("spads", "offsets_m",
      [](const SystemConfig& c) { return fmt_list(c.spads.offsets_m); },
      [](SystemConfig& c, const std::string& v) { c.spads.offsets_m = parse_list("offsets_m", v); });
  add("spads", "center_x_m",
      [](const SystemConfig& c) { return fmt_double(c.spads.center_x_m); },
      [](SystemConfig& c, const std::string& v) { c.spads.center_x_m = parse_double("center_x_m", v); });
  add("spads", "center_y_m",
      [](const SystemConfig& c) { return fmt_double(c.spads.center_y_m); },
      [](SystemConfig& c, const std::string& v) { c.spads.center_y_m = parse_double("center_y_m", v); });
  add("spads", "window_bounds_s",
      [](const SystemConfig& c) { return fmt_list(c.spads.window_bounds_s); },
      [](SystemConfig& c, const std::string& v) { c.spads.window_bounds_s = parse_list("window_bounds_s", v); });
  add("spads", "remap_pixels",
      [](const SystemConfig& c) { return fmt_list(c.spads.remap_pixels); },
      [](SystemConfig& c, const std::string& v) { c.spads.remap_pixels = parse_int_list("remap_pixels", v); });

  add("phasor", "virtual_wavelength_m",
      [](const SystemConfig& c) { return fmt_double(c.phasor.virtual_wavelength_m); },
      [](SystemConfig& c, const std::string& v) { c.phasor.virtual_wavelength_m = parse_double("virtual_wavelength_m", v); });
  add("phasor", "cycles_in_pulse",
      [](const SystemConfig& c) { return fmt_double(c.phasor.cycles_in_pulse); },
      [](SystemConfig& c, const std::string& v) { c.phasor.cycles_in_pulse = parse_double("cycles_in_pulse", v); });
  add("phasor", "spectral_cutoff",
      [](const SystemConfig& c) { return fmt_double(c.phasor.spectral_cutoff); },
      [](SystemConfig& c, const std::string& v) { c.phasor.spectral_cutoff = parse_double("spectral_cutoff", v); });
  add("phasor", "time_bin_s",
      [](const SystemConfig& c) { return fmt_double(c.phasor.time_bin_s); },
      [](SystemConfig& c, const std::string& v) { c.phasor.time_bin_s = parse_double("time_bin_s", v); });
  add("phasor", "histogram_span_s",
      [](const SystemConfig& c) { return fmt_double(c.phasor.histogram_span_s); },
      [](SystemConfig& c, const std::string& v) { c.phasor.histogram_span_s = parse_double("histogram_span_s", v); });

  add("volume", "x_extent_m",
      [](const SystemConfig& c) { return fmt_double(c.volume.x_extent_m); },
      [](SystemConfig& c, const std::string& v) { c.volume.x_extent_m = parse_double("x_extent_m", v); });
  add("volume", "y_extent_m",
      [](const SystemConfig& c) { return fmt_double(c.volume.y_extent_m); },
      [](SystemConfig& c, const std::string& v) { c.volume.y_extent_m = parse_double("y_extent_m", v); });
  add("volume", "rows",
      [](const SystemConfig& c) { return std::to_string(c.volume.rows); },
      [](SystemConfig& c, const std::string& v) { c.volume.rows = parse_int("rows", v); });
  add("volume", "cols",
      [](const SystemConfig& c) { return std::to_string(c.volume.cols); },
      [](SystemConfig& c, const std::string& v) { c.volume.cols = parse_int("cols", v); });
  add("volume", "z_min_m",
      [](const SystemConfig& c) { return fmt_double(c.volume.z_min_m); },
      [](SystemConfig& c, const std::string& v) { c.volume.z_min_m = parse_double("z_min_m", v); });
  add("volume", "z_max_m",
      [](const SystemConfig& c) { return fmt_double(c.volume.z_max_m); },
      [](SystemConfig& c, const std::string& v) { c.volume.z_max_m = parse_double("z_max_m", v); });
  add("volume", "z_step_m",
      [](const SystemConfig& c) { return fmt_double(c.volume.z_step_m); },
      [](SystemConfig& c, const std::string& v) { c.volume.z_step_m = parse_double("z_step_m", v); });

  add("noise", "ambient_rate_hz",
      [](const SystemConfig& c) { return fmt_double(c.noise.ambient_rate_hz); },
      [](SystemConfig& c, const std::string& v) { c.noise.ambient_rate_hz = parse_double("ambient_rate_hz", v); });
  add("noise", "dark_rate_hz",
      [](const SystemConfig& c) { return fmt_double(c.noise.dark_rate_hz); },
      [](SystemConfig& c, const std::string& v) { c.noise.dark_rate_hz = parse_double("dark_rate_hz", v); });
  add("noise", "jitter_fwhm_s",
      [](const SystemConfig& c) { return fmt_double(c.noise.jitter_fwhm_s); },
      [](SystemConfig& c, const std::string& v) { c.noise.jitter_fwhm_s = parse_double("jitter_fwhm_s", v); });
  add("noise", "quantum_efficiency",
      [](const SystemConfig& c) { return fmt_double(c.noise.quantum_efficiency); },
      [](SystemConfig& c, const std::string& v) { c.noise.quantum_efficiency = parse_double("quantum_efficiency", v); });
  add("noise", "gate_on_s",
      [](const SystemConfig& c) { return fmt_double(c.noise.gate_on_s); },
      [](SystemConfig& c, const std::string& v) { c.noise.gate_on_s = parse_double("gate_on_s", v); });
  add("noise", "gate_off_s",
      [](const SystemConfig& c) { return fmt_double(c.noise.gate_off_s); },
      [](SystemConfig& c, const std::string& v) { c.noise.gate_off_s = parse_double("gate_off_s", v); });

  add("averaging", "scale",
      [](const SystemConfig& c) { return fmt_double(c.averaging.scale); },
      [](SystemConfig& c, const std::string& v) { c.averaging.scale = parse_double("scale", v); });

  add("pipeline", "queue_capacity",
      [](const SystemConfig& c) { return std::to_string(c.pipeline.queue_capacity); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.queue_capacity = parse_int("queue_capacity", v); });
  add("pipeline", "binning_workers",
      [](const SystemConfig& c) { return std::to_string(c.pipeline.binning_workers); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.binning_workers = parse_int("binning_workers", v); });
  add("pipeline", "recon_workers",
      [](const SystemConfig& c) { return std::to_string(c.pipeline.recon_workers); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.recon_workers = parse_int("recon_workers", v); });
  add("pipeline", "drop_policy",
      [](const SystemConfig& c) {
        return std::string(c.pipeline.drop_policy == DropPolicy::kBlock ? "block" : "drop_oldest");
      },
      [](SystemConfig& c, const std::string& v) {
        if (v == "block") c.pipeline.drop_policy = DropPolicy::kBlock;
        else if (v == "drop_oldest") c.pipeline.drop_policy = DropPolicy::kDropOldest;
        else throw ConfigError("config: drop_policy must be block or drop_oldest, got '" + v + "'");
      });
  add("pipeline", "fdh_table_size",
      [](const SystemConfig& c) { return std::to_string(c.pipeline.fdh_table_size); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.fdh_table_size = parse_int("fdh_table_size", v); });
  add("pipeline", "kernel_budget_mb",
      [](const SystemConfig& c) { return fmt_double(c.pipeline.kernel_budget_mb); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.kernel_budget_mb = parse_double("kernel_budget_mb", v); });
  add("pipeline", "debug_parse_delay_ms",
      [](const SystemConfig& c) { return fmt_double(c.pipeline.debug_parse_delay_ms); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.debug_parse_delay_ms = parse_double("debug_parse_delay_ms", v); });
  add("pipeline", "debug_bin_delay_ms",
      [](const SystemConfig& c) { return fmt_double(c.pipeline.debug_bin_delay_ms); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.debug_bin_delay_ms = parse_double("debug_bin_delay_ms", v); });
  add("pipeline", "debug_recon_delay_ms",
      [](const SystemConfig& c) { return fmt_double(c.pipeline.debug_recon_delay_ms); },
      [](SystemConfig& c, const std::string& v) { c.pipeline.debug_recon_delay_ms = parse_double("debug_recon_delay_ms", v); });

  return b;
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError("config: " + msg);
}

}  // namespace

void SystemConfig::validate() {
  require(frame_rate_hz > 0, "system.frame_rate_hz must be > 0");

  require(relay.wall_width_m > 0 && relay.wall_height_m > 0,
          "relay wall dimensions must be > 0");
  require(std::abs(relay.laser_origin.z) > 0, "relay.laser_origin must be off the wall plane");
  require(std::abs(relay.detector_origin.z) > 0, "relay.detector_origin must be off the wall plane");

  require(scan.rows >= 1 && scan.cols >= 1, "scan.rows and scan.cols must be >= 1");
  require(scan.row_pitch_m > 0 && scan.col_pitch_m > 0, "scan pitches must be > 0");
  require((scan.rows - 1) * scan.row_pitch_m <= relay.wall_height_m + 1e-9,
          "scan pattern taller than wall");
  require((scan.cols - 1) * scan.col_pitch_m <= relay.wall_width_m + 1e-9,
          "scan pattern wider than wall");

  require(spads.pixel_count >= 1, "spads.pixel_count must be >= 1");
  require(spads.window_count() >= 1, "spads.window_bounds_s needs at least two entries");
  for (int w = 0; w < spads.window_count(); ++w) {
    require(spads.window_bounds_s[w] < spads.window_bounds_s[w + 1],
            "spads.window_bounds_s must be strictly increasing");
  }
  // channel field is 6 bits on the wire
  require(spads.channel_of(spads.pixel_count - 1) < 64, "too many pixels for 6-bit channel field");
  if (spads.offsets_m.empty()) {
    spads.offsets_m.resize(spads.pixel_count);
    for (int q = 0; q < spads.pixel_count; ++q) {
      spads.offsets_m[q] = spads.pixel_count == 1
                               ? 0.0
                               : (spads.pixel_count - 1 - q) * spads.span_m / (spads.pixel_count - 1);
    }
  }
  require(static_cast<int>(spads.offsets_m.size()) == spads.pixel_count,
          "spads.offsets_m size must equal pixel_count");
  for (double off : spads.offsets_m) {
    require(std::abs(off) < scan.col_pitch_m,
            "spad offset must stay below one column pitch (remapping fills one pitch)");
  }
  if (std::isnan(spads.center_x_m)) spads.center_x_m = relay.wall_width_m / 2;
  if (std::isnan(spads.center_y_m)) spads.center_y_m = relay.wall_height_m / 2;

  require(phasor.virtual_wavelength_m > 0, "phasor.virtual_wavelength_m must be > 0");
  require(phasor.cycles_in_pulse >= 1, "phasor.cycles_in_pulse must be >= 1");
  require(phasor.spectral_cutoff > 0 && phasor.spectral_cutoff <= 1,
          "phasor.spectral_cutoff must be in (0, 1]");
  require(phasor.time_bin_s > 0 && phasor.histogram_span_s > 0, "phasor times must be > 0");
  const double ratio = phasor.histogram_span_s / phasor.time_bin_s;
  require(std::abs(ratio - std::llround(ratio)) < 1e-6,
          "phasor.histogram_span_s must be an integer multiple of time_bin_s");
  require(phasor.span_ticks() <= 32768, "histogram span exceeds the 15-bit dtime field");

  require(volume.rows >= 1 && volume.cols >= 1, "volume lateral counts must be >= 1");
  require(volume.z_min_m > 0, "volume.z_min_m must be > 0");
  require(volume.z_max_m > volume.z_min_m, "volume.z_max_m must exceed z_min_m");
  require(volume.z_step_m > 0, "volume.z_step_m must be > 0");
  require(volume.x_extent_m > 0 && volume.y_extent_m > 0, "volume extents must be > 0");

  require(noise.ambient_rate_hz >= 0 && noise.dark_rate_hz >= 0, "noise rates must be >= 0");
  require(noise.jitter_fwhm_s >= 0, "noise.jitter_fwhm_s must be >= 0");
  require(noise.quantum_efficiency > 0 && noise.quantum_efficiency <= 1,
          "noise.quantum_efficiency must be in (0, 1]");
  require(noise.gate_off_s > noise.gate_on_s, "noise gate must satisfy t_off > t_on");

  require(averaging.scale > 0, "averaging.scale must be > 0");

  require(pipeline.queue_capacity >= 1, "pipeline.queue_capacity must be >= 1");
  require(pipeline.fdh_table_size >= 1024, "pipeline.fdh_table_size must be >= 1024");
  require(pipeline.kernel_budget_mb > 0, "pipeline.kernel_budget_mb must be > 0");

  require(exposure_per_point_s() > 0, "exposure per laser point must be > 0");
  require(pulses_per_frame() >= scan.point_count(),
          "fewer than one laser pulse per scan point; lower frame_rate_hz");
}

SystemConfig default_config() {
  SystemConfig cfg;
  cfg.validate();
  return cfg;
}

SystemConfig parse_config(std::istream& in) {
  static const auto binds = bindings();
  SystemConfig cfg;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    bool found = false;
    for (const auto& b : binds) {
      if (b.section == section && b.key == key) {
        b.set(cfg, value);
        found = true;
        break;
      }
    }
    if (!found) {
      throw ConfigError("config line " + std::to_string(lineno) + ": unknown key [" + section +
                        "] " + key);
    }
  }
  cfg.validate();
  return cfg;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse_config(in);
}

std::string serialize_config(const SystemConfig& cfg) {
  static const auto binds = bindings();
  std::string out;
  std::string section;
  for (const auto& b : binds) {
    if (b.section != section) {
      if (!out.empty()) out += "\n";
      out += "[" + b.section + "]\n";
      section = b.section;
    }
    out += b.key + " = " + b.get(cfg) + "\n";
  }
  return out;
}

void save_config(const SystemConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write " + path);
  out << serialize_config(cfg);
}

void apply_override(SystemConfig& cfg, const std::string& spec) {
  size_t eq = spec.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + spec + "' must look like section.key=value");
  }
  std::string path = trim(spec.substr(0, eq));
  std::string value = trim(spec.substr(eq + 1));
  size_t dot = path.find('.');
  if (dot == std::string::npos) {
    throw ConfigError("override '" + spec + "' must look like section.key=value");
  }
  std::string section = path.substr(0, dot);
  std::string key = path.substr(dot + 1);
  static const auto binds = bindings();
  for (const auto& b : binds) {
    if (b.section == section && b.key == key) {
      b.set(cfg, value);
      return;
    }
  }
  throw ConfigError("override references unknown key [" + section + "] " + key);
}

uint64_t stream_config_hash(const SystemConfig& cfg) {
  static const auto binds = bindings();
  std::string text;
  for (const auto& b : binds) {
    if (b.section == "system" || b.section == "relay" || b.section == "scan" ||
        b.section == "spads" || b.section == "phasor") {
      text += b.section + "." + b.key + "=" + b.get(cfg) + "\n";
    }
  }
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nlrt
