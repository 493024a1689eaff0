#pragma once

#include <vector>

#include "nlrt/config.hpp"

namespace nlrt {

// Dense virtual laser aperture with a single sensing point, plus the
// (laser column, pixel) -> virtual column remap table and the calibration
// distances that shift recorded times to the relay wall.
struct VirtualGrid {
  int rows = 0;
  int cols = 0;
  double pitch_m = 0.0;
  double origin_x_m = 0.0;  // position of column 0 / scan column 0
  double origin_y_m = 0.0;  // position of row 0
  Vec3 sensing_point;       // x_c1, the rightmost SPAD pixel spot

  // remap[laser_col * Q + pixel] = virtual column, or -1 when the pair is
  // not part of the aperture fill.
  std::vector<int> remap;
  int pixel_count = 0;
  std::vector<Vec3> pixel_positions;  // sensing spot per pixel on the wall

  int virtual_col(int laser_col, int pixel) const {
    return remap[laser_col * pixel_count + pixel];
  }
  Vec3 laser_position(int row, int col, const ScanPattern& scan) const {
    return {origin_x_m + col * scan.col_pitch_m, origin_y_m + row * scan.row_pitch_m, 0.0};
  }
  Vec3 virtual_position(int row, int vcol) const {
    return {origin_x_m + vcol * pitch_m, origin_y_m + row * pitch_m, 0.0};
  }
};

VirtualGrid derive_virtual_grid(const ScanPattern& scan, const SpadLayout& spads,
                                const RelayGeometry& relay);

// Per-(scan point, pixel) time shift to the relay wall:
// (d_laser(x_p) + d_spad(x_c_q)) / c. Analytic from geometry; entries can be
// overridden from a measured-distance table file.
struct CalibrationTable {
  int point_count = 0;
  int pixel_count = 0;
  std::vector<double> shift_s;  // [point * Q + pixel]

  double shift(int point, int pixel) const { return shift_s[point * pixel_count + pixel]; }
};

CalibrationTable derive_calibration(const SystemConfig& cfg, const VirtualGrid& grid);
CalibrationTable zero_calibration(const SystemConfig& cfg);
CalibrationTable load_calibration(const std::string& path, const SystemConfig& cfg);
void save_calibration(const CalibrationTable& table, const std::string& path);

// Raster order helpers (row-major; serpentine reverses odd rows).
inline int point_row(int point, const ScanPattern& scan) { return point / scan.cols; }
inline int point_col(int point, const ScanPattern& scan) {
  int c = point % scan.cols;
  if (scan.serpentine && (point / scan.cols) % 2 == 1) c = scan.cols - 1 - c;
  return c;
}

}  // namespace nlrt
