#pragma once

#include "mutag/material.hpp"

namespace mutag {

/// Rectangular grid of square-ish pixels centred on the z axis.
struct PixelLayer {
  double z_plane = 0.0;   // mm, top face of the sensor
  double pitch_x_um = 0.0;
  double pitch_y_um = 0.0;
  int n_x = 0;
  int n_y = 0;
  double dead_margin_x = 2.5;  // mm per side, outside the active area
  double thickness = 0.2;      // mm
  Material material = materials::silicon;

  double pitch_x() const { return pitch_x_um * 1e-3; }
  double pitch_y() const { return pitch_y_um * 1e-3; }
  double active_width() const { return n_x * pitch_x(); }
  double active_height() const { return n_y * pitch_y(); }
  double x_origin() const { return -0.5 * active_width(); }
  double y_origin() const { return -0.5 * active_height(); }
};

/// 12x12 grid of 1 mm qubit cells centred on the axis.
struct QubitChip {
  double z_plane = 0.0;
  double cell_size = 1.0;  // mm
  int cells = 12;

  double half_extent() const { return 0.5 * cell_size * cells; }
};

}  // namespace mutag
