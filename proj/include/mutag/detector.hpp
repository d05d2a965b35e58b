// Pixel digitisation, two-point track reconstruction and qubit-cell
// classification of the predicted chip hit.
#pragma once

#include <optional>
#include <string_view>

#include "mutag/geometry.hpp"
#include "mutag/pixel_layer.hpp"

namespace mutag {

struct Trajectory;

struct PixelIndex {
  int i;
  int j;
  bool operator==(const PixelIndex&) const = default;
};

struct PixelHit {
  int layer;  // 0 = top, 1 = bottom
  PixelIndex index;
  Vec3 center;
};

struct QubitCell {
  int col;  // along x
  int row;  // along y
  bool operator==(const QubitCell&) const = default;
};

/// Ordered from best to worst; the first four nest.
enum class Classification {
  hit_1x1,
  hit_3x3,
  hit_5x5,
  on_chip,
  off_chip_prediction,
  layer_miss,
  chip_miss,
};

std::string_view to_string(Classification c);

struct EventRecord {
  std::optional<Vec3> true_chip_hit;
  std::optional<QubitCell> true_cell;
  std::optional<PixelHit> top_hit;
  std::optional<PixelHit> bottom_hit;
  std::optional<Vec3> predicted;
  std::optional<QubitCell> predicted_cell;
  Classification classification = Classification::chip_miss;
};

Vec3 pixel_center(const PixelLayer& layer, PixelIndex index);

/// Half-open cells [x_i, x_i+1) x [y_j, y_j+1); miss outside the active area.
std::optional<PixelHit> digitize(const Vec3& point, const PixelLayer& layer, int layer_id = 0);

/// Straight line through both pixel centres evaluated at the chip plane.
Vec3 reconstruct(const PixelHit& top, const PixelHit& bottom, const QubitChip& chip);

std::optional<QubitCell> qubit_cell(const Vec3& point, const QubitChip& chip);

Classification classify(const EventRecord& record);

/// Digitise, reconstruct and classify one propagated muon.
EventRecord make_record(const Trajectory& trajectory, const GeometryModel& geometry);

/// Bottom-layer pitch that matches the top layer projected through the chip
/// plane onto the bottom layer.
double adapted_pitch(double top_pitch_um, double z_top, double z_bottom, double z_chip);

/// Worst-case |x_pred - x_true| from pixel quantisation alone, for one axis.
double quantization_bound(double pitch_top_mm, double pitch_bottom_mm, double z_top, double z_bottom,
                          double z_chip);

}  // namespace mutag
