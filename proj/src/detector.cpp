#include "mutag/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mutag/transport.hpp"

namespace mutag {

std::string_view to_string(Classification c)
{
  switch (c) {
    case Classification::hit_1x1: return "hit_1x1";
    case Classification::hit_3x3: return "hit_3x3";
    case Classification::hit_5x5: return "hit_5x5";
    case Classification::on_chip: return "on_chip";
    case Classification::off_chip_prediction: return "off_chip_prediction";
    case Classification::layer_miss: return "layer_miss";
    case Classification::chip_miss: return "chip_miss";
  }
  return "unknown";
}

namespace {

// Half-open bin lookup; std::nullopt outside [0, n).
std::optional<int> bin(double coordinate, double origin, double width, int n)
{
  const double f = std::floor((coordinate - origin) / width);
  if (!(f >= 0.0) || f >= double(n)) return std::nullopt;
  return int(f);
}

}  // namespace

Vec3 pixel_center(const PixelLayer& layer, PixelIndex index)
{
  return {layer.x_origin() + (index.i + 0.5) * layer.pitch_x(),
          layer.y_origin() + (index.j + 0.5) * layer.pitch_y(), layer.z_plane};
}

std::optional<PixelHit> digitize(const Vec3& point, const PixelLayer& layer, int layer_id)
{
  auto i = bin(point.x(), layer.x_origin(), layer.pitch_x(), layer.n_x);
  auto j = bin(point.y(), layer.y_origin(), layer.pitch_y(), layer.n_y);
  if (!i || !j) return std::nullopt;
  const PixelIndex index{*i, *j};
  return PixelHit{layer_id, index, pixel_center(layer, index)};
}

Vec3 reconstruct(const PixelHit& top, const PixelHit& bottom, const QubitChip& chip)
{
  const Vec3& a = top.center;
  const Vec3& b = bottom.center;
  const double f = (chip.z_plane - a.z()) / (b.z() - a.z());
  Vec3 p = a + f * (b - a);
  p.z() = chip.z_plane;
  return p;
}

std::optional<QubitCell> qubit_cell(const Vec3& point, const QubitChip& chip)
{
  const double origin = -chip.half_extent();
  auto col = bin(point.x(), origin, chip.cell_size, chip.cells);
  auto row = bin(point.y(), origin, chip.cell_size, chip.cells);
  if (!col || !row) return std::nullopt;
  return QubitCell{*col, *row};
}

Classification classify(const EventRecord& r)
{
  if (!r.true_chip_hit || !r.true_cell) return Classification::chip_miss;
  if (!r.top_hit || !r.bottom_hit) return Classification::layer_miss;
  if (!r.predicted_cell) return Classification::off_chip_prediction;
  const int distance = std::max(std::abs(r.predicted_cell->col - r.true_cell->col),
                                std::abs(r.predicted_cell->row - r.true_cell->row));
  if (distance == 0) return Classification::hit_1x1;
  if (distance <= 1) return Classification::hit_3x3;
  if (distance <= 2) return Classification::hit_5x5;
  return Classification::on_chip;
}

EventRecord make_record(const Trajectory& trajectory, const GeometryModel& geometry)
{
  EventRecord r;
  if (trajectory.chip_crossing) {
    r.true_cell = qubit_cell(*trajectory.chip_crossing, geometry.chip);
    if (r.true_cell) r.true_chip_hit = trajectory.chip_crossing;
  }
  if (trajectory.top_crossing) r.top_hit = digitize(*trajectory.top_crossing, geometry.top_layer, 0);
  if (trajectory.bottom_crossing) {
    r.bottom_hit = digitize(*trajectory.bottom_crossing, geometry.bottom_layer, 1);
  }
  if (r.top_hit && r.bottom_hit) {
    r.predicted = reconstruct(*r.top_hit, *r.bottom_hit, geometry.chip);
    r.predicted_cell = qubit_cell(*r.predicted, geometry.chip);
  }
  r.classification = classify(r);
  return r;
}

double adapted_pitch(double top_pitch_um, double z_top, double z_bottom, double z_chip)
{
  return top_pitch_um * std::abs(z_bottom - z_chip) / std::abs(z_top - z_chip);
}

double quantization_bound(double pitch_top_mm, double pitch_bottom_mm, double z_top, double z_bottom,
                          double z_chip)
{
  const double arm = std::abs(z_top - z_bottom);
  return 0.5 * pitch_top_mm * (1.0 + std::abs(z_bottom - z_chip) / arm) +
         0.5 * pitch_bottom_mm * (1.0 + std::abs(z_top - z_chip) / arm);
}

}  // namespace mutag
