#include "mutag/geometry.hpp"

namespace mutag {

namespace {

constexpr double kCarrierThickness = 0.1;
constexpr double kQubitChipThickness = 1e-4;

std::vector<Disk> refrigerator_disks()
{
  using materials::copper;
  using materials::iron;
  return {
      {"RT flange", 710, 30, 963, iron},
      {"50K flange", 535, 10, 822, copper},
      {"4K flange", 492, 10, 607, copper},
      {"Still flange", 432, 8, 431, copper},
      {"Cold plate", 385, 8, 254, copper},
      {"Mixing flange", 360, 8, 4, copper},
  };
}

std::vector<Rod> refrigerator_rods()
{
  using materials::copper;
  std::vector<Rod> rods;
  const auto pair = [&](double d, double l, double r, double z, double phi_a, double phi_b) {
    rods.push_back({d, l, r, z, phi_a, copper});
    rods.push_back({d, l, r, z, phi_b, copper});
  };
  pair(42, 336, 155, 780, 45, 135);
  pair(25, 336, 134, 780, -76.5, -103.5);
  pair(42, 594, 153, 305, 45, 135);
  pair(25, 594, 135, 305, -76.5, -103.5);
  return rods;
}

}  // namespace

const Disk* GeometryModel::find_disk(std::string_view name) const
{
  for (const auto& disk : disks) {
    if (disk.name == name) return &disk;
  }
  return nullptr;
}

double default_chip_plane_z()
{
  // Mixing flange top surface plus the carrier chip.
  return 4.0 + 0.5 * 8.0 + kCarrierThickness;
}

GeometryModel default_geometry(double chip_plane_z)
{
  GeometryModel g;
  g.disks = refrigerator_disks();
  g.rods = refrigerator_rods();

  const double mixing_top = g.disks.back().z_top();
  g.chip_boxes = {
      {"carrier chip", 20, 26, kCarrierThickness, mixing_top, materials::silicon},
      {"qubit chip", 12, 12, kQubitChipThickness, mixing_top + kCarrierThickness,
       materials::silicon},
  };
  g.chip.z_plane = chip_plane_z;

  g.top_layer.z_plane = chip_plane_z + 242;
  g.top_layer.pitch_x_um = g.top_layer.pitch_y_um = 500;
  g.top_layer.n_x = 390;
  g.top_layer.n_y = 400;

  g.bottom_layer = g.top_layer;
  g.bottom_layer.z_plane = chip_plane_z + 92;
  g.bottom_layer.pitch_x_um = g.bottom_layer.pitch_y_um = 220;

  g.generation_plane_z = g.disks.front().z_top() + 1.0;
  return g;
}

}  // namespace mutag
