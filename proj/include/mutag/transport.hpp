// Muon generation towards the chip and propagation through the stack.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mutag/geometry.hpp"
#include "mutag/physics.hpp"

namespace mutag {

enum class ComponentKind { disk, rod, layer };

/// A scattering solid in traversal order. `index` points into the geometry's
/// disks, rods, or {0: top, 1: bottom} layers.
struct Component {
  ComponentKind kind;
  int index;
  double z_top;
  double z_bottom;
  const Material* material;
  std::string label;
};

/// Disks, rods and layer slabs in descending z. A rod whose z range overlaps
/// a disk is placed after that disk.
std::vector<Component> ordered_components(const GeometryModel& geometry);

std::optional<Chord<double>> component_chord(const Ray<double>& ray, const GeometryModel& geometry,
                                             const Component& component);

struct TraversalRecord {
  int component;  // position in ordered_components()
  double path;    // mm
  double x_over_x0;
  Vec3 entry;
};

struct Trajectory {
  MuonState generated;
  std::vector<TraversalRecord> traversals;
  std::optional<Vec3> top_crossing;
  std::optional<Vec3> bottom_crossing;
  std::optional<Vec3> chip_crossing;
  bool aborted = false;  // direction turned horizontal or upward
};

/// Aim rectangle on the chip plane: the chip extent inflated by `margin` mm
/// on every side.
struct GenerationRegion {
  double chip_half_x = 6.0;
  double chip_half_y = 6.0;
  double margin = 100.0;
  double chip_plane_z = 8.1;
  double plane_z = 979.0;

  static GenerationRegion for_geometry(const GeometryModel& geometry, double margin);
};

MuonState generate_event(EventRng& rng, const GenerationRegion& region,
                         const MomentumSpectrum& spectrum, AngleModel angle_model);

struct PropagationOptions {
  bool scattering = true;
};

/// Walks the components front to back along the current flight line. Each
/// traversed solid is crossed on a straight chord; the scattering draw is
/// applied at its exit. Plane crossings inside a chord use the incoming line.
class Propagator {
 public:
  Propagator(const GeometryModel& geometry, PropagationOptions options = {});

  Trajectory propagate(const MuonState& state, EventRng& rng) const;

  const std::vector<Component>& components() const { return components_; }
  const GeometryModel& geometry() const { return *geometry_; }

 private:
  const GeometryModel* geometry_;
  PropagationOptions options_;
  std::vector<Component> components_;
};

inline Trajectory propagate(const MuonState& state, const GeometryModel& geometry, EventRng& rng,
                            PropagationOptions options = {})
{
  return Propagator(geometry, options).propagate(state, rng);
}

}  // namespace mutag
