#include "mutag/transport.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <tuple>

namespace mutag {

std::vector<Component> ordered_components(const GeometryModel& geometry)
{
  std::vector<Component> out;
  for (int i = 0; i < int(geometry.disks.size()); ++i) {
    const auto& d = geometry.disks[i];
    out.push_back({ComponentKind::disk, i, d.z_top(), d.z_bottom(), &d.material, d.name});
  }
  const std::array layers{&geometry.top_layer, &geometry.bottom_layer};
  for (int i = 0; i < 2; ++i) {
    const auto* l = layers[i];
    if (l->n_x <= 0 || l->n_y <= 0 || l->thickness <= 0.0) continue;
    out.push_back({ComponentKind::layer, i, l->z_plane, l->z_plane - l->thickness, &l->material,
                   i == 0 ? "top layer" : "bottom layer"});
  }
  for (int i = 0; i < int(geometry.rods.size()); ++i) {
    const auto& r = geometry.rods[i];
    out.push_back({ComponentKind::rod, i, r.z_top(), r.z_bottom(), &r.material,
                   "rod " + std::to_string(i)});
  }

  // Sort key: top z, except that a rod sinks below every disk it overlaps.
  const auto key = [&](const Component& c) {
    double z = c.z_top;
    if (c.kind == ComponentKind::rod) {
      for (const auto& d : geometry.disks) {
        if (d.z_bottom() < c.z_top && d.z_top() > c.z_bottom) z = std::min(z, d.z_bottom());
      }
    }
    return std::tuple(-z, int(c.kind), c.index);
  };
  std::stable_sort(out.begin(), out.end(),
                   [&](const Component& a, const Component& b) { return key(a) < key(b); });
  return out;
}

std::optional<Chord<double>> component_chord(const Ray<double>& ray, const GeometryModel& geometry,
                                             const Component& component)
{
  switch (component.kind) {
    case ComponentKind::disk: return disk_chord(ray, geometry.disks[component.index]);
    case ComponentKind::rod: return rod_chord(ray, geometry.rods[component.index]);
    case ComponentKind::layer:
      return layer_chord(ray, component.index == 0 ? geometry.top_layer : geometry.bottom_layer);
  }
  return std::nullopt;
}

GenerationRegion GenerationRegion::for_geometry(const GeometryModel& geometry, double margin)
{
  GenerationRegion region;
  region.chip_half_x = region.chip_half_y = geometry.chip.half_extent();
  region.margin = margin;
  region.chip_plane_z = geometry.chip.z_plane;
  region.plane_z = geometry.generation_plane_z;
  return region;
}

MuonState generate_event(EventRng& rng, const GenerationRegion& region,
                         const MomentumSpectrum& spectrum, AngleModel angle_model)
{
  const double hx = region.chip_half_x + region.margin;
  const double hy = region.chip_half_y + region.margin;
  const double ax = (2.0 * rng.uniform() - 1.0) * hx;
  const double ay = (2.0 * rng.uniform() - 1.0) * hy;
  const auto [zenith, azimuth] = sample_zenith_azimuth(rng, angle_model);
  const double momentum = spectrum.sample(rng);

  const double sin_t = std::sin(zenith);
  const Vec3 direction(sin_t * std::cos(azimuth), sin_t * std::sin(azimuth), -std::cos(zenith));
  const Vec3 aim(ax, ay, region.chip_plane_z);
  const double s = (region.plane_z - region.chip_plane_z) / -direction.z();

  MuonState state{aim - s * direction, direction, momentum};
  state.position.z() = region.plane_z;
  return state;
}

Propagator::Propagator(const GeometryModel& geometry, PropagationOptions options)
    : geometry_(&geometry), options_(options), components_(ordered_components(geometry))
{
}

Trajectory Propagator::propagate(const MuonState& initial, EventRng& rng) const
{
  Trajectory traj;
  traj.generated = initial;

  struct Plane {
    double z;
    std::optional<Vec3>* slot;
  };
  std::array<Plane, 3> planes{{{geometry_->top_layer.z_plane, &traj.top_crossing},
                               {geometry_->bottom_layer.z_plane, &traj.bottom_crossing},
                               {geometry_->chip.z_plane, &traj.chip_crossing}}};
  std::stable_sort(planes.begin(), planes.end(),
                   [](const Plane& a, const Plane& b) { return a.z > b.z; });
  std::size_t next_plane = 0;

  const auto n = components_.size();
  std::vector<char> done(n, 0);
  MuonState s = initial;

  const auto record_planes_before = [&](const Ray<double>& ray, double t_limit) {
    while (next_plane < planes.size()) {
      const double t = (planes[next_plane].z - ray.origin.z()) / ray.direction.z();
      if (!(t < t_limit)) break;
      Vec3 p = ray.at(t);
      p.z() = planes[next_plane].z;
      *planes[next_plane].slot = p;
      ++next_plane;
    }
  };

  for (std::size_t step = 0; step <= n; ++step) {
    const Ray<double> ray(s.position, s.direction);
    const double lowest_plane = planes.back().z;

    std::size_t best = n;
    Chord<double> best_chord{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto& c = components_[i];
      if (c.z_bottom > s.position.z() + kSurfaceEpsilon || c.z_top < lowest_plane - kMinChord) {
        done[i] = 1;  // unreachable for a downward muon, or below everything of interest
        continue;
      }
      auto chord = component_chord(ray, *geometry_, c);
      if (chord && chord->t_in < best_chord.t_in) {
        best = i;
        best_chord = *chord;
      }
    }

    if (best == n) {
      record_planes_before(ray, std::numeric_limits<double>::infinity());
      break;
    }
    record_planes_before(ray, best_chord.t_out - kSurfaceEpsilon);
    if (next_plane == planes.size()) break;

    const auto& comp = components_[best];
    const double path = best_chord.length();
    const double x_over_x0 = path / comp.material->radiation_length;
    traj.traversals.push_back({int(best), path, x_over_x0, ray.at(best_chord.t_in)});
    done[best] = 1;

    s.position = ray.at(best_chord.t_out);
    if (options_.scattering && x_over_x0 >= 1e-6) {
      const double theta0 = highland_theta0(s.momentum, x_over_x0);
      s = apply_scatter(s, sample_scatter(rng, theta0, path));
      if (!(s.direction.z() < -kSurfaceEpsilon)) {
        traj.aborted = true;
        break;
      }
    }
  }
  return traj;
}

}  // namespace mutag
