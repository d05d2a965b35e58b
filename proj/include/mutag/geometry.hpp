// Cryostat and processor geometry: vertical finite cylinders (disks, rods),
// detector planes and ray/solid chord queries.
#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mutag/material.hpp"
#include "mutag/pixel_layer.hpp"

namespace mutag {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

using Vec3 = Vector3<double>;

/// Absolute tolerance for ray/surface comparisons, mm.
inline constexpr double kSurfaceEpsilon = 1e-9;
/// Chords shorter than this (mm) carry no material and are reported as zero.
inline constexpr double kMinChord = 1e-3;

class DegenerateRayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Scalar>
struct Ray {
  Vector3<Scalar> origin;
  Vector3<Scalar> direction;  // unit length

  Ray() = default;
  Ray(Vector3<Scalar> o, Vector3<Scalar> d) : origin(std::move(o)), direction(d.normalized()) {}

  Vector3<Scalar> at(Scalar t) const { return origin + t * direction; }
};

struct Disk {
  std::string name;
  double diameter;   // mm
  double thickness;  // mm
  double z_center;   // mm
  Material material;

  double z_top() const { return z_center + 0.5 * thickness; }
  double z_bottom() const { return z_center - 0.5 * thickness; }
  bool operator==(const Disk&) const = default;
};

/// Vertical support rod at (r cos phi, r sin phi).
struct Rod {
  double diameter;         // mm
  double length;           // mm
  double radial_distance;  // mm
  double z_center;         // mm
  double azimuth_deg;
  Material material;

  double z_top() const { return z_center + 0.5 * length; }
  double z_bottom() const { return z_center - 0.5 * length; }
  double axis_x() const { return radial_distance * std::cos(azimuth_deg * M_PI / 180.0); }
  double axis_y() const { return radial_distance * std::sin(azimuth_deg * M_PI / 180.0); }
  bool operator==(const Rod&) const = default;
};

/// Passive processor boxes (carrier, qubit chip). Target planes only.
struct ChipBox {
  std::string name;
  double size_x, size_y, thickness;  // mm
  double z_bottom;                   // mm
  Material material;
};

struct GeometryModel {
  std::vector<Disk> disks;  // descending z
  std::vector<Rod> rods;
  PixelLayer top_layer;
  PixelLayer bottom_layer;
  QubitChip chip;
  std::vector<ChipBox> chip_boxes;
  double generation_plane_z = 0.0;

  const Disk* find_disk(std::string_view name) const;
};

/// Parametric interval [t_in, t_out] of a ray inside a solid, t >= 0.
template <typename Scalar>
struct Chord {
  Scalar t_in;
  Scalar t_out;
  Scalar length() const { return t_out - t_in; }
};

/// Chord of the half-line `ray` through the finite vertical cylinder with axis
/// at (cx, cy), spanning [z_lo, z_hi]. Empty on a miss or a sub-micron graze.
template <typename Scalar>
std::optional<Chord<Scalar>> vertical_cylinder_chord(const Ray<Scalar>& ray, Scalar cx, Scalar cy,
                                                     Scalar radius, Scalar z_lo, Scalar z_hi)
{
  using std::abs;
  using std::sqrt;
  const Scalar eps = Scalar(kSurfaceEpsilon);
  Scalar t_lo = 0;
  Scalar t_hi = std::numeric_limits<Scalar>::infinity();

  const auto& o = ray.origin;
  const auto& d = ray.direction;

  if (abs(d.z()) < eps) {
    if (o.z() < z_lo - eps || o.z() > z_hi + eps) return std::nullopt;
  } else {
    Scalar t1 = (z_lo - o.z()) / d.z();
    Scalar t2 = (z_hi - o.z()) / d.z();
    if (t1 > t2) std::swap(t1, t2);
    t_lo = std::max(t_lo, t1);
    t_hi = std::min(t_hi, t2);
  }

  const Scalar ox = o.x() - cx;
  const Scalar oy = o.y() - cy;
  const Scalar a = d.x() * d.x() + d.y() * d.y();
  const Scalar b = ox * d.x() + oy * d.y();
  const Scalar c = ox * ox + oy * oy - radius * radius;
  if (a < eps * eps) {
    if (c > eps) return std::nullopt;
  } else {
    const Scalar disc = b * b - a * c;
    if (disc <= 0) return std::nullopt;
    const Scalar s = sqrt(disc);
    t_lo = std::max(t_lo, (-b - s) / a);
    t_hi = std::min(t_hi, (-b + s) / a);
  }

  if (!(t_hi - t_lo >= Scalar(kMinChord))) return std::nullopt;
  return Chord<Scalar>{t_lo, t_hi};
}

template <typename Scalar>
std::optional<Chord<Scalar>> disk_chord(const Ray<Scalar>& ray, const Disk& disk)
{
  return vertical_cylinder_chord<Scalar>(ray, Scalar(0), Scalar(0), Scalar(0.5 * disk.diameter),
                                         Scalar(disk.z_bottom()), Scalar(disk.z_top()));
}

template <typename Scalar>
std::optional<Chord<Scalar>> rod_chord(const Ray<Scalar>& ray, const Rod& rod)
{
  return vertical_cylinder_chord<Scalar>(ray, Scalar(rod.axis_x()), Scalar(rod.axis_y()),
                                         Scalar(0.5 * rod.diameter), Scalar(rod.z_bottom()),
                                         Scalar(rod.z_top()));
}

/// Chord through an axis-aligned box.
template <typename Scalar>
std::optional<Chord<Scalar>> box_chord(const Ray<Scalar>& ray, const Vector3<Scalar>& lo,
                                       const Vector3<Scalar>& hi)
{
  const Scalar eps = Scalar(kSurfaceEpsilon);
  Scalar t_lo = 0;
  Scalar t_hi = std::numeric_limits<Scalar>::infinity();
  for (int k = 0; k < 3; ++k) {
    const Scalar o = ray.origin[k];
    const Scalar d = ray.direction[k];
    if (std::abs(d) < eps) {
      if (o < lo[k] - eps || o > hi[k] + eps) return std::nullopt;
      continue;
    }
    Scalar t1 = (lo[k] - o) / d;
    Scalar t2 = (hi[k] - o) / d;
    if (t1 > t2) std::swap(t1, t2);
    t_lo = std::max(t_lo, t1);
    t_hi = std::min(t_hi, t2);
  }
  if (!(t_hi - t_lo >= Scalar(kMinChord))) return std::nullopt;
  return Chord<Scalar>{t_lo, t_hi};
}

/// Sensor slab of a pixel layer: active area plus x dead margins, hanging
/// below its z plane by the sensor thickness.
template <typename Scalar>
std::optional<Chord<Scalar>> layer_chord(const Ray<Scalar>& ray, const PixelLayer& layer)
{
  const Scalar hx = Scalar(0.5 * layer.active_width() + layer.dead_margin_x);
  const Scalar hy = Scalar(0.5 * layer.active_height());
  const Vector3<Scalar> lo(-hx, -hy, Scalar(layer.z_plane - layer.thickness));
  const Vector3<Scalar> hi(hx, hy, Scalar(layer.z_plane));
  return box_chord(ray, lo, hi);
}

/// Path length (mm) of the ray inside the disk; 0 on a miss.
template <typename Scalar>
Scalar path_through_disk(const Ray<Scalar>& ray, const Disk& disk)
{
  auto chord = disk_chord(ray, disk);
  return chord ? chord->length() : Scalar(0);
}

template <typename Scalar>
Scalar path_through_rod(const Ray<Scalar>& ray, const Rod& rod)
{
  auto chord = rod_chord(ray, rod);
  return chord ? chord->length() : Scalar(0);
}

/// Ray parameter at which the line crosses z = z_plane. Throws on a
/// horizontal ray.
template <typename Scalar>
Scalar plane_parameter(const Ray<Scalar>& ray, Scalar z_plane)
{
  if (std::abs(ray.direction.z()) < Scalar(kSurfaceEpsilon)) {
    throw DegenerateRayError("ray is parallel to the plane z = " + std::to_string(double(z_plane)));
  }
  return (z_plane - ray.origin.z()) / ray.direction.z();
}

template <typename Scalar>
Vector3<Scalar> plane_crossing(const Ray<Scalar>& ray, Scalar z_plane)
{
  Vector3<Scalar> p = ray.at(plane_parameter(ray, z_plane));
  p.z() = z_plane;
  return p;
}

/// Dilution refrigerator stack, processor boxes and the default
/// cold-plate/cold-plate detector pair (500 um pixels, 242/92 mm above the chip).
GeometryModel default_geometry(double chip_plane_z = 8.1);

/// Top surface of the qubit chip for the default stack.
double default_chip_plane_z();

}  // namespace mutag
