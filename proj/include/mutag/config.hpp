// Run configuration: schema, parsing, validation and sweep expansion.
//
// Grammar (line oriented, '#' starts a comment):
//
//   [run]                      run-wide settings, at most once
//   key = value
//
//   [detector <id>]            one detector configuration; repeatable
//   key = value
//
//   [sweep]                    optional axes expanded over the first detector
//   key = v1, v2, ...
//
// Keys are listed in config.cpp (kRunKeys, kDetectorKeys, kSweepKeys) and in
// the README.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mutag/analysis.hpp"
#include "mutag/geometry.hpp"
#include "mutag/physics.hpp"

namespace mutag {

/// Every violation found while parsing or validating, one per entry.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

enum class Placement { below_cold_plate, below_still_flange };

std::string_view to_string(Placement placement);
std::optional<Placement> placement_from_string(std::string_view name);
/// Name of the disk the top layer hangs from.
std::string_view placement_disk(Placement placement);

struct PixelCount {
  int nx = 0;
  int ny = 0;
  bool operator==(const PixelCount&) const = default;
};

/// Pixel counts filling the 195 x 200 mm envelope at this pitch.
PixelCount envelope_pixels(double pitch_um);

inline constexpr double kEnvelopeWidth = 200.0;  // mm, x and y
inline constexpr double kDeadMarginX = 2.5;      // mm per side

struct DetectorConfig {
  std::string id;
  Placement placement = Placement::below_cold_plate;
  double dz_top_mm = 0;     // signed, relative to the chip plane
  double dz_bottom_mm = 0;  // negative below the chip
  double pitch_top_um = 0;
  double pitch_bottom_um = 0;
  PixelCount pixels_top;
  PixelCount pixels_bottom;
  bool check_envelope = true;

  bool operator==(const DetectorConfig&) const = default;
};

struct PitchChoice {
  enum class Kind { value, same, table, projected };
  Kind kind = Kind::value;
  double value = 0;
  bool operator==(const PitchChoice&) const = default;
};

struct SweepAxes {
  std::vector<Placement> placement;
  std::vector<double> pitch_top_um;
  std::vector<PitchChoice> pitch_bottom;
  std::vector<double> dz_bottom_mm;
  bool operator==(const SweepAxes&) const = default;
};

struct RunConfig {
  std::uint64_t seed = 1;
  std::uint64_t n_events = 32'000'000;
  AngleModel angle_model = AngleModel::solid_angle;
  double margin_mm = 100.0;
  double chip_plane_z_mm = 8.1;
  std::optional<std::string> momentum_table;
  bool scattering = true;
  std::vector<DetectorConfig> detectors;
  std::optional<SweepAxes> sweep;
  std::optional<std::string> output;
  ReportFormat format = ReportFormat::csv;

  bool operator==(const RunConfig&) const = default;
};

/// Parses and validates; throws ConfigError listing every problem.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

std::string serialize_config(const RunConfig& config);

/// Semantic checks on a detector; returns violations (empty when valid).
std::vector<std::string> validate_detector(const DetectorConfig& detector, double chip_plane_z_mm);

/// Dilution refrigerator plus the configured detector pair.
GeometryModel build_geometry(const RunConfig& run, const DetectorConfig& detector);

/// Cartesian product of the sweep axes over the first detector. Axis order,
/// outermost first: placement, pitch_top, pitch_bottom, dz_bottom.
/// Point ids append a tag for every axis with more than one value.
std::vector<DetectorConfig> expand_sweep(const RunConfig& config);

}  // namespace mutag
