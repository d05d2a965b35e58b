// Embedded configurations for the published detector layouts.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mutag/config.hpp"

namespace mutag {

/// One published layout with its reported efficiencies (percent) and 95%
/// resolution (mm).
struct ReferenceRow {
  std::string name;  // e.g. table2_row1
  Placement placement;
  double pitch_top_um;
  double pitch_bottom_um;
  PixelCount pixels_top;
  PixelCount pixels_bottom;
  double dz_top_mm;
  double dz_bottom_mm;
  double delta95_mm;
  double eff_1x1;
  double eff_3x3;
  double eff_any;
};

const std::vector<ReferenceRow>& reference_rows();
const ReferenceRow* find_reference_row(std::string_view name);

struct Preset {
  std::string name;
  std::string description;
  std::string config_text;
  bool is_sweep = false;
};

const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);
RunConfig preset_config(std::string_view name);

/// Chip plane used by the presets so that dz values land exactly on the
/// disk surfaces (cold plate bottom at 250 mm = 242 mm above the chip).
inline constexpr double kPresetChipPlaneZ = 8.0;

/// Tabulated adapted bottom pitch for this top pitch and bottom position.
std::optional<double> published_adapted_pitch(Placement placement, double pitch_top_um,
                                              double dz_bottom_mm);

}  // namespace mutag
