#include "mutag/presets.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace mutag {

namespace {

constexpr PixelCount k500{390, 400};
constexpr PixelCount k600{325, 333};
constexpr PixelCount k1000{195, 200};

PixelCount counts(double pitch_um)
{
  if (pitch_um == 500) return k500;
  if (pitch_um == 600) return k600;
  return k1000;
}

struct Row {
  double pt, pb;
  double dz_bottom;
  double delta95;
  double e1, e3, eany;
  PixelCount bottom_override{};
};

std::vector<ReferenceRow> build_rows()
{
  std::vector<ReferenceRow> rows;
  const auto table = [&](int number, Placement placement, double dz_top, std::vector<Row> data) {
    int i = 0;
    for (const auto& r : data) {
      const PixelCount top = counts(r.pt);
      const PixelCount bottom = r.bottom_override.nx > 0 ? r.bottom_override : top;
      rows.push_back({fmt::format("table{}_row{}", number, ++i), placement, r.pt, r.pb, top, bottom,
                      dz_top, r.dz_bottom, r.delta95, r.e1, r.e3, r.eany});
    }
  };
  const auto cold = Placement::below_cold_plate;
  const auto still = Placement::below_still_flange;

  table(2, cold, 242,
        {{500, 220, 92, 0.23, 64, 77, 77},   {500, 500, 92, 0.42, 52, 76, 76},
         {600, 260, 92, 0.28, 61, 76, 76},   {1000, 440, 92, 0.48, 51, 77, 77},
         {500, 320, 142, 0.53, 49, 76, 76},  {500, 500, 142, 0.70, 40, 76, 76},
         {600, 385, 142, 0.64, 43, 76, 76},  {600, 600, 142, 0.85, 33, 76, 76},
         {1000, 645, 142, 1.10, 26, 75, 76}});

  table(3, cold, 242,
        {{500, 500, -308, 1.05, 41, 74, 77, {551, 564}},
         {500, 705, -308, 1.05, 41, 74, 77},
         {600, 600, -308, 1.05, 41, 74, 77, {460, 470}},
         {600, 850, -308, 1.06, 40, 74, 77},
         {1000, 1000, -308, 1.08, 38, 74, 77, {276, 282}},
         {1000, 1415, -308, 1.10, 36, 74, 77},
         {500, 500, -208, 0.86, 45, 75, 77},
         {600, 600, -208, 0.87, 45, 75, 77},
         {1000, 1000, -208, 0.91, 41, 75, 77},
         {500, 270, -108, 0.56, 54, 76, 76},
         {500, 500, -108, 0.58, 52, 76, 77},
         {600, 320, -108, 0.57, 54, 76, 76},
         {600, 600, -108, 0.59, 51, 76, 76},
         {1000, 535, -108, 0.60, 51, 76, 76},
         {1000, 1000, -108, 0.66, 46, 76, 77},
         {500, 160, -58, 0.34, 62, 77, 77},
         {500, 500, -58, 0.38, 58, 76, 76},
         {600, 190, -58, 0.35, 62, 77, 77},
         {600, 600, -58, 0.40, 56, 76, 76},
         {1000, 315, -58, 0.37, 60, 77, 77},
         {1000, 1000, -58, 0.51, 48, 76, 76}});

  table(4, still, 419,
        {{500, 140, 92, 0.38, 41, 52, 52},
         {500, 500, 92, 0.47, 35, 52, 52},
         {600, 165, 92, 0.39, 40, 52, 52},
         {1000, 280, 92, 0.42, 38, 52, 52},
         {500, 200, 142, 0.69, 33, 52, 52},
         {600, 240, 142, 0.70, 33, 52, 52},
         {1000, 400, 142, 0.76, 30, 52, 52}});

  table(5, still, 419,
        {{500, 500, -308, 1.44, 23, 48, 52},  {600, 600, -308, 1.44, 23, 48, 52},
         {1000, 840, -308, 1.46, 22, 48, 52}, {500, 500, -208, 1.13, 27, 50, 52},
         {600, 600, -208, 1.14, 26, 50, 52},  {1000, 590, -208, 1.14, 26, 50, 52},
         {500, 170, -108, 0.68, 35, 51, 52},  {500, 500, -108, 0.70, 33, 51, 52},
         {600, 200, -108, 0.68, 34, 51, 52},  {600, 600, -108, 0.71, 32, 51, 52},
         {1000, 335, -108, 0.69, 34, 51, 52}, {500, 500, -58, 0.44, 38, 52, 52},
         {600, 125, -58, 0.39, 41, 52, 52},   {600, 600, -58, 0.46, 36, 52, 52},
         {1000, 210, -58, 0.40, 40, 52, 52},  {1000, 1000, -58, 0.57, 31, 52, 52}});
  return rows;
}

std::string run_section()
{
  return fmt::format(
      "[run]\nseed = 1\nevents = 32000000\nangle_model = solid_angle\nmargin_mm = 100\n"
      "chip_plane_z_mm = {}\nscattering = on\nformat = csv\n",
      kPresetChipPlaneZ);
}

std::string detector_section(const ReferenceRow& r)
{
  return fmt::format(
      "\n[detector {}]\nplacement = {}\ndz_top_mm = {}\ndz_bottom_mm = {}\npitch_top_um = {}\n"
      "pitch_bottom_um = {}\npixels_top = {}x{}\npixels_bottom = {}x{}\n",
      r.name, to_string(r.placement), r.dz_top_mm, r.dz_bottom_mm, r.pitch_top_um,
      r.pitch_bottom_um, r.pixels_top.nx, r.pixels_top.ny, r.pixels_bottom.nx,
      r.pixels_bottom.ny);
}

Preset figure_preset(const std::string& name, Placement placement, double dz_bottom,
                     const std::string& description)
{
  const double dz_top = placement == Placement::below_cold_plate ? 242 : 419;
  const ReferenceRow base{name,     placement, 500, 500, k500, k500, dz_top,
                          dz_bottom, 0,         0,   0,   0};
  std::string text = run_section() + detector_section(base);
  text += fmt::format(
      "\n[sweep]\npitch_top_um = 150, 500, 600, 1000\npitch_bottom_um = same, projected\n"
      "dz_bottom_mm = {}\n",
      dz_bottom);
  return {name, description, text, true};
}

std::vector<Preset> build_presets()
{
  std::vector<Preset> out;
  for (const auto& r : reference_rows()) {
    out.push_back({r.name,
                   fmt::format("{}, {:g}/{:g} um, {}x{}/{}x{}, dz {:g}/{:g} mm",
                               to_string(r.placement), r.pitch_top_um, r.pitch_bottom_um,
                               r.pixels_top.nx, r.pixels_top.ny, r.pixels_bottom.nx,
                               r.pixels_bottom.ny, r.dz_top_mm, r.dz_bottom_mm),
                   run_section() + detector_section(r), false});
  }
  out.push_back(figure_preset("fig2_top", Placement::below_cold_plate, 92,
                              "sweep: top below cold plate, bottom 150 mm below cold plate"));
  out.push_back(figure_preset("fig2_bottom", Placement::below_cold_plate, -308,
                              "sweep: top below cold plate, bottom 300 mm below mixing flange"));
  out.push_back(figure_preset("fig3_top", Placement::below_still_flange, 92,
                              "sweep: top below still flange, bottom 150 mm below cold plate"));
  out.push_back(figure_preset("fig3_bottom", Placement::below_still_flange, -308,
                              "sweep: top below still flange, bottom 300 mm below mixing flange"));
  return out;
}

}  // namespace

const std::vector<ReferenceRow>& reference_rows()
{
  static const std::vector<ReferenceRow> rows = build_rows();
  return rows;
}

const ReferenceRow* find_reference_row(std::string_view name)
{
  for (const auto& r : reference_rows()) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const std::vector<Preset>& presets()
{
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset* find_preset(std::string_view name)
{
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

RunConfig preset_config(std::string_view name)
{
  const Preset* p = find_preset(name);
  if (!p) throw ConfigError({fmt::format("unknown preset '{}' (see list-configs)", name)});
  return parse_config(p->config_text);
}

std::optional<double> published_adapted_pitch(Placement placement, double pitch_top_um,
                                              double dz_bottom_mm)
{
  for (const auto& r : reference_rows()) {
    if (r.placement == placement && r.pitch_top_um == pitch_top_um &&
        r.dz_bottom_mm == dz_bottom_mm && r.pitch_bottom_um != r.pitch_top_um &&
        r.pixels_bottom == r.pixels_top) {
      return r.pitch_bottom_um;
    }
  }
  return std::nullopt;
}

}  // namespace mutag
