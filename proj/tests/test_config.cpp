#include <doctest.h>

#include <algorithm>

#include "mutag/config.hpp"
#include "mutag/presets.hpp"

using namespace mutag;

namespace {

const char* kRow1 = R"(# table 2, first row
[run]
seed = 7
events = 1000
chip_plane_z_mm = 8.0

[detector t2r1]
placement = below_cold_plate
dz_top_mm = 242
dz_bottom_mm = 92
pitch_top_um = 500
pitch_bottom_um = 220
pixels_top = 390x400
pixels_bottom = 390x400
)";

std::string replace(std::string text, const std::string& from, const std::string& to)
{
  text.replace(text.find(from), from.size(), to);
  return text;
}

std::vector<std::string> violations_of(const std::string& text)
{
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& violations, const std::string& needle)
{
  return std::any_of(violations.begin(), violations.end(),
                     [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("parse a table row")
{
  const RunConfig c = parse_config(kRow1);
  CHECK(c.seed == 7);
  CHECK(c.n_events == 1000);
  CHECK(c.angle_model == AngleModel::solid_angle);
  CHECK(c.scattering);
  REQUIRE(c.detectors.size() == 1);
  const DetectorConfig& d = c.detectors.front();
  CHECK(d.id == "t2r1");
  CHECK(d.placement == Placement::below_cold_plate);
  CHECK(d.pitch_top_um == 500);
  CHECK(d.pitch_bottom_um == 220);
  CHECK(d.pixels_top == PixelCount{390, 400});
  CHECK(d.pixels_bottom == PixelCount{390, 400});
  CHECK(d.dz_top_mm == 242);
  CHECK(d.dz_bottom_mm == 92);

  const GeometryModel g = build_geometry(c, d);
  CHECK(g.top_layer.z_plane == 250.0);
  CHECK(g.bottom_layer.z_plane == 100.0);
  CHECK(g.chip.z_plane == 8.0);
  CHECK(g.top_layer.active_width() == doctest::Approx(195.0));
  CHECK(g.bottom_layer.active_width() == doctest::Approx(85.8));
}

TEST_CASE("defaults")
{
  const RunConfig c;
  CHECK(c.seed == 1);
  CHECK(c.margin_mm == 100.0);
  CHECK(c.chip_plane_z_mm == 8.1);
  CHECK(c.format == ReportFormat::csv);
  CHECK(envelope_pixels(500) == PixelCount{390, 400});
  CHECK(envelope_pixels(600) == PixelCount{325, 333});
  CHECK(envelope_pixels(1000) == PixelCount{195, 200});
  CHECK(envelope_pixels(150) == PixelCount{1300, 1333});
}

TEST_CASE("validation errors name the offending field")
{
  auto v = violations_of(replace(kRow1, "pitch_top_um = 500", "pitch_top_um = 0"));
  CHECK(mentions(v, "pitch_top_um must be > 0"));

  v = violations_of(replace(kRow1, "dz_bottom_mm = 92", "dz_bottom_mm = 242"));
  CHECK(mentions(v, "coplanar"));

  v = violations_of(replace(kRow1, "dz_bottom_mm = 92", "dz_bottom_mm = 300"));
  CHECK(mentions(v, "dz_bottom_mm must be below dz_top_mm"));

  v = violations_of(replace(kRow1, "dz_top_mm = 242", "dz_top_mm = 419"));
  CHECK(mentions(v, "placement below_cold_plate"));

  v = violations_of(replace(kRow1, "seed = 7", "seed = 7\ncolour = blue"));
  CHECK(mentions(v, "line 4: unknown key 'colour' in [run]"));

  v = violations_of(replace(kRow1, "pixels_top = 390x400", "pixels_top = 400x400"));
  CHECK(mentions(v, "top layer 205 x 200 mm"));

  v = violations_of(replace(kRow1, "pixels_bottom = 390x400\n", ""));
  CHECK(mentions(v, "missing required key 'pixels_bottom'"));

  v = violations_of(replace(kRow1, "events = 1000", "events = 0\nevents = 2\nmargin_mm = -1"));
  CHECK(mentions(v, "events: must be >= 1"));
  CHECK(mentions(v, "duplicate key 'events'"));
  CHECK(mentions(v, "margin_mm: must be >= 0"));

  v = violations_of(replace(kRow1, "[detector t2r1]", "[detector]"));
  CHECK(mentions(v, "needs an id"));

  v = violations_of(replace(kRow1, "pitch_bottom_um = 220", "pitch_bottom_um = wide"));
  CHECK(mentions(v, "pitch_bottom_um: expected a number, got 'wide'"));

  // every problem is reported, not only the first
  v = violations_of(replace(replace(kRow1, "pitch_top_um = 500", "pitch_top_um = 0"),
                            "dz_bottom_mm = 92", "dz_bottom_mm = 242"));
  CHECK(v.size() >= 2);
  CHECK_THROWS_AS(parse_config("[run]\nseed = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), std::runtime_error);
}

TEST_CASE("wide bottom layers are allowed below the mixing flange")
{
  std::string text = replace(kRow1, "dz_bottom_mm = 92", "dz_bottom_mm = -308");
  text = replace(text, "pixels_bottom = 390x400", "pixels_bottom = 551x564");
  text = replace(text, "pitch_bottom_um = 220", "pitch_bottom_um = 500");
  CHECK(violations_of(text).empty());

  text = replace(kRow1, "pixels_bottom = 390x400", "pixels_bottom = 551x564");
  text = replace(text, "pitch_bottom_um = 220", "pitch_bottom_um = 500");
  CHECK(mentions(violations_of(text), "bottom layer"));
  text = replace(text, "pixels_bottom = 551x564", "pixels_bottom = 551x564\ncheck_envelope = false");
  CHECK(violations_of(text).empty());
}

TEST_CASE("parse and serialize round trip")
{
  for (const auto& preset : presets()) {
    const RunConfig once = parse_config(preset.config_text);
    const std::string text = serialize_config(once);
    const RunConfig twice = parse_config(text);
    CHECK(once == twice);
    CHECK(serialize_config(twice) == text);
  }
  RunConfig odd = parse_config(kRow1);
  odd.margin_mm = 0.1 + 0.2;
  odd.momentum_table = "tables/flat.txt";
  odd.output = "out.json";
  odd.format = ReportFormat::json;
  odd.scattering = false;
  odd.angle_model = AngleModel::literal;
  CHECK(parse_config(serialize_config(odd)) == odd);
}

TEST_CASE("sweep expansion")
{
  RunConfig c = parse_config(kRow1);
  CHECK(expand_sweep(c) == c.detectors);

  c.sweep = SweepAxes{{}, {500, 600, 1000}, {PitchChoice{PitchChoice::Kind::table}}, {92, 142}};
  const auto rows = expand_sweep(c);
  REQUIRE(rows.size() == 6);
  const double expected[][4] = {{500, 220, 92, 390},  {500, 320, 142, 390},
                                {600, 260, 92, 325},  {600, 385, 142, 325},
                                {1000, 440, 92, 195}, {1000, 645, 142, 195}};
  for (std::size_t k = 0; k < 6; ++k) {
    CHECK(rows[k].pitch_top_um == expected[k][0]);
    CHECK(rows[k].pitch_bottom_um == expected[k][1]);
    CHECK(rows[k].dz_bottom_mm == expected[k][2]);
    CHECK(rows[k].pixels_top.nx == expected[k][3]);
    CHECK(rows[k].pixels_bottom == rows[k].pixels_top);
  }
  CHECK(rows[0].id == "t2r1_pt500_dzb92");

  c.sweep = SweepAxes{{Placement::below_cold_plate, Placement::below_still_flange},
                      {500, 1000},
                      {PitchChoice{PitchChoice::Kind::same}, PitchChoice{PitchChoice::Kind::projected},
                       PitchChoice{PitchChoice::Kind::value, 300}},
                      {92, -108, -308}};
  const auto grid = expand_sweep(c);
  CHECK(grid.size() == 2 * 2 * 3 * 3);
  CHECK(grid.front().dz_top_mm == 242);
  CHECK(grid.back().dz_top_mm == 419);
  CHECK(grid[1].pitch_bottom_um == 500);
  CHECK(grid[4].pitch_bottom_um == 5 * std::round(adapted_pitch(500, 242, -108, 0) / 5));

  c.sweep = SweepAxes{{}, {500}, {}, {92}};
  const auto single = expand_sweep(c);
  REQUIRE(single.size() == 1);
  CHECK(single.front().pitch_bottom_um == 220);

  c.sweep = SweepAxes{{}, {700}, {PitchChoice{PitchChoice::Kind::table}}, {92}};
  CHECK_THROWS_AS(expand_sweep(c), ConfigError);
}

TEST_CASE("presets")
{
  CHECK(find_preset("table2_row1") != nullptr);
  CHECK(find_preset("fig3_bottom") != nullptr);
  CHECK(find_preset("table6_row1") == nullptr);
  CHECK_THROWS_AS(preset_config("table6_row1"), ConfigError);
  CHECK(reference_rows().size() == 9 + 21 + 7 + 16);
  CHECK(presets().size() == reference_rows().size() + 4);

  for (const auto& row : reference_rows()) {
    const RunConfig c = preset_config(row.name);
    REQUIRE(c.detectors.size() == 1);
    const auto& d = c.detectors.front();
    CHECK(d.pitch_top_um == row.pitch_top_um);
    CHECK(d.pitch_bottom_um == row.pitch_bottom_um);
    CHECK(d.dz_top_mm == row.dz_top_mm);
    CHECK(d.dz_bottom_mm == row.dz_bottom_mm);
    CHECK(c.chip_plane_z_mm == kPresetChipPlaneZ);
    CHECK(row.eff_1x1 <= row.eff_3x3);
    CHECK(row.eff_3x3 <= row.eff_any);
  }

  const auto* r = find_reference_row("table3_row1");
  CHECK(r->pixels_bottom == PixelCount{551, 564});
  CHECK(r->delta95_mm == 1.05);

  const RunConfig fig = preset_config("fig2_top");
  REQUIRE(fig.sweep);
  CHECK(expand_sweep(fig).size() == 8);
}
