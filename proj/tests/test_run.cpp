#include <doctest.h>

#include <cmath>

#include "mutag/presets.hpp"
#include "mutag/run.hpp"

using namespace mutag;

namespace {

RunConfig small(const char* preset, std::uint64_t events)
{
  RunConfig c = preset_config(preset);
  c.n_events = events;
  return c;
}

}  // namespace

TEST_CASE("single event")
{
  const auto reports = run(small("table2_row1", 1));
  REQUIRE(reports.size() == 1);
  CHECK(reports.front().n_generated == 1);
  CHECK(reports.front().meta.config_id == "table2_row1");
}

TEST_CASE("reports do not depend on the worker count")
{
  const RunConfig c = small("table4_row1", 60000);
  const std::string one = write_reports(run(c, RunOptions{1}), ReportFormat::csv);
  const std::string three = write_reports(run(c, RunOptions{3}), ReportFormat::csv);
  const std::string eight = write_reports(run(c, RunOptions{8}), ReportFormat::json);
  CHECK(one == three);
  CHECK(eight == write_reports(run(c, RunOptions{2}), ReportFormat::json));
}

TEST_CASE("seeds give statistically compatible results")
{
  RunConfig a = small("table2_row2", 400000);
  RunConfig b = a;
  b.seed = 99;
  const auto ra = run(a).front();
  const auto rb = run(b).front();
  REQUIRE(ra.n_chip_hits > 500);
  CHECK(ra.n_chip_hits != rb.n_chip_hits);
  for (auto member : {&EfficiencyReport::eff_1x1, &EfficiencyReport::eff_any}) {
    const Efficiency x = *(ra.*member);
    const Efficiency y = *(rb.*member);
    CHECK(std::abs(x.value - y.value) < 3 * std::hypot(x.error, y.error));
  }
}

TEST_CASE("acceptance mode disables scattering and uses the chip as aim region")
{
  const RunConfig c = small("table2_row1", 5000);
  const auto r = acceptance_mode(c).front();
  CHECK_FALSE(r.meta.scattering);
  CHECK(r.meta.margin_mm == 0.0);
  CHECK(r.n_chip_hits == r.n_generated);
  CHECK(r.n_1x1 <= r.n_3x3);
  CHECK(r.n_3x3 <= r.n_5x5);
  CHECK(r.n_5x5 <= r.n_on_chip);
}

TEST_CASE("layers covering everything accept every chip hit")
{
  RunConfig c = small("table2_row1", 20000);
  auto& d = c.detectors.front();
  // 10 um pixels spanning +-10 m
  d.pitch_top_um = d.pitch_bottom_um = 10;
  d.pixels_top = d.pixels_bottom = PixelCount{2'000'000, 2'000'000};
  d.check_envelope = false;
  const auto r = acceptance_mode(c).front();
  CHECK(r.n_layer_miss == 0);
  // only predictions within the quantisation bound of the chip edge can fall off
  const double bound = quantization_bound(0.01, 0.01, 250, 100, 8);
  CHECK(r.eff_any->value >= 1.0 - 4 * 12 * bound / 144);
  CHECK(r.eff_any->value > 0.998);
}

TEST_CASE("single-point sweep equals a run")
{
  RunConfig c = small("table2_row1", 20000);
  c.sweep = SweepAxes{{Placement::below_cold_plate}, {500}, {PitchChoice{PitchChoice::Kind::value, 220}},
                      {92}};
  CHECK(write_reports(sweep(c), ReportFormat::csv) == write_reports(run(c), ReportFormat::csv));
}

TEST_CASE("sweep row count is the product of the axis lengths")
{
  RunConfig c = preset_config("fig3_bottom");
  c.n_events = 200;
  CHECK(sweep(c).size() == 4 * 2);
}
