#include "mutag/analysis.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace mutag {

void EfficiencyTally::accumulate(const EventRecord& record)
{
  if (!record.true_chip_hit) return;
  ++n_chip_hits;
  switch (record.classification) {
    case Classification::hit_1x1: ++n_1x1; [[fallthrough]];
    case Classification::hit_3x3: ++n_3x3; [[fallthrough]];
    case Classification::hit_5x5: ++n_5x5; [[fallthrough]];
    case Classification::on_chip:
      ++n_on_chip;
      residuals_x.push_back(std::abs(record.predicted->x() - record.true_chip_hit->x()));
      residuals_y.push_back(std::abs(record.predicted->y() - record.true_chip_hit->y()));
      break;
    case Classification::off_chip_prediction: ++n_off_chip; break;
    case Classification::layer_miss: ++n_layer_miss; break;
    case Classification::chip_miss: break;
  }
}

void EfficiencyTally::merge(const EfficiencyTally& other)
{
  n_generated += other.n_generated;
  n_aborted += other.n_aborted;
  n_chip_hits += other.n_chip_hits;
  n_1x1 += other.n_1x1;
  n_3x3 += other.n_3x3;
  n_5x5 += other.n_5x5;
  n_on_chip += other.n_on_chip;
  n_layer_miss += other.n_layer_miss;
  n_off_chip += other.n_off_chip;
  residuals_x.insert(residuals_x.end(), other.residuals_x.begin(), other.residuals_x.end());
  residuals_y.insert(residuals_y.end(), other.residuals_y.begin(), other.residuals_y.end());
}

std::optional<double> quantile95(std::span<const double> values)
{
  if (values.empty()) return std::nullopt;
  std::vector<double> v(values.begin(), values.end());
  const auto n = v.size();
  // ceil(0.95 n) in integer arithmetic
  const std::size_t rank = (95 * n + 99) / 100;
  auto nth = v.begin() + (rank - 1);
  std::nth_element(v.begin(), nth, v.end());
  return *nth;
}

Efficiency binomial_efficiency(std::uint64_t pass, std::uint64_t total)
{
  const double eff = double(pass) / double(total);
  return {eff, std::sqrt(eff * (1.0 - eff) / double(total))};
}

EfficiencyReport finalize(const EfficiencyTally& tally, ReportMeta meta)
{
  EfficiencyReport r;
  r.meta = std::move(meta);
  r.n_generated = tally.n_generated;
  r.n_aborted = tally.n_aborted;
  r.n_chip_hits = tally.n_chip_hits;
  r.n_1x1 = tally.n_1x1;
  r.n_3x3 = tally.n_3x3;
  r.n_5x5 = tally.n_5x5;
  r.n_on_chip = tally.n_on_chip;
  r.n_layer_miss = tally.n_layer_miss;
  r.n_off_chip = tally.n_off_chip;
  if (tally.n_chip_hits > 0) {
    r.eff_1x1 = binomial_efficiency(tally.n_1x1, tally.n_chip_hits);
    r.eff_3x3 = binomial_efficiency(tally.n_3x3, tally.n_chip_hits);
    r.eff_5x5 = binomial_efficiency(tally.n_5x5, tally.n_chip_hits);
    r.eff_any = binomial_efficiency(tally.n_on_chip, tally.n_chip_hits);
  }
  r.delta95_x = quantile95(tally.residuals_x);
  r.delta95_y = quantile95(tally.residuals_y);
  r.n_residuals = tally.residuals_x.size();
  return r;
}

ReportFormat report_format_from_string(std::string_view name)
{
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw std::invalid_argument(fmt::format("unknown report format '{}'", name));
}

namespace {

std::string pct(const std::optional<Efficiency>& e, bool error)
{
  if (!e) return "";
  return fmt::format("{:.4f}", 100.0 * (error ? e->error : e->value));
}

std::string mm(const std::optional<double>& v) { return v ? fmt::format("{:.6f}", *v) : ""; }

nlohmann::ordered_json to_json(const EfficiencyReport& r)
{
  using nlohmann::ordered_json;
  const auto opt = [](const std::optional<Efficiency>& e, bool error) -> ordered_json {
    if (!e) return nullptr;
    return 100.0 * (error ? e->error : e->value);
  };
  const auto optd = [](const std::optional<double>& v) -> ordered_json {
    if (!v) return nullptr;
    return *v;
  };
  const auto& m = r.meta;
  ordered_json j;
  j["config_id"] = m.config_id;
  j["pitch_top_um"] = m.pitch_top_um;
  j["pitch_bottom_um"] = m.pitch_bottom_um;
  j["nx_top"] = m.nx_top;
  j["ny_top"] = m.ny_top;
  j["nx_bottom"] = m.nx_bottom;
  j["ny_bottom"] = m.ny_bottom;
  j["dz_top_mm"] = m.dz_top_mm;
  j["dz_bottom_mm"] = m.dz_bottom_mm;
  j["n_generated"] = r.n_generated;
  j["n_chip_hits"] = r.n_chip_hits;
  j["eff_1x1_pct"] = opt(r.eff_1x1, false);
  j["eff_3x3_pct"] = opt(r.eff_3x3, false);
  j["eff_5x5_pct"] = opt(r.eff_5x5, false);
  j["eff_any_pct"] = opt(r.eff_any, false);
  j["err_1x1_pct"] = opt(r.eff_1x1, true);
  j["err_3x3_pct"] = opt(r.eff_3x3, true);
  j["err_5x5_pct"] = opt(r.eff_5x5, true);
  j["err_any_pct"] = opt(r.eff_any, true);
  j["delta95_x_mm"] = optd(r.delta95_x);
  j["delta95_y_mm"] = optd(r.delta95_y);
  j["seed"] = m.seed;
  j["counts"] = {{"n_1x1", r.n_1x1},           {"n_3x3", r.n_3x3},
                 {"n_5x5", r.n_5x5},           {"n_on_chip", r.n_on_chip},
                 {"n_off_chip", r.n_off_chip}, {"n_layer_miss", r.n_layer_miss},
                 {"n_aborted", r.n_aborted}};
  j["run"] = {{"angle_model", m.angle_model},
              {"scattering", m.scattering},
              {"margin_mm", m.margin_mm},
              {"chip_plane_z_mm", m.chip_plane_z_mm},
              {"residual_population", kResidualPopulation},
              {"n_residuals", r.n_residuals}};
  return j;
}

}  // namespace

std::string csv_header()
{
  return "config_id,pitch_top_um,pitch_bottom_um,nx_top,ny_top,nx_bottom,ny_bottom,dz_top_mm,"
         "dz_bottom_mm,n_generated,n_chip_hits,eff_1x1_pct,eff_3x3_pct,eff_5x5_pct,eff_any_pct,"
         "err_1x1_pct,err_3x3_pct,err_5x5_pct,err_any_pct,delta95_x_mm,delta95_y_mm,seed";
}

std::string csv_row(const EfficiencyReport& r)
{
  const auto& m = r.meta;
  return fmt::format("{},{:g},{:g},{},{},{},{},{:g},{:g},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                     m.config_id, m.pitch_top_um, m.pitch_bottom_um, m.nx_top, m.ny_top,
                     m.nx_bottom, m.ny_bottom, m.dz_top_mm, m.dz_bottom_mm, r.n_generated,
                     r.n_chip_hits, pct(r.eff_1x1, false), pct(r.eff_3x3, false),
                     pct(r.eff_5x5, false), pct(r.eff_any, false), pct(r.eff_1x1, true),
                     pct(r.eff_3x3, true), pct(r.eff_5x5, true), pct(r.eff_any, true),
                     mm(r.delta95_x), mm(r.delta95_y), m.seed);
}

std::string write_reports(std::span<const EfficiencyReport> reports, ReportFormat format)
{
  if (format == ReportFormat::csv) {
    std::string out = csv_header() + "\n";
    for (const auto& r : reports) out += csv_row(r) + "\n";
    return out;
  }
  if (reports.size() == 1) return to_json(reports.front()).dump(2) + "\n";
  auto array = nlohmann::ordered_json::array();
  for (const auto& r : reports) array.push_back(to_json(r));
  return array.dump(2) + "\n";
}

void save_output(const std::filesystem::path& path, const std::string& bytes)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error(
        fmt::format("cannot open '{}' for writing: {}", path.string(), std::strerror(errno)));
  }
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw std::runtime_error(fmt::format("failed writing '{}'", path.string()));
}

}  // namespace mutag
