// Efficiency and resolution bookkeeping.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mutag/detector.hpp"

namespace mutag {

/// Mergeable per-configuration counters. Residuals are kept for events whose
/// prediction lands on the chip.
struct EfficiencyTally {
  std::uint64_t n_generated = 0;
  std::uint64_t n_aborted = 0;
  std::uint64_t n_chip_hits = 0;
  std::uint64_t n_1x1 = 0;
  std::uint64_t n_3x3 = 0;
  std::uint64_t n_5x5 = 0;
  std::uint64_t n_on_chip = 0;
  std::uint64_t n_layer_miss = 0;
  std::uint64_t n_off_chip = 0;
  std::vector<double> residuals_x;
  std::vector<double> residuals_y;

  void accumulate(const EventRecord& record);
  void merge(const EfficiencyTally& other);
};

/// Configuration identity carried into the output rows.
struct ReportMeta {
  std::string config_id;
  double pitch_top_um = 0;
  double pitch_bottom_um = 0;
  int nx_top = 0, ny_top = 0, nx_bottom = 0, ny_bottom = 0;
  double dz_top_mm = 0;
  double dz_bottom_mm = 0;
  std::uint64_t seed = 0;
  std::string angle_model;
  bool scattering = true;
  double margin_mm = 0;
  double chip_plane_z_mm = 0;
};

struct Efficiency {
  double value;  // fraction
  double error;  // binomial standard error
};

struct EfficiencyReport {
  ReportMeta meta;
  std::uint64_t n_generated = 0;
  std::uint64_t n_aborted = 0;
  std::uint64_t n_chip_hits = 0;
  std::uint64_t n_1x1 = 0, n_3x3 = 0, n_5x5 = 0, n_on_chip = 0;
  std::uint64_t n_layer_miss = 0, n_off_chip = 0;
  std::optional<Efficiency> eff_1x1, eff_3x3, eff_5x5, eff_any;
  std::optional<double> delta95_x, delta95_y;
  std::uint64_t n_residuals = 0;
};

inline constexpr const char* kResidualPopulation = "on_chip_predictions";

/// Nearest-rank 95th percentile: sorted[ceil(0.95 n) - 1]. Empty for no data.
std::optional<double> quantile95(std::span<const double> values);

Efficiency binomial_efficiency(std::uint64_t pass, std::uint64_t total);

EfficiencyReport finalize(const EfficiencyTally& tally, ReportMeta meta);

enum class ReportFormat { csv, json };

ReportFormat report_format_from_string(std::string_view name);

std::string csv_header();
std::string csv_row(const EfficiencyReport& report);

/// CSV: header plus one row per report. JSON: one object, or an array when
/// more than one report is given.
std::string write_reports(std::span<const EfficiencyReport> reports, ReportFormat format);

inline std::string write_report(const EfficiencyReport& report, ReportFormat format)
{
  return write_reports(std::span(&report, 1), format);
}

/// Writes bytes to `path`, throwing std::runtime_error naming the path.
void save_output(const std::filesystem::path& path, const std::string& bytes);

}  // namespace mutag
