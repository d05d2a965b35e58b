// mutag: muon tagging efficiency simulator.
//
//   mutag run        --preset table2_row1 --events 2000000 --workers 4
//   mutag sweep      --preset fig2_top --out fig2_top.csv
//   mutag acceptance --config my.cfg --format json
//   mutag list-configs
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mutag/config.hpp"
#include "mutag/presets.hpp"
#include "mutag/run.hpp"

namespace {

struct Options {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> events;
  unsigned workers = 1;
  std::string out;
  std::string format;
  bool no_scatter = false;
};

void add_run_flags(CLI::App* cmd, Options& o)
{
  auto* config = cmd->add_option("--config", o.config_path, "configuration file");
  auto* preset = cmd->add_option("--preset", o.preset, "embedded configuration (see list-configs)");
  config->excludes(preset);
  cmd->add_option("--seed", o.seed, "override the run seed");
  cmd->add_option("--events", o.events, "override the number of generated events")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", o.workers, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_flag("--no-scatter", o.no_scatter, "disable multiple scattering");
}

mutag::RunConfig resolve_config(const Options& o)
{
  mutag::RunConfig config;
  if (!o.config_path.empty()) {
    config = mutag::load_config(o.config_path);
  } else if (!o.preset.empty()) {
    config = mutag::preset_config(o.preset);
  } else {
    throw mutag::ConfigError({"one of --config or --preset is required"});
  }
  if (o.seed) config.seed = *o.seed;
  if (o.events) config.n_events = *o.events;
  if (o.no_scatter) config.scattering = false;
  if (!o.out.empty()) config.output = o.out;
  if (!o.format.empty()) config.format = mutag::report_format_from_string(o.format);
  return config;
}

void emit(const mutag::RunConfig& config, const std::vector<mutag::EfficiencyReport>& reports)
{
  const std::string bytes = mutag::write_reports(reports, config.format);
  if (config.output) {
    mutag::save_output(*config.output, bytes);
  } else {
    std::fwrite(bytes.data(), 1, bytes.size(), stdout);
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Monte Carlo estimate of cosmic-muon tagging efficiency for a two-layer pixel "
               "detector around a qubit chip"};
  app.require_subcommand(1);

  Options options;
  auto* run_cmd = app.add_subcommand("run", "simulate every [detector] configuration");
  auto* sweep_cmd = app.add_subcommand("sweep", "simulate the Cartesian product of [sweep] axes");
  auto* acceptance_cmd =
      app.add_subcommand("acceptance", "geometric acceptance only (scattering disabled)");
  auto* list_cmd = app.add_subcommand("list-configs", "list the embedded presets");
  bool show_text = false;
  list_cmd->add_flag("--show", show_text, "print each preset's configuration text");
  for (auto* cmd : {run_cmd, sweep_cmd, acceptance_cmd}) add_run_flags(cmd, options);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (list_cmd->parsed()) {
      for (const auto& p : mutag::presets()) {
        fmt::print("{:<14} {}\n", p.name, p.description);
        if (show_text) fmt::print("{}\n", p.config_text);
      }
      return 0;
    }

    const mutag::RunConfig config = resolve_config(options);
    const mutag::RunOptions run_options{options.workers};
    std::vector<mutag::EfficiencyReport> reports;
    if (run_cmd->parsed()) {
      reports = mutag::run(config, run_options);
    } else if (sweep_cmd->parsed()) {
      reports = mutag::sweep(config, run_options);
    } else {
      reports = mutag::acceptance_mode(config, run_options);
    }
    emit(config, reports);
    return 0;
  } catch (const mutag::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}
