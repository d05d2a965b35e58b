#include "mutag/run.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <fmt/format.h>

namespace mutag {

namespace {

constexpr std::uint64_t kBlockSize = 4096;

}  // namespace

double effective_margin(const RunConfig& run)
{
  // Without scattering a line aimed off the chip cannot reach it.
  return run.scattering ? run.margin_mm : 0.0;
}

ReportMeta make_meta(const RunConfig& run, const DetectorConfig& d)
{
  ReportMeta m;
  m.config_id = d.id;
  m.pitch_top_um = d.pitch_top_um;
  m.pitch_bottom_um = d.pitch_bottom_um;
  m.nx_top = d.pixels_top.nx;
  m.ny_top = d.pixels_top.ny;
  m.nx_bottom = d.pixels_bottom.nx;
  m.ny_bottom = d.pixels_bottom.ny;
  m.dz_top_mm = d.dz_top_mm;
  m.dz_bottom_mm = d.dz_bottom_mm;
  m.seed = run.seed;
  m.angle_model = std::string(to_string(run.angle_model));
  m.scattering = run.scattering;
  m.margin_mm = effective_margin(run);
  m.chip_plane_z_mm = run.chip_plane_z_mm;
  return m;
}

MomentumSpectrum spectrum_for(const RunConfig& run)
{
  if (run.momentum_table) return MomentumSpectrum::load(*run.momentum_table);
  return MomentumSpectrum::default_spectrum();
}

EfficiencyTally simulate(const GeometryModel& geometry, const RunConfig& run,
                         const MomentumSpectrum& spectrum, const RunOptions& options)
{
  const Propagator propagator(geometry, PropagationOptions{run.scattering});
  const auto region = GenerationRegion::for_geometry(geometry, effective_margin(run));
  const std::uint64_t n_blocks = (run.n_events + kBlockSize - 1) / kBlockSize;

  std::atomic<std::uint64_t> next_block{0};
  const auto work = [&](EfficiencyTally& tally) {
    for (std::uint64_t block = next_block++; block < n_blocks; block = next_block++) {
      const std::uint64_t end = std::min(run.n_events, (block + 1) * kBlockSize);
      for (std::uint64_t event = block * kBlockSize; event < end; ++event) {
        EventRng rng(run.seed, event);
        const MuonState state = generate_event(rng, region, spectrum, run.angle_model);
        const Trajectory traj = propagator.propagate(state, rng);
        ++tally.n_generated;
        if (traj.aborted) {
          ++tally.n_aborted;
          continue;
        }
        tally.accumulate(make_record(traj, geometry));
      }
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers, unsigned(std::max<std::uint64_t>(1, n_blocks))));
  std::vector<EfficiencyTally> partial(workers);
  if (workers == 1) {
    work(partial.front());
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back([&, w] { work(partial[w]); });
  }

  EfficiencyTally total;
  for (const auto& p : partial) total.merge(p);
  // Residual order depends on scheduling; the quantile does not, but keep the
  // stored sample canonical anyway.
  std::sort(total.residuals_x.begin(), total.residuals_x.end());
  std::sort(total.residuals_y.begin(), total.residuals_y.end());
  return total;
}

EfficiencyReport run_detector(const RunConfig& run, const DetectorConfig& detector,
                              const RunOptions& options)
{
  const GeometryModel geometry = build_geometry(run, detector);
  const MomentumSpectrum spectrum = spectrum_for(run);
  const EfficiencyTally tally = simulate(geometry, run, spectrum, options);
  if (tally.n_generated > 0 &&
      double(tally.n_aborted) > kMaxAbortedFraction * double(tally.n_generated)) {
    throw RunError(fmt::format("configuration '{}': {} of {} events aborted on a degenerate "
                               "direction (limit {:.0f}%)",
                               detector.id, tally.n_aborted, tally.n_generated,
                               100 * kMaxAbortedFraction));
  }
  return finalize(tally, make_meta(run, detector));
}

std::vector<EfficiencyReport> run(const RunConfig& config, const RunOptions& options)
{
  std::vector<EfficiencyReport> reports;
  for (const auto& d : config.detectors) reports.push_back(run_detector(config, d, options));
  return reports;
}

std::vector<EfficiencyReport> acceptance_mode(RunConfig config, const RunOptions& options)
{
  config.scattering = false;
  return run(config, options);
}

std::vector<EfficiencyReport> sweep(const RunConfig& config, const RunOptions& options)
{
  std::vector<EfficiencyReport> reports;
  for (const auto& d : expand_sweep(config)) reports.push_back(run_detector(config, d, options));
  return reports;
}

}  // namespace mutag
