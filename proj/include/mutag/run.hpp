// Event loop orchestration: single runs, sweeps and the no-scatter
// acceptance mode. Results do not depend on the worker count.
#pragma once

#include <stdexcept>
#include <vector>

#include "mutag/analysis.hpp"
#include "mutag/config.hpp"
#include "mutag/transport.hpp"

namespace mutag {

class RunError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest tolerated fraction of events aborted by a degenerate direction.
inline constexpr double kMaxAbortedFraction = 0.01;

struct RunOptions {
  unsigned workers = 1;
};

/// Aim margin actually used: the configured one, or 0 with scattering off.
double effective_margin(const RunConfig& run);

ReportMeta make_meta(const RunConfig& run, const DetectorConfig& detector);

MomentumSpectrum spectrum_for(const RunConfig& run);

/// Tally of `n_events` events for one geometry. Event i uses the random
/// stream (seed, i).
EfficiencyTally simulate(const GeometryModel& geometry, const RunConfig& run,
                         const MomentumSpectrum& spectrum, const RunOptions& options);

EfficiencyReport run_detector(const RunConfig& run, const DetectorConfig& detector,
                              const RunOptions& options = {});

/// One report per [detector] section.
std::vector<EfficiencyReport> run(const RunConfig& config, const RunOptions& options = {});

/// Scattering disabled: pure geometric acceptance of the layer pair.
std::vector<EfficiencyReport> acceptance_mode(RunConfig config, const RunOptions& options = {});

/// One report per point of the expanded sweep.
std::vector<EfficiencyReport> sweep(const RunConfig& config, const RunOptions& options = {});

}  // namespace mutag
