// Multiple Coulomb scattering and cosmic-muon sampling.
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mutag/geometry.hpp"
#include "mutag/rng.hpp"

namespace mutag {

inline constexpr double kMuonMassGeV = 0.105658;
inline constexpr double kMinMomentumGeV = 0.5;
inline constexpr double kMaxMomentumGeV = 10.0;
inline constexpr double kMaxZenith = M_PI / 3.0;

struct MuonState {
  Vec3 position;   // mm
  Vec3 direction;  // unit, z < 0
  double momentum; // GeV
};

/// Projected scattering angles (rad) and lateral offsets (mm) in the two
/// planes transverse to the direction of flight.
struct ScatterDraw {
  double theta_x = 0.0;
  double theta_y = 0.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
};

/// Highland width of the projected scattering angle for a unit-charge muon.
/// Returns 0 for zero material; the log-correction bracket is clamped at 0.
double highland_theta0(double momentum_gev, double x_over_x0);

ScatterDraw sample_scatter(EventRng& rng, double theta0, double path);

/// Transverse axes (u, v) with u = d x y_hat normalised and v = u x d.
/// For a vertical downward muon u = +x, v = +y.
std::pair<Vec3, Vec3> transverse_basis(const Vec3& direction);

MuonState apply_scatter(const MuonState& state, const ScatterDraw& draw);

enum class AngleModel {
  solid_angle,  // density cos^2(theta) sin(theta)
  literal,      // density cos^2(theta) in theta
  vertical,     // theta = 0, diagnostics only
};

std::string_view to_string(AngleModel model);
AngleModel angle_model_from_string(std::string_view name);

struct Angles {
  double zenith;
  double azimuth;
};

Angles sample_zenith_azimuth(EventRng& rng, AngleModel model);

/// Differential momentum spectrum, log-log linear between nodes, supported on
/// [0.5, 10] GeV.
class MomentumSpectrum {
 public:
  struct Node {
    double momentum;
    double flux;
  };

  explicit MomentumSpectrum(std::vector<Node> nodes);

  static MomentumSpectrum parse(std::string_view text, const std::string& source = "<text>");
  static MomentumSpectrum load(const std::filesystem::path& path);
  static MomentumSpectrum default_spectrum();
  static std::string_view default_table_text();

  const std::vector<Node>& nodes() const { return nodes_; }
  double density(double p) const;  // unnormalised
  double cdf(double p) const;
  double quantile(double u) const;
  double sample(EventRng& rng) const { return quantile(rng.uniform()); }

 private:
  double segment_integral(std::size_t i, double p) const;

  std::vector<Node> nodes_;
  std::vector<double> slopes_;
  std::vector<double> cumulative_;  // integral up to node i
};

}  // namespace mutag
