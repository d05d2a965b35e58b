#include "mutag/physics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace mutag {

double highland_theta0(double momentum_gev, double x_over_x0)
{
  if (!std::isfinite(momentum_gev) || !std::isfinite(x_over_x0)) {
    throw std::invalid_argument("highland_theta0: non-finite input");
  }
  if (momentum_gev <= 0.0 || x_over_x0 < 0.0) {
    throw std::invalid_argument("highland_theta0: momentum must be > 0 and x/X0 >= 0");
  }
  if (x_over_x0 == 0.0) return 0.0;

  const double energy = std::hypot(momentum_gev, kMuonMassGeV);
  const double beta = momentum_gev / energy;
  const double beta_cp_mev = beta * momentum_gev * 1e3;
  const double bracket = std::max(0.0, 1.0 + 0.038 * std::log(x_over_x0 / (beta * beta)));
  return 13.6 / beta_cp_mev * std::sqrt(x_over_x0) * bracket;
}

ScatterDraw sample_scatter(EventRng& rng, double theta0, double path)
{
  ScatterDraw draw;
  if (theta0 <= 0.0) return draw;
  const auto plane = [&](double& theta, double& offset) {
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    theta = z2 * theta0;
    offset = (z1 / std::sqrt(12.0) + 0.5 * z2) * path * theta0;
  };
  plane(draw.theta_x, draw.offset_x);
  plane(draw.theta_y, draw.offset_y);
  return draw;
}

std::pair<Vec3, Vec3> transverse_basis(const Vec3& direction)
{
  Vec3 u = direction.cross(Vec3::UnitY());
  if (u.squaredNorm() < 1e-12) u = direction.cross(Vec3::UnitX());
  u.normalize();
  Vec3 v = u.cross(direction).normalized();
  return {u, v};
}

MuonState apply_scatter(const MuonState& state, const ScatterDraw& draw)
{
  if (draw.theta_x == 0.0 && draw.theta_y == 0.0 && draw.offset_x == 0.0 && draw.offset_y == 0.0) {
    return state;
  }
  const auto [u, v] = transverse_basis(state.direction);
  MuonState out = state;
  out.position += draw.offset_x * u + draw.offset_y * v;
  out.direction =
      (state.direction + std::tan(draw.theta_x) * u + std::tan(draw.theta_y) * v).normalized();
  return out;
}

std::string_view to_string(AngleModel model)
{
  switch (model) {
    case AngleModel::solid_angle: return "solid_angle";
    case AngleModel::literal: return "literal";
    case AngleModel::vertical: return "vertical";
  }
  return "unknown";
}

AngleModel angle_model_from_string(std::string_view name)
{
  if (name == "solid_angle") return AngleModel::solid_angle;
  if (name == "literal") return AngleModel::literal;
  if (name == "vertical") return AngleModel::vertical;
  throw std::invalid_argument(fmt::format("unknown angle model '{}'", name));
}

Angles sample_zenith_azimuth(EventRng& rng, AngleModel model)
{
  double zenith = 0.0;
  switch (model) {
    case AngleModel::solid_angle: {
      // cos(theta) has density c^2 on [cos 60deg, 1].
      const double c_min3 = std::pow(std::cos(kMaxZenith), 3);
      const double c = std::cbrt(c_min3 + rng.uniform() * (1.0 - c_min3));
      zenith = std::acos(std::min(1.0, c));
      break;
    }
    case AngleModel::literal: {
      for (;;) {
        const double t = rng.uniform() * kMaxZenith;
        const double c = std::cos(t);
        if (rng.uniform() < c * c) {
          zenith = t;
          break;
        }
      }
      break;
    }
    case AngleModel::vertical:
      break;
  }
  const double azimuth = 2.0 * M_PI * rng.uniform();
  return {zenith, azimuth};
}

// ---------------------------------------------------------------------------

MomentumSpectrum::MomentumSpectrum(std::vector<Node> nodes) : nodes_(std::move(nodes))
{
  if (nodes_.size() < 2) throw std::invalid_argument("momentum spectrum needs at least 2 nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (!(n.flux > 0.0) || !std::isfinite(n.flux)) {
      throw std::invalid_argument(fmt::format("momentum spectrum node {}: flux must be > 0", i));
    }
    if (i > 0 && !(n.momentum > nodes_[i - 1].momentum)) {
      throw std::invalid_argument(
          fmt::format("momentum spectrum node {}: momenta must be strictly increasing", i));
    }
  }
  if (nodes_.front().momentum != kMinMomentumGeV || nodes_.back().momentum != kMaxMomentumGeV) {
    throw std::invalid_argument("momentum spectrum must span exactly [0.5, 10] GeV");
  }

  cumulative_.assign(nodes_.size(), 0.0);
  slopes_.resize(nodes_.size() - 1);
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    slopes_[i] = std::log(nodes_[i + 1].flux / nodes_[i].flux) /
                 std::log(nodes_[i + 1].momentum / nodes_[i].momentum);
    cumulative_[i + 1] = cumulative_[i] + segment_integral(i, nodes_[i + 1].momentum);
  }
}

double MomentumSpectrum::segment_integral(std::size_t i, double p) const
{
  const double p0 = nodes_[i].momentum;
  const double f0 = nodes_[i].flux;
  const double k1 = slopes_[i] + 1.0;
  if (std::abs(k1) < 1e-12) return f0 * p0 * std::log(p / p0);
  return f0 * p0 / k1 * (std::pow(p / p0, k1) - 1.0);
}

double MomentumSpectrum::density(double p) const
{
  if (p < nodes_.front().momentum || p > nodes_.back().momentum) return 0.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), p,
                             [](double x, const Node& n) { return x < n.momentum; });
  std::size_t i = std::min<std::size_t>(std::distance(nodes_.begin(), it), nodes_.size() - 1);
  i = i == 0 ? 0 : i - 1;
  return nodes_[i].flux * std::pow(p / nodes_[i].momentum, slopes_[std::min(i, slopes_.size() - 1)]);
}

double MomentumSpectrum::cdf(double p) const
{
  if (p <= nodes_.front().momentum) return 0.0;
  if (p >= nodes_.back().momentum) return 1.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), p,
                             [](double x, const Node& n) { return x < n.momentum; });
  const std::size_t i = std::distance(nodes_.begin(), it) - 1;
  return (cumulative_[i] + segment_integral(i, p)) / cumulative_.back();
}

double MomentumSpectrum::quantile(double u) const
{
  const double target = std::clamp(u, 0.0, 1.0) * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  std::size_t i = it == cumulative_.begin() ? 0 : std::distance(cumulative_.begin(), it) - 1;
  i = std::min(i, slopes_.size() - 1);

  const double area = target - cumulative_[i];
  const double p0 = nodes_[i].momentum;
  const double f0 = nodes_[i].flux;
  const double k1 = slopes_[i] + 1.0;
  double p;
  if (std::abs(k1) < 1e-12) {
    p = p0 * std::exp(area / (f0 * p0));
  } else {
    p = p0 * std::pow(1.0 + area * k1 / (f0 * p0), 1.0 / k1);
  }
  return std::clamp(p, nodes_[i].momentum, nodes_[i + 1].momentum);
}

MomentumSpectrum MomentumSpectrum::parse(std::string_view text, const std::string& source)
{
  std::vector<Node> nodes;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double p = 0.0;
    double f = 0.0;
    if (!(fields >> p)) continue;
    std::string extra;
    if (!(fields >> f) || (fields >> extra)) {
      throw std::invalid_argument(
          fmt::format("{}:{}: expected two columns 'p_GeV relative_flux'", source, line_no));
    }
    nodes.push_back({p, f});
  }
  try {
    return MomentumSpectrum(std::move(nodes));
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(fmt::format("{}: {}", source, e.what()));
  }
}

MomentumSpectrum MomentumSpectrum::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open momentum table '{}'", path.string()));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

std::string_view MomentumSpectrum::default_table_text()
{
  // Mirrors data/momentum_spectrum.txt.
  return R"(# Sea-level vertical cosmic-muon differential momentum spectrum.
# Hand-digitised approximation of the standard compilation, 0.5-10 GeV.
# Interpolated log-log linear between nodes; normalisation is irrelevant.
# p_GeV   relative_flux (m^-2 s^-1 sr^-1 GeV^-1)
0.5       32.0
0.7       30.6
1.0       27.0
1.4       21.3
2.0       14.8
2.8       9.2
4.0       4.9
5.6       2.42
7.5       1.27
10.0      0.60
)";
}

MomentumSpectrum MomentumSpectrum::default_spectrum()
{
  static const MomentumSpectrum spectrum = parse(default_table_text(), "<embedded>");
  return spectrum;
}

}  // namespace mutag
