// Reference computations used by the tests. Written directly from the
// defining integrals, sharing nothing with the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline double simpson(auto&& f, double a, double b, int n = 20000)
{
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4 : 2) * f(a + k * h);
  return s * h / 3;
}

/// Mean of theta under density cos^2(theta) on [0, pi/3].
inline double literal_mean_zenith()
{
  const double top = M_PI / 3;
  const auto w = [](double t) { return std::cos(t) * std::cos(t); };
  return simpson([&](double t) { return t * w(t); }, 0, top) / simpson(w, 0, top);
}

/// Mean of cos^2(theta) under density cos^2(theta) sin(theta) on [0, pi/3].
inline double solid_angle_mean_cos2()
{
  const double c = 0.5;
  return ((1 - std::pow(c, 5)) / 5) / ((1 - std::pow(c, 3)) / 3);
}

/// Two-column table read straight from a file, comments skipped.
inline std::vector<std::pair<double, double>> read_table(const std::string& path)
{
  std::ifstream in(path);
  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream s(line);
    double p, f;
    if (s >> p >> f) rows.emplace_back(p, f);
  }
  return rows;
}

/// CDF of a log-log interpolated table, tabulated by Simpson integration on a
/// fine grid and linearly interpolated.
class TableCdf {
 public:
  explicit TableCdf(std::vector<std::pair<double, double>> nodes) : nodes_(std::move(nodes))
  {
    const double lo = nodes_.front().first;
    const double hi = nodes_.back().first;
    const int n = 20000;
    grid_.resize(n + 1);
    cdf_.assign(n + 1, 0.0);
    for (int k = 0; k <= n; ++k) grid_[k] = lo + (hi - lo) * k / n;
    for (int k = 1; k <= n; ++k) {
      cdf_[k] = cdf_[k - 1] + simpson([&](double p) { return density(p); }, grid_[k - 1], grid_[k], 8);
    }
    for (auto& c : cdf_) c /= cdf_.back();
  }

  double density(double p) const
  {
    std::size_t i = 0;
    while (i + 2 < nodes_.size() && p > nodes_[i + 1].first) ++i;
    const auto [p0, f0] = nodes_[i];
    const auto [p1, f1] = nodes_[i + 1];
    const double a = (std::log(p) - std::log(p0)) / (std::log(p1) - std::log(p0));
    return std::exp(std::log(f0) + a * (std::log(f1) - std::log(f0)));
  }

  double operator()(double p) const
  {
    if (p <= grid_.front()) return 0;
    if (p >= grid_.back()) return 1;
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), p);
    const std::size_t k = std::size_t(it - grid_.begin());
    const double a = (p - grid_[k - 1]) / (grid_[k] - grid_[k - 1]);
    return cdf_[k - 1] + a * (cdf_[k] - cdf_[k - 1]);
  }

 private:
  std::vector<std::pair<double, double>> nodes_;
  std::vector<double> grid_;
  std::vector<double> cdf_;
};

/// Kolmogorov-Smirnov distance of a sample against a CDF.
inline double ks_distance(std::vector<double> sample, auto&& cdf)
{
  std::sort(sample.begin(), sample.end());
  const double n = double(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return d;
}

/// Highland width from the textbook expression, muon mass 105.658 MeV.
inline double highland(double p_gev, double x)
{
  const double m = 0.105658;
  const double beta = p_gev / std::sqrt(p_gev * p_gev + m * m);
  return 0.0136 / (beta * p_gev) * std::sqrt(x) * (1 + 0.038 * std::log(x / (beta * beta)));
}

}  // namespace oracle
