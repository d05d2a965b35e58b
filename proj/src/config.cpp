#include "mutag/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "mutag/detector.hpp"
#include "mutag/presets.hpp"

namespace mutag {

namespace {

const std::set<std::string_view> kRunKeys{
    "seed", "events", "angle_model", "margin_mm", "chip_plane_z_mm", "momentum_table",
    "scattering", "output", "format"};
const std::set<std::string_view> kDetectorKeys{
    "placement",      "dz_top_mm", "dz_bottom_mm", "pitch_top_um",
    "pitch_bottom_um", "pixels_top", "pixels_bottom", "check_envelope"};
const std::set<std::string_view> kSweepKeys{"placement", "pitch_top_um", "pitch_bottom_um",
                                            "dz_bottom_mm"};

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s)
{
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

std::optional<double> to_double(std::string_view s)
{
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> to_u64(std::string_view s)
{
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(std::string_view s)
{
  if (s == "on" || s == "true" || s == "yes") return true;
  if (s == "off" || s == "false" || s == "no") return false;
  return std::nullopt;
}

std::optional<PixelCount> to_pixels(std::string_view s)
{
  const auto x = s.find('x');
  if (x == std::string_view::npos) return std::nullopt;
  auto nx = to_u64(trim(s.substr(0, x)));
  auto ny = to_u64(trim(s.substr(x + 1)));
  if (!nx || !ny || *nx > 1'000'000 || *ny > 1'000'000) return std::nullopt;
  return PixelCount{int(*nx), int(*ny)};
}

std::optional<PitchChoice> to_pitch_choice(std::string_view s)
{
  if (s == "same") return PitchChoice{PitchChoice::Kind::same, 0};
  if (s == "table") return PitchChoice{PitchChoice::Kind::table, 0};
  if (s == "projected") return PitchChoice{PitchChoice::Kind::projected, 0};
  if (auto v = to_double(s)) return PitchChoice{PitchChoice::Kind::value, *v};
  return std::nullopt;
}

std::string format_pitch_choice(const PitchChoice& c)
{
  switch (c.kind) {
    case PitchChoice::Kind::same: return "same";
    case PitchChoice::Kind::table: return "table";
    case PitchChoice::Kind::projected: return "projected";
    case PitchChoice::Kind::value: break;
  }
  return fmt::format("{}", c.value);
}

struct Entry {
  std::string value;
  int line;
};

struct Section {
  std::string kind;
  std::string id;
  int line;
  std::map<std::string, Entry> entries;
};

class Parser {
 public:
  RunConfig parse(std::string_view text)
  {
    split_sections(text);
    RunConfig config;
    bool have_run = false;
    bool have_sweep = false;
    std::set<std::string> ids;
    for (const auto& section : sections_) {
      if (section.kind == "run") {
        if (have_run) error(section.line, "duplicate [run] section");
        have_run = true;
        parse_run(section, config);
      } else if (section.kind == "detector") {
        if (section.id.empty()) {
          error(section.line, "[detector] section needs an id, e.g. [detector my_config]");
        } else if (!ids.insert(section.id).second) {
          error(section.line, fmt::format("duplicate detector id '{}'", section.id));
        }
        config.detectors.push_back(parse_detector(section));
      } else if (section.kind == "sweep") {
        if (have_sweep) error(section.line, "duplicate [sweep] section");
        have_sweep = true;
        config.sweep = parse_sweep(section);
      } else {
        error(section.line, fmt::format("unknown section [{}]", section.kind));
      }
    }
    if (config.detectors.empty()) errors_.push_back("no [detector] section given");
    if (config.sweep && config.detectors.size() != 1) {
      errors_.push_back("[sweep] requires exactly one [detector] section as its base");
    }
    for (std::size_t i = 0; i < config.detectors.size(); ++i) {
      for (auto& v : validate_detector(config.detectors[i], config.chip_plane_z_mm)) {
        error(detector_lines_[i], fmt::format("detector '{}': {}", config.detectors[i].id, v));
      }
    }
    if (!errors_.empty()) throw ConfigError(errors_);
    return config;
  }

 private:
  void error(int line, const std::string& message)
  {
    errors_.push_back(fmt::format("line {}: {}", line, message));
  }

  void split_sections(std::string_view text)
  {
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    Section* current = nullptr;
    while (std::getline(in, raw)) {
      ++line_no;
      std::string_view line = raw;
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          error(line_no, "unterminated section header");
          current = nullptr;
          continue;
        }
        auto inner = trim(line.substr(1, line.size() - 2));
        const auto space = inner.find_first_of(" \t");
        Section s;
        s.kind = std::string(inner.substr(0, space));
        if (space != std::string_view::npos) s.id = std::string(trim(inner.substr(space)));
        s.line = line_no;
        sections_.push_back(std::move(s));
        current = &sections_.back();
        continue;
      }
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) {
        error(line_no, fmt::format("expected 'key = value', got '{}'", line));
        continue;
      }
      if (!current) {
        error(line_no, "key outside of any section");
        continue;
      }
      std::string key(trim(line.substr(0, eq)));
      std::string value(trim(line.substr(eq + 1)));
      if (current->entries.count(key)) {
        error(line_no, fmt::format("duplicate key '{}'", key));
        continue;
      }
      current->entries.emplace(std::move(key), Entry{std::move(value), line_no});
    }
  }

  void check_keys(const Section& s, const std::set<std::string_view>& allowed)
  {
    for (const auto& [key, entry] : s.entries) {
      if (!allowed.count(key)) {
        error(entry.line, fmt::format("unknown key '{}' in [{}]", key, s.kind));
      }
    }
  }

  template <typename T, typename Convert>
  void read(const Section& s, const char* key, T& out, Convert convert, const char* expected)
  {
    auto it = s.entries.find(key);
    if (it == s.entries.end()) return;
    if (auto v = convert(std::string_view(it->second.value))) {
      out = *v;
    } else {
      error(it->second.line,
            fmt::format("{}: expected {}, got '{}'", key, expected, it->second.value));
    }
  }

  void require(const Section& s, const char* key)
  {
    if (!s.entries.count(key)) {
      error(s.line, fmt::format("detector '{}': missing required key '{}'", s.id, key));
    }
  }

  void parse_run(const Section& s, RunConfig& c)
  {
    check_keys(s, kRunKeys);
    read(s, "seed", c.seed, to_u64, "an unsigned 64-bit integer");
    read(s, "events", c.n_events, to_u64, "a positive integer");
    read(s, "margin_mm", c.margin_mm, to_double, "a number");
    read(s, "chip_plane_z_mm", c.chip_plane_z_mm, to_double, "a number");
    read(s, "scattering", c.scattering, to_bool, "on/off");
    read(
        s, "angle_model", c.angle_model,
        [](std::string_view v) -> std::optional<AngleModel> {
          try {
            return angle_model_from_string(v);
          } catch (const std::invalid_argument&) {
            return std::nullopt;
          }
        },
        "solid_angle, literal or vertical");
    read(
        s, "format", c.format,
        [](std::string_view v) -> std::optional<ReportFormat> {
          if (v == "csv") return ReportFormat::csv;
          if (v == "json") return ReportFormat::json;
          return std::nullopt;
        },
        "csv or json");
    const auto text = [](std::string_view v) -> std::optional<std::string> {
      if (v.empty()) return std::nullopt;
      return std::string(v);
    };
    std::string path;
    if (s.entries.count("momentum_table")) {
      read(s, "momentum_table", path, text, "a path");
      if (!path.empty()) c.momentum_table = path;
    }
    std::string out;
    if (s.entries.count("output")) {
      read(s, "output", out, text, "a path");
      if (!out.empty()) c.output = out;
    }

    const auto line_of = [&](const char* key) {
      auto it = s.entries.find(key);
      return it == s.entries.end() ? s.line : it->second.line;
    };
    if (c.n_events < 1) error(line_of("events"), "events: must be >= 1");
    if (c.margin_mm < 0) error(line_of("margin_mm"), "margin_mm: must be >= 0");
  }

  DetectorConfig parse_detector(const Section& s)
  {
    check_keys(s, kDetectorKeys);
    for (const char* key : {"placement", "dz_top_mm", "dz_bottom_mm", "pitch_top_um",
                            "pitch_bottom_um", "pixels_top", "pixels_bottom"}) {
      require(s, key);
    }
    DetectorConfig d;
    d.id = s.id;
    read(s, "placement", d.placement, placement_from_string,
         "below_cold_plate or below_still_flange");
    read(s, "dz_top_mm", d.dz_top_mm, to_double, "a number");
    read(s, "dz_bottom_mm", d.dz_bottom_mm, to_double, "a number");
    read(s, "pitch_top_um", d.pitch_top_um, to_double, "a number");
    read(s, "pitch_bottom_um", d.pitch_bottom_um, to_double, "a number");
    read(s, "pixels_top", d.pixels_top, to_pixels, "NXxNY, e.g. 390x400");
    read(s, "pixels_bottom", d.pixels_bottom, to_pixels, "NXxNY, e.g. 390x400");
    read(s, "check_envelope", d.check_envelope, to_bool, "true/false");
    detector_lines_.push_back(s.line);
    return d;
  }

  SweepAxes parse_sweep(const Section& s)
  {
    check_keys(s, kSweepKeys);
    SweepAxes axes;
    const auto list = [&](const char* key, auto& out, auto convert, const char* expected) {
      auto it = s.entries.find(key);
      if (it == s.entries.end()) return;
      for (auto item : split_list(it->second.value)) {
        if (auto v = convert(item)) {
          out.push_back(*v);
        } else {
          error(it->second.line, fmt::format("{}: expected {}, got '{}'", key, expected, item));
        }
      }
    };
    list("placement", axes.placement, placement_from_string,
         "below_cold_plate or below_still_flange");
    list("pitch_top_um", axes.pitch_top_um, to_double, "a number");
    list("pitch_bottom_um", axes.pitch_bottom, to_pitch_choice,
         "a number, 'same', 'table' or 'projected'");
    list("dz_bottom_mm", axes.dz_bottom_mm, to_double, "a number");
    for (double p : axes.pitch_top_um) {
      if (!(p > 0)) error(s.line, "sweep pitch_top_um values must be > 0");
    }
    return axes;
  }

  std::vector<Section> sections_;
  std::vector<int> detector_lines_;
  std::vector<std::string> errors_;
};

std::string join_errors(const std::vector<std::string>& violations)
{
  std::string msg = "invalid configuration:";
  for (const auto& v : violations) msg += "\n  " + v;
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(join_errors(violations)), violations_(std::move(violations))
{
}

std::string_view to_string(Placement placement)
{
  return placement == Placement::below_cold_plate ? "below_cold_plate" : "below_still_flange";
}

std::optional<Placement> placement_from_string(std::string_view name)
{
  if (name == "below_cold_plate") return Placement::below_cold_plate;
  if (name == "below_still_flange") return Placement::below_still_flange;
  return std::nullopt;
}

std::string_view placement_disk(Placement placement)
{
  return placement == Placement::below_cold_plate ? "Cold plate" : "Still flange";
}

PixelCount envelope_pixels(double pitch_um)
{
  // Integer micrometre arithmetic keeps e.g. 195000 / 500 exact.
  const auto fit = [&](double extent_um) { return int(std::floor(extent_um / pitch_um + 1e-9)); };
  return {fit((kEnvelopeWidth - 2 * kDeadMarginX) * 1000.0), fit(kEnvelopeWidth * 1000.0)};
}

std::vector<std::string> validate_detector(const DetectorConfig& d, double chip_plane_z_mm)
{
  std::vector<std::string> v;
  if (!(d.pitch_top_um > 0)) v.push_back("pitch_top_um must be > 0");
  if (!(d.pitch_bottom_um > 0)) v.push_back("pitch_bottom_um must be > 0");
  if (d.pixels_top.nx < 1 || d.pixels_top.ny < 1) v.push_back("pixels_top must be at least 1x1");
  if (d.pixels_bottom.nx < 1 || d.pixels_bottom.ny < 1) {
    v.push_back("pixels_bottom must be at least 1x1");
  }
  if (!(d.dz_top_mm > 0)) v.push_back("dz_top_mm must be > 0 (top layer above the chip)");
  if (d.dz_top_mm == d.dz_bottom_mm) {
    v.push_back("dz_top_mm equals dz_bottom_mm: coplanar layers cannot define a track");
  } else if (d.dz_bottom_mm > d.dz_top_mm) {
    v.push_back("dz_bottom_mm must be below dz_top_mm");
  }

  const auto geometry = default_geometry(chip_plane_z_mm);
  const Disk* disk = geometry.find_disk(placement_disk(d.placement));
  const double top_z = chip_plane_z_mm + d.dz_top_mm;
  if (disk && std::abs(top_z - disk->z_bottom()) > 0.5) {
    v.push_back(fmt::format("placement {} puts the top layer at z = {:g} mm, but dz_top_mm = {:g} "
                            "gives z = {:g} mm",
                            to_string(d.placement), disk->z_bottom(), d.dz_top_mm, top_z));
  }

  if (d.check_envelope && d.pitch_top_um > 0 && d.pitch_bottom_um > 0) {
    const auto check = [&](const char* which, PixelCount n, double pitch_um) {
      const double w = n.nx * pitch_um * 1e-3 + 2 * kDeadMarginX;
      const double h = n.ny * pitch_um * 1e-3;
      if (w > kEnvelopeWidth + 1e-9 || h > kEnvelopeWidth + 1e-9) {
        v.push_back(fmt::format("{} layer {:g} x {:g} mm (with {:g} mm dead margins) exceeds the "
                                "{:g} mm envelope",
                                which, w, h, kDeadMarginX, kEnvelopeWidth));
      }
    };
    check("top", d.pixels_top, d.pitch_top_um);
    // Below the mixing flange the bottom layer sits outside the cryostat.
    if (d.dz_bottom_mm > 0) check("bottom", d.pixels_bottom, d.pitch_bottom_um);
  }
  return v;
}

RunConfig parse_config(std::string_view text) { return Parser().parse(text); }

RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error(fmt::format("cannot open config '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& e) {
    std::vector<std::string> v;
    for (const auto& msg : e.violations()) v.push_back(path + ": " + msg);
    throw ConfigError(std::move(v));
  }
}

std::string serialize_config(const RunConfig& c)
{
  std::string out = "[run]\n";
  out += fmt::format("seed = {}\n", c.seed);
  out += fmt::format("events = {}\n", c.n_events);
  out += fmt::format("angle_model = {}\n", to_string(c.angle_model));
  out += fmt::format("margin_mm = {}\n", c.margin_mm);
  out += fmt::format("chip_plane_z_mm = {}\n", c.chip_plane_z_mm);
  if (c.momentum_table) out += fmt::format("momentum_table = {}\n", *c.momentum_table);
  out += fmt::format("scattering = {}\n", c.scattering ? "on" : "off");
  if (c.output) out += fmt::format("output = {}\n", *c.output);
  out += fmt::format("format = {}\n", c.format == ReportFormat::csv ? "csv" : "json");

  for (const auto& d : c.detectors) {
    out += fmt::format("\n[detector {}]\n", d.id);
    out += fmt::format("placement = {}\n", to_string(d.placement));
    out += fmt::format("dz_top_mm = {}\n", d.dz_top_mm);
    out += fmt::format("dz_bottom_mm = {}\n", d.dz_bottom_mm);
    out += fmt::format("pitch_top_um = {}\n", d.pitch_top_um);
    out += fmt::format("pitch_bottom_um = {}\n", d.pitch_bottom_um);
    out += fmt::format("pixels_top = {}x{}\n", d.pixels_top.nx, d.pixels_top.ny);
    out += fmt::format("pixels_bottom = {}x{}\n", d.pixels_bottom.nx, d.pixels_bottom.ny);
    out += fmt::format("check_envelope = {}\n", d.check_envelope ? "true" : "false");
  }

  if (c.sweep) {
    const auto& s = *c.sweep;
    out += "\n[sweep]\n";
    const auto join = [](const auto& values, auto format) {
      std::string line;
      for (const auto& v : values) line += (line.empty() ? "" : ", ") + format(v);
      return line;
    };
    if (!s.placement.empty()) {
      out += "placement = " +
             join(s.placement, [](Placement p) { return std::string(to_string(p)); }) + "\n";
    }
    if (!s.pitch_top_um.empty()) {
      out += "pitch_top_um = " +
             join(s.pitch_top_um, [](double p) { return fmt::format("{}", p); }) + "\n";
    }
    if (!s.pitch_bottom.empty()) {
      out += "pitch_bottom_um = " + join(s.pitch_bottom, format_pitch_choice) + "\n";
    }
    if (!s.dz_bottom_mm.empty()) {
      out += "dz_bottom_mm = " +
             join(s.dz_bottom_mm, [](double p) { return fmt::format("{}", p); }) + "\n";
    }
  }
  return out;
}

GeometryModel build_geometry(const RunConfig& run, const DetectorConfig& d)
{
  GeometryModel g = default_geometry(run.chip_plane_z_mm);
  g.top_layer.z_plane = run.chip_plane_z_mm + d.dz_top_mm;
  g.top_layer.pitch_x_um = g.top_layer.pitch_y_um = d.pitch_top_um;
  g.top_layer.n_x = d.pixels_top.nx;
  g.top_layer.n_y = d.pixels_top.ny;
  g.bottom_layer.z_plane = run.chip_plane_z_mm + d.dz_bottom_mm;
  g.bottom_layer.pitch_x_um = g.bottom_layer.pitch_y_um = d.pitch_bottom_um;
  g.bottom_layer.n_x = d.pixels_bottom.nx;
  g.bottom_layer.n_y = d.pixels_bottom.ny;
  return g;
}

std::vector<DetectorConfig> expand_sweep(const RunConfig& config)
{
  if (config.detectors.empty()) throw ConfigError({"sweep needs a base [detector] section"});
  const DetectorConfig& base = config.detectors.front();
  if (!config.sweep) return {base};
  const SweepAxes& axes = *config.sweep;

  // An empty axis contributes the base value only.
  const std::vector<std::optional<Placement>> placements = [&] {
    std::vector<std::optional<Placement>> v(axes.placement.begin(), axes.placement.end());
    if (v.empty()) v.push_back(std::nullopt);
    return v;
  }();
  const auto or_base = [](const std::vector<double>& values) {
    std::vector<std::optional<double>> v(values.begin(), values.end());
    if (v.empty()) v.push_back(std::nullopt);
    return v;
  };
  const auto pitch_tops = or_base(axes.pitch_top_um);
  const auto dz_bottoms = or_base(axes.dz_bottom_mm);
  std::vector<std::optional<PitchChoice>> pitch_bottoms(axes.pitch_bottom.begin(),
                                                        axes.pitch_bottom.end());
  if (pitch_bottoms.empty()) pitch_bottoms.push_back(std::nullopt);

  const auto geometry = default_geometry(config.chip_plane_z_mm);
  std::vector<DetectorConfig> out;
  std::vector<std::string> errors;
  for (const auto& placement : placements) {
    for (const auto& pitch_top : pitch_tops) {
      for (const auto& pitch_bottom : pitch_bottoms) {
        for (const auto& dz_bottom : dz_bottoms) {
          DetectorConfig d = base;
          std::string suffix;
          if (placement) {
            d.placement = *placement;
            d.dz_top_mm =
                geometry.find_disk(placement_disk(*placement))->z_bottom() - config.chip_plane_z_mm;
            if (axes.placement.size() > 1) {
              suffix += *placement == Placement::below_cold_plate ? "_cp" : "_sf";
            }
          }
          if (pitch_top) {
            d.pitch_top_um = *pitch_top;
            d.pixels_top = envelope_pixels(*pitch_top);
            d.pixels_bottom = d.pixels_top;
            if (axes.pitch_top_um.size() > 1) suffix += fmt::format("_pt{:g}", *pitch_top);
          }
          if (dz_bottom) {
            d.dz_bottom_mm = *dz_bottom;
            if (axes.dz_bottom_mm.size() > 1) suffix += fmt::format("_dzb{:g}", *dz_bottom);
          }
          if (pitch_bottom) {
            d.pixels_bottom = d.pixels_top;
            switch (pitch_bottom->kind) {
              case PitchChoice::Kind::value: d.pitch_bottom_um = pitch_bottom->value; break;
              case PitchChoice::Kind::same: d.pitch_bottom_um = d.pitch_top_um; break;
              case PitchChoice::Kind::projected: {
                const double p = adapted_pitch(d.pitch_top_um, d.dz_top_mm, d.dz_bottom_mm, 0.0);
                d.pitch_bottom_um = 5.0 * std::round(p / 5.0);
                break;
              }
              case PitchChoice::Kind::table: {
                auto p = published_adapted_pitch(d.placement, d.pitch_top_um, d.dz_bottom_mm);
                if (!p) {
                  errors.push_back(fmt::format(
                      "sweep: no tabulated adapted pitch for {} / top {:g} um / dz_bottom {:g} mm",
                      to_string(d.placement), d.pitch_top_um, d.dz_bottom_mm));
                  continue;
                }
                d.pitch_bottom_um = *p;
                break;
              }
            }
            if (axes.pitch_bottom.size() > 1) suffix += fmt::format("_pb{:g}", d.pitch_bottom_um);
          }
          d.id = base.id + suffix;
          for (auto& v : validate_detector(d, config.chip_plane_z_mm)) {
            errors.push_back(fmt::format("sweep point '{}': {}", d.id, v));
          }
          out.push_back(std::move(d));
        }
      }
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return out;
}

}  // namespace mutag
