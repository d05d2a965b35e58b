#pragma once

#include <string>

namespace mutag {

struct Material {
  std::string name;
  double radiation_length;  // mm

  bool operator==(const Material&) const = default;
};

namespace materials {
// Cu is pinned by 8 mm = 55.7% X0.
inline const Material copper{"Cu", 14.36};
inline const Material iron{"Fe", 17.57};
inline const Material silicon{"Si", 93.7};
}  // namespace materials

}  // namespace mutag
