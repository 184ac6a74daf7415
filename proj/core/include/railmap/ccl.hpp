#pragma once

#include <cstdint>
#include <vector>

#include "railmap/raster.hpp"

namespace railmap {

struct ComponentStats {
  std::int32_t id = 0;
  std::int64_t pixel_count = 0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};

struct Labeling {
  Raster<std::int32_t> labels;  // -1 background, else component index
  std::vector<ComponentStats> components;
};

// 8-connected components of a boolean mask (two-pass union-find).
Labeling connected_components(const Mask& mask);

}  // namespace railmap
