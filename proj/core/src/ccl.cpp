#include "railmap/ccl.hpp"

#include <algorithm>
#include <numeric>

namespace railmap {

namespace {

std::int32_t find_root(std::vector<std::int32_t>& parent, std::int32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

void unite(std::vector<std::int32_t>& parent, std::int32_t a, std::int32_t b) {
  a = find_root(parent, a);
  b = find_root(parent, b);
  if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

}  // namespace

Labeling connected_components(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Labeling out;
  out.labels = Raster<std::int32_t>(w, h, -1);

  std::vector<std::int32_t> parent;
  parent.reserve(1024);

  // first pass: provisional labels, merging with the 4 already-seen
  // 8-neighbours (W, NW, N, NE)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      std::int32_t label = -1;
      const auto consider = [&](int nx, int ny) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) return;
        const std::int32_t n = out.labels.at(nx, ny);
        if (n < 0) return;
        if (label < 0)
          label = find_root(parent, n);
        else
          unite(parent, label, n);
      };
      consider(x - 1, y);
      consider(x - 1, y - 1);
      consider(x, y - 1);
      consider(x + 1, y - 1);
      if (label < 0) {
        label = static_cast<std::int32_t>(parent.size());
        parent.push_back(label);
      }
      out.labels.at(x, y) = label;
    }
  }

  // second pass: flatten to dense component ids and gather stats
  std::vector<std::int32_t> dense(parent.size(), -1);
  std::int32_t next = 0;
  for (std::size_t i = 0; i < parent.size(); ++i) {
    const std::int32_t root = find_root(parent, static_cast<std::int32_t>(i));
    if (dense[root] < 0) dense[root] = next++;
  }
  out.components.resize(static_cast<std::size_t>(next));
  for (std::int32_t c = 0; c < next; ++c) {
    out.components[c].id = c;
    out.components[c].min_x = w;
    out.components[c].min_y = h;
    out.components[c].max_x = -1;
    out.components[c].max_y = -1;
  }
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      std::int32_t& l = out.labels.at(x, y);
      if (l < 0) continue;
      l = dense[find_root(parent, l)];
      ComponentStats& s = out.components[l];
      ++s.pixel_count;
      s.min_x = std::min(s.min_x, x);
      s.min_y = std::min(s.min_y, y);
      s.max_x = std::max(s.max_x, x);
      s.max_y = std::max(s.max_y, y);
    }
  }
  return out;
}

}  // namespace railmap
