#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "railmap/errors.hpp"

namespace railmap {

// Row-major 2D grid, origin top-left, x rightward, y downward.
// The one raster convention shared by every map in the project.
template <typename T>
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, T fill = T{})
      : width_(width),
        height_(height),
        data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
    if (width <= 0 || height <= 0)
      fail(ErrorCategory::validation, "raster dimensions must be positive");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& at(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
  const T& at(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }

  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> row(int y) { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }
  std::span<const T> row(int y) const { return {data_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)}; }

  std::vector<T>& data() noexcept { return data_; }
  const std::vector<T>& data() const noexcept { return data_; }

  bool same_shape(int w, int h) const noexcept { return w == width_ && h == height_; }
  template <typename U>
  bool same_shape(const Raster<U>& other) const noexcept {
    return other.width() == width_ && other.height() == height_;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

using Mask = Raster<std::uint8_t>;

inline std::int64_t count_true(const Mask& mask) {
  std::int64_t n = 0;
  for (auto v : mask.data()) n += (v != 0);
  return n;
}

inline double fraction_true(const Mask& mask) {
  if (mask.empty()) return 0.0;
  return static_cast<double>(count_true(mask)) / static_cast<double>(mask.size());
}

}  // namespace railmap
