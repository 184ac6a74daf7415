#pragma once

#include <cstdint>
#include <filesystem>

#include "railmap/raster.hpp"

namespace railmap::image {

struct Rgb8 {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb8&) const = default;
};

// Paper-style overlay palette: strong response in yellow, weak in purple.
inline constexpr Rgb8 kStrongColor{255, 214, 64};
inline constexpr Rgb8 kWeakColor{158, 64, 188};

void write_ppm(const std::filesystem::path& path, const Raster<Rgb8>& img);
Raster<Rgb8> read_ppm(const std::filesystem::path& path);

// Grayscale export, min..max stretched to 0..255.
void write_pgm(const std::filesystem::path& path, const Raster<double>& map);

// Affected pixels drawn over the grayscale base: amplitude above
// strong_threshold in the strong color, above threshold in the weak color.
Raster<Rgb8> render_overlay(const Raster<double>& base, const Raster<double>& amplitude,
                            double threshold, double strong_threshold);

}  // namespace railmap::image
