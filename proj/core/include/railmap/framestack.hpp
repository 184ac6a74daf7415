#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "railmap/raster.hpp"

namespace railmap {

// Time-sampled detector frames (IR camera output; single-frame stacks
// double as generic scalar-map containers on disk).
struct FrameStack {
  int width = 0;
  int height = 0;
  double fps = 0.0;
  double t0 = 0.0;
  std::vector<Raster<float>> frames;
  // Acquisition covered a whole number of modulation periods. Carried in
  // index documents, not in the binary format.
  bool integer_periods = true;

  int n_frames() const noexcept { return static_cast<int>(frames.size()); }
  double frame_time(int k) const noexcept { return t0 + static_cast<double>(k) / fps; }
};

namespace io {

// Binary layout, little-endian, bit-exact:
//   magic "MFRS", version u16, width u32, height u32, n_frames u32,
//   fps f64, t0 f64, then n_frames row-major frames of f32.
inline constexpr std::uint16_t kFrameStackVersion = 1;

void write_frame_stack(const std::filesystem::path& path, const FrameStack& fs);
FrameStack read_frame_stack(const std::filesystem::path& path);

// Convenience wrappers for single-map files (n_frames = 1).
void write_map_f32(const std::filesystem::path& path, const Raster<double>& map);
void write_map_f32(const std::filesystem::path& path, const Raster<float>& map);
void write_mask(const std::filesystem::path& path, const Mask& mask);
Raster<double> read_map_f32(const std::filesystem::path& path);

}  // namespace io
}  // namespace railmap
