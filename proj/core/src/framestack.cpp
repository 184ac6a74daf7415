#include "railmap/framestack.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace railmap::io {

namespace {

static_assert(std::endian::native == std::endian::little,
              "frame-stack writer assumes a little-endian host");

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T take(std::ifstream& in, const std::filesystem::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) fail(ErrorCategory::format, "truncated frame stack '" + path.string() + "'");
  return v;
}

}  // namespace

void write_frame_stack(const std::filesystem::path& path, const FrameStack& fs) {
  if (fs.n_frames() < 1) fail(ErrorCategory::validation, "frame stack needs at least one frame");
  for (const auto& f : fs.frames)
    if (!f.same_shape(fs.width, fs.height))
      fail(ErrorCategory::validation, "frame stack has inconsistent frame dimensions");

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write '" + path.string() + "'");
  out.write("MFRS", 4);
  put<std::uint16_t>(out, kFrameStackVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fs.width));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fs.height));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(fs.n_frames()));
  put<double>(out, fs.fps);
  put<double>(out, fs.t0);
  for (const auto& f : fs.frames)
    out.write(reinterpret_cast<const char*>(f.data().data()),
              static_cast<std::streamsize>(f.size() * sizeof(float)));
  if (!out) fail(ErrorCategory::io, "write failed for '" + path.string() + "'");
}

FrameStack read_frame_stack(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "'");
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "MFRS", 4) != 0)
    fail(ErrorCategory::format, "'" + path.string() + "' is not a frame stack (bad magic)");
  const auto version = take<std::uint16_t>(in, path);
  if (version != kFrameStackVersion)
    fail(ErrorCategory::format, "unsupported frame stack version " + std::to_string(version) +
                                    " in '" + path.string() + "'");
  FrameStack fs;
  fs.width = static_cast<int>(take<std::uint32_t>(in, path));
  fs.height = static_cast<int>(take<std::uint32_t>(in, path));
  const auto n = take<std::uint32_t>(in, path);
  fs.fps = take<double>(in, path);
  fs.t0 = take<double>(in, path);
  if (fs.width <= 0 || fs.height <= 0 || n < 1)
    fail(ErrorCategory::format, "invalid frame stack header in '" + path.string() + "'");
  fs.frames.reserve(n);
  for (std::uint32_t k = 0; k < n; ++k) {
    Raster<float> f(fs.width, fs.height);
    in.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.size() * sizeof(float)));
    if (!in) fail(ErrorCategory::format, "truncated frame data in '" + path.string() + "'");
    fs.frames.push_back(std::move(f));
  }
  return fs;
}

void write_map_f32(const std::filesystem::path& path, const Raster<double>& map) {
  Raster<float> f(map.width(), map.height());
  for (std::size_t i = 0; i < map.size(); ++i) f.data()[i] = static_cast<float>(map.data()[i]);
  write_map_f32(path, f);
}

void write_map_f32(const std::filesystem::path& path, const Raster<float>& map) {
  FrameStack fs;
  fs.width = map.width();
  fs.height = map.height();
  fs.fps = 1.0;
  fs.t0 = 0.0;
  fs.frames.push_back(map);
  write_frame_stack(path, fs);
}

void write_mask(const std::filesystem::path& path, const Mask& mask) {
  Raster<float> f(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.size(); ++i) f.data()[i] = mask.data()[i] ? 1.0f : 0.0f;
  write_map_f32(path, f);
}

Raster<double> read_map_f32(const std::filesystem::path& path) {
  const FrameStack fs = read_frame_stack(path);
  if (fs.n_frames() != 1)
    fail(ErrorCategory::format, "expected a single-frame map in '" + path.string() + "'");
  Raster<double> out(fs.width, fs.height);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = fs.frames[0].data()[i];
  return out;
}

}  // namespace railmap::io
