#include "railmap/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

namespace railmap::image {

void write_ppm(const std::filesystem::path& path, const Raster<Rgb8>& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write '" + path.string() + "'");
  out << "P6\n" << img.width() << " " << img.height() << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data().data()),
            static_cast<std::streamsize>(img.size() * sizeof(Rgb8)));
  if (!out) fail(ErrorCategory::io, "write failed for '" + path.string() + "'");
}

Raster<Rgb8> read_ppm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "'");
  std::string magic;
  int w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  if (magic != "P6" || w <= 0 || h <= 0 || maxval != 255)
    fail(ErrorCategory::format, "'" + path.string() + "' is not a P6/255 image");
  in.get();  // single whitespace after header
  Raster<Rgb8> img(w, h);
  in.read(reinterpret_cast<char*>(img.data().data()),
          static_cast<std::streamsize>(img.size() * sizeof(Rgb8)));
  if (!in) fail(ErrorCategory::format, "truncated image '" + path.string() + "'");
  return img;
}

void write_pgm(const std::filesystem::path& path, const Raster<double>& map) {
  double lo = map.data().front(), hi = lo;
  for (double v : map.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write '" + path.string() + "'");
  out << "P5\n" << map.width() << " " << map.height() << "\n255\n";
  std::string bytes;
  bytes.reserve(map.size());
  for (double v : map.data())
    bytes.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround((v - lo) * scale))));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCategory::io, "write failed for '" + path.string() + "'");
}

Raster<Rgb8> render_overlay(const Raster<double>& base, const Raster<double>& amplitude,
                            double threshold, double strong_threshold) {
  if (!base.same_shape(amplitude))
    fail(ErrorCategory::validation, "overlay base and amplitude maps must be co-registered");
  double lo = base.data().front(), hi = lo;
  for (double v : base.data()) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;

  Raster<Rgb8> img(base.width(), base.height());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const double a = amplitude.data()[i];
    if (a > strong_threshold) {
      img.data()[i] = kStrongColor;
    } else if (a > threshold) {
      img.data()[i] = kWeakColor;
    } else {
      const auto g = static_cast<std::uint8_t>(std::lround((base.data()[i] - lo) * scale));
      img.data()[i] = {g, g, g};
    }
  }
  return img;
}

}  // namespace railmap::image
