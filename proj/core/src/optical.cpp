#include "railmap/optical.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "railmap/ccl.hpp"
#include "railmap/rng.hpp"

namespace railmap::optical {

namespace {
// FWHM = 2*sqrt(2 ln 2) * sigma
constexpr double kFwhmPerSigma = 2.3548200450309493;
}

void LensSpec::validate() const {
  if (magnification != 5 && magnification != 20 && magnification != 50)
    fail(ErrorCategory::validation, "lens magnification must be 5, 20 or 50");
  if (spot_size_um <= 0) fail(ErrorCategory::validation, "lens spot_size_um must be positive");
  if (tile_width_px < 1 || tile_height_px < 1 || px_pitch_um <= 0)
    fail(ErrorCategory::validation, "lens tile geometry must be positive");
}

LensSpec LensSpec::standard(int magnification) {
  LensSpec lens;
  lens.magnification = magnification;
  lens.tile_width_px = 512;
  lens.tile_height_px = 512;
  switch (magnification) {
    case 5:
      lens.spot_size_um = 10.0;
      lens.px_pitch_um = 2000.0 / 512.0;
      break;
    case 20:
      lens.spot_size_um = 2.5;
      lens.px_pitch_um = 471.0 / 512.0;
      break;
    case 50:
      lens.spot_size_um = 1.0;
      lens.px_pitch_um = 188.0 / 512.0;
      break;
    default:
      fail(ErrorCategory::validation, "lens magnification must be 5, 20 or 50");
  }
  return lens;
}

ModulationDepthMap modulation_depth_map(const floorplan::Floorplan& fp, const std::string& rail_id,
                                        const stimulus::ModulationSpec& spec) {
  spec.validate();
  if (spec.waveform != stimulus::Waveform::sine)
    fail(ErrorCategory::validation, "LLSI modulation depth requires a sine stimulus");
  const floorplan::Rail& rail = fp.rail(rail_id);

  const Mask footprint = floorplan::rasterize_rail_footprint(fp, rail_id);
  ModulationDepthMap out;
  out.rail_id = rail_id;
  out.frequency_hz = spec.frequency_hz;
  out.grid_pitch_um = fp.die.grid_pitch_um;
  out.depth = Raster<double>(footprint.width(), footprint.height(), 0.0);

  const double ripple = 0.5 * spec.amplitude_vpp / rail.nominal_voltage_v;
  for (std::size_t i = 0; i < fp.regions.size(); ++i) {
    const auto& region = fp.regions[i];
    if (region.rail_id != rail_id || region.reflect_sensitivity <= 0.0) continue;
    const Mask support = floorplan::rasterize_region_support(fp.die, region);
    const double depth = region.reflect_sensitivity * ripple;
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (!support.data()[k] || !footprint.data()[k]) continue;
      out.depth.data()[k] = std::max(out.depth.data()[k], depth);
    }
  }
  return out;
}

std::vector<TileOrigin> plan_tiles(const floorplan::Die& die, const LensSpec& lens,
                                   double overlap_fraction) {
  lens.validate();
  if (overlap_fraction < 0.0 || overlap_fraction >= 0.5)
    fail(ErrorCategory::validation, "overlap_fraction must be in [0, 0.5)");

  // everything on the lens pixel grid: exact coverage, exact stitching
  const auto die_w_px = static_cast<std::int64_t>(std::ceil(die.width_um / lens.px_pitch_um));
  const auto die_h_px = static_cast<std::int64_t>(std::ceil(die.height_um / lens.px_pitch_um));

  const auto axis_origins = [overlap_fraction](std::int64_t die_px, std::int64_t field_px) {
    std::vector<std::int64_t> origins;
    if (die_px <= field_px) {
      origins.push_back((die_px - field_px) / 2);  // single centered tile
      return origins;
    }
    const auto stride =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(field_px * (1.0 - overlap_fraction))));
    const std::int64_t span = die_px - field_px;
    const std::int64_t count = (span + stride - 1) / stride + 1;
    origins.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) origins.push_back(std::min(i * stride, span));
    return origins;
  };

  const auto xs = axis_origins(die_w_px, lens.tile_width_px);
  const auto ys = axis_origins(die_h_px, lens.tile_height_px);

  std::vector<TileOrigin> tiles;
  tiles.reserve(xs.size() * ys.size());
  for (const auto y : ys) {
    for (const auto x : xs) {
      TileOrigin o;
      o.px_x = x;
      o.px_y = y;
      o.x_um = static_cast<double>(x) * lens.px_pitch_um;
      o.y_um = static_cast<double>(y) * lens.px_pitch_um;
      tiles.push_back(o);
    }
  }
  return tiles;
}

TileScan acquire_tile(const ModulationDepthMap& depth, const TileOrigin& origin,
                      const LensSpec& lens, const TileAcquireParams& params) {
  lens.validate();
  if (params.dwell_samples < 1) fail(ErrorCategory::validation, "dwell_samples must be >= 1");
  const double die_w_um = depth.depth.width() * depth.grid_pitch_um;
  const double die_h_um = depth.depth.height() * depth.grid_pitch_um;
  if (origin.x_um >= die_w_um || origin.y_um >= die_h_um ||
      origin.x_um + lens.field_width_um() <= 0.0 || origin.y_um + lens.field_height_um() <= 0.0)
    fail(ErrorCategory::validation, "tile origin places the tile entirely outside the die");

  const int tw = lens.tile_width_px;
  const int th = lens.tile_height_px;

  // sample the depth field at tile pixel centers (bilinear, zero outside)
  const auto sample_depth = [&](double x_um, double y_um) -> double {
    const double u = x_um / depth.grid_pitch_um - 0.5;
    const double v = y_um / depth.grid_pitch_um - 0.5;
    const int x0 = static_cast<int>(std::floor(u));
    const int y0 = static_cast<int>(std::floor(v));
    const double fx = u - x0;
    const double fy = v - y0;
    const auto tap = [&](int x, int y) -> double {
      return depth.depth.contains(x, y) ? depth.depth.at(x, y) : 0.0;
    };
    return (1 - fx) * (1 - fy) * tap(x0, y0) + fx * (1 - fy) * tap(x0 + 1, y0) +
           (1 - fx) * fy * tap(x0, y0 + 1) + fx * fy * tap(x0 + 1, y0 + 1);
  };

  // separable gaussian spot, truncated at 3 FWHM; the field is sampled
  // with a margin so the blur sees real structure past the tile border
  const double sigma_px = lens.spot_size_um / kFwhmPerSigma / lens.px_pitch_um;
  const int radius = sigma_px > 1e-3
                         ? static_cast<int>(std::ceil(3.0 * lens.spot_size_um / lens.px_pitch_um))
                         : 0;
  const int ew = tw + 2 * radius;
  const int eh = th + 2 * radius;
  Raster<double> field(ew, eh, 0.0);
  for (int y = 0; y < eh; ++y) {
    const double y_um = origin.y_um + (y - radius + 0.5) * lens.px_pitch_um;
    for (int x = 0; x < ew; ++x) {
      const double x_um = origin.x_um + (x - radius + 0.5) * lens.px_pitch_um;
      field.at(x, y) = sample_depth(x_um, y_um) * params.laser_dc;
    }
  }

  if (radius >= 1) {
    std::vector<double> taps(static_cast<std::size_t>(2 * radius + 1));
    double norm = 0.0;
    for (int i = -radius; i <= radius; ++i) {
      const double v = std::exp(-0.5 * (i / sigma_px) * (i / sigma_px));
      taps[static_cast<std::size_t>(i + radius)] = v;
      norm += v;
    }
    for (auto& t : taps) t /= norm;

    Raster<double> tmp(ew, eh, 0.0);
    for (int y = 0; y < eh; ++y)
      for (int x = radius; x < ew - radius; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += taps[static_cast<std::size_t>(i + radius)] * field.at(x + i, y);
        tmp.at(x, y) = acc;
      }
    for (int y = radius; y < eh - radius; ++y)
      for (int x = radius; x < ew - radius; ++x) {
        double acc = 0.0;
        for (int i = -radius; i <= radius; ++i)
          acc += taps[static_cast<std::size_t>(i + radius)] * tmp.at(x, y + i);
        field.at(x, y) = acc;
      }
  }

  TileScan scan;
  scan.origin = origin;
  scan.dwell_samples = params.dwell_samples;
  scan.dwell_time_s = params.dwell_samples / params.sample_rate_hz;
  scan.amplitude = Raster<float>(tw, th);
  const double sigma = params.noise_sigma / std::sqrt(static_cast<double>(params.dwell_samples));
  Xoshiro256pp rng(params.seed);
  for (int y = 0; y < th; ++y) {
    for (int x = 0; x < tw; ++x) {
      const double clean = field.at(x + radius, y + radius);
      const double noisy = sigma > 0.0 ? clean + sigma * rng.normal() : clean;
      scan.amplitude.at(x, y) = static_cast<float>(std::abs(noisy));
    }
  }
  return scan;
}

StitchResult stitch_tiles(const std::vector<TileScan>& tiles, const floorplan::Die& die,
                          const LensSpec& lens) {
  lens.validate();
  if (tiles.empty()) fail(ErrorCategory::validation, "no tiles to stitch");
  const int out_w = static_cast<int>(std::ceil(die.width_um / lens.px_pitch_um));
  const int out_h = static_cast<int>(std::ceil(die.height_um / lens.px_pitch_um));

  Raster<double> sum(out_w, out_h, 0.0);
  Raster<std::uint16_t> coverage(out_w, out_h, 0);
  for (const auto& tile : tiles) {
    if (!tile.amplitude.same_shape(lens.tile_width_px, lens.tile_height_px))
      fail(ErrorCategory::validation, "tile dimensions disagree with the lens spec");
    for (int y = 0; y < tile.amplitude.height(); ++y) {
      const std::int64_t gy = tile.origin.px_y + y;
      if (gy < 0 || gy >= out_h) continue;
      for (int x = 0; x < tile.amplitude.width(); ++x) {
        const std::int64_t gx = tile.origin.px_x + x;
        if (gx < 0 || gx >= out_w) continue;
        sum.at(static_cast<int>(gx), static_cast<int>(gy)) += tile.amplitude.at(x, y);
        ++coverage.at(static_cast<int>(gx), static_cast<int>(gy));
      }
    }
  }

  Mask uncovered(out_w, out_h, 0);
  std::int64_t gaps = 0;
  for (std::size_t i = 0; i < coverage.size(); ++i) {
    if (coverage.data()[i] == 0) {
      uncovered.data()[i] = 1;
      ++gaps;
    }
  }
  if (gaps > 0) {
    const Labeling gap_components = connected_components(uncovered);
    std::string boxes;
    const std::size_t n_report = std::min<std::size_t>(gap_components.components.size(), 8);
    for (std::size_t i = 0; i < n_report; ++i) {
      const auto& c = gap_components.components[i];
      boxes += " [" + std::to_string(c.min_x) + "," + std::to_string(c.min_y) + " .. " +
               std::to_string(c.max_x) + "," + std::to_string(c.max_y) + "]";
    }
    if (gap_components.components.size() > n_report) boxes += " ...";
    fail(ErrorCategory::validation,
         "tiles do not cover the die: " + std::to_string(gaps) + " uncovered pixels in " +
             std::to_string(gap_components.components.size()) + " boxes:" + boxes);
  }

  StitchResult out;
  out.px_pitch_um = lens.px_pitch_um;
  out.coverage = std::move(coverage);
  out.amplitude = std::move(sum);
  for (std::size_t i = 0; i < out.amplitude.size(); ++i)
    out.amplitude.data()[i] /= static_cast<double>(out.coverage.data()[i]);
  return out;
}

}  // namespace railmap::optical
