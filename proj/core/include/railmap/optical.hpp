#pragma once

#include <cstdint>
#include <vector>

#include "railmap/floorplan.hpp"
#include "railmap/raster.hpp"
#include "railmap/stimulus.hpp"

namespace railmap::optical {

// Objective lens of the scanning microscope. Tile field of view is
// tile_width_px * px_pitch_um across.
struct LensSpec {
  int magnification = 50;  // 5, 20 or 50
  double spot_size_um = 1.0;
  int tile_width_px = 512;
  int tile_height_px = 512;
  double px_pitch_um = 1.0;

  double field_width_um() const noexcept { return tile_width_px * px_pitch_um; }
  double field_height_um() const noexcept { return tile_height_px * px_pitch_um; }
  void validate() const;

  // Shipped defaults: 512x512 tiles with 2000/471/188 µm fields and
  // 10/2.5/1 µm spots for 5x/20x/50x.
  static LensSpec standard(int magnification);
};

// Reflected-light AC/DC modulation depth at the modulation frequency.
// Zero off the modulated rail's footprint: the optical response is local.
struct ModulationDepthMap {
  Raster<double> depth;
  std::string rail_id;
  double frequency_hz = 0.0;
  double grid_pitch_um = 0.0;
};

struct TileOrigin {
  std::int64_t px_x = 0;  // on the lens pixel grid; may be negative when a
  std::int64_t px_y = 0;  // tile overhangs the die (centered single tile)
  double x_um = 0.0;
  double y_um = 0.0;
};

struct TileScan {
  TileOrigin origin;
  Raster<float> amplitude;  // detector units, >= 0
  int dwell_samples = 1;
  double dwell_time_s = 0.0;
};

// LLSI response: depth = reflect_sensitivity * (Vpp/2) / V_nominal on the
// rail footprint. Sine stimulus only.
ModulationDepthMap modulation_depth_map(const floorplan::Floorplan& fp, const std::string& rail_id,
                                        const stimulus::ModulationSpec& spec);

// Row-major tile origins covering the die completely. Origins land on the
// lens pixel grid; 0 <= overlap_fraction < 0.5. A tile larger than the die
// yields one centered tile on that axis.
std::vector<TileOrigin> plan_tiles(const floorplan::Die& die, const LensSpec& lens,
                                   double overlap_fraction);

struct TileAcquireParams {
  int dwell_samples = 1;
  double noise_sigma = 0.0;  // detector units per single sample
  std::uint64_t seed = 0;
  double laser_dc = 1000.0;        // detector units of reflected DC light
  double sample_rate_hz = 2.0e7;   // sets dwell_time_s = dwell/rate
};

// Per-pixel narrow-band amplitude: |gaussian-spot-blurred depth * laser_dc
// + N(0, noise_sigma/sqrt(dwell))|. Gaussian FWHM = spot_size_um,
// truncated at 3 FWHM. Deterministic given the seed.
TileScan acquire_tile(const ModulationDepthMap& depth, const TileOrigin& origin,
                      const LensSpec& lens, const TileAcquireParams& params);

struct StitchResult {
  Raster<double> amplitude;
  Raster<std::uint16_t> coverage;  // samples per pixel
  double px_pitch_um = 0.0;
};

// Whole-die map at the lens pitch; overlaps blend by mean. Coverage gaps
// are an error listing the uncovered bounding boxes.
StitchResult stitch_tiles(const std::vector<TileScan>& tiles, const floorplan::Die& die,
                          const LensSpec& lens);

}  // namespace railmap::optical
