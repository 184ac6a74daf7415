#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "railmap/raster.hpp"

namespace railmap::floorplan {

// Synthetic die geometry. All lengths in µm; the raster pitch defines the
// simulation grid (origin top-left, row-major).
struct Die {
  double width_um = 0.0;
  double height_um = 0.0;
  double grid_pitch_um = 0.0;

  int raster_width() const;
  int raster_height() const;
};

struct Rail {
  std::string id;
  std::string name;
  double nominal_voltage_v = 0.0;
};

enum class RegionKind { supply, logic };

struct Region {
  std::string rail_id;
  RegionKind kind = RegionKind::supply;
  // Axis-aligned rectangle when rect=true, else a simple polygon with
  // even-odd fill. Vertices in µm.
  bool rect = true;
  double x_um = 0.0, y_um = 0.0, w_um = 0.0, h_um = 0.0;
  std::vector<std::array<double, 2>> polygon_um;

  double power_density_uw_per_um2 = 0.0;
  double reflect_sensitivity = 0.0;
  double speckle_fill = 1.0;     // occupied cell fraction (logic only)
  double speckle_pitch_um = 0.0; // cell size (logic only)
  std::string label;             // optional, improves error messages

  bool covers(double px_um, double py_um) const;  // point-in-shape test
  std::string describe(std::size_t index) const;
};

struct MaterialParams {
  double alpha_um2_per_s = 0.0;     // thermal diffusivity
  double emissivity_contrast = 0.0; // in [0,1]

  // µ(f) = sqrt(alpha / (pi f)), the thermal-wave decay length.
  double diffusion_length_um(double frequency_hz) const;
};

struct Floorplan {
  Die die;
  std::vector<Rail> rails;
  std::vector<Region> regions;
  std::uint64_t emissivity_map_seed = 0;
  MaterialParams material;

  const Rail& rail(const std::string& rail_id) const;  // validation error listing known rails
  bool has_rail(const std::string& rail_id) const noexcept;
};

// Parses and fully validates a floorplan document (see the shipped
// scenarios/pch_like.fp for the schema). Throws syntax/validation errors
// naming the offending element.
Floorplan parse_floorplan(std::string_view text, const std::string& source_name = "<floorplan>");
Floorplan load_floorplan(const std::string& path);
std::string serialize_floorplan(const Floorplan& fp);

// Runs every structural invariant check; parse_floorplan calls this.
void validate(const Floorplan& fp);

// All pixels of the region's shape, ignoring speckle occupancy.
Mask rasterize_region_support(const Die& die, const Region& region);

// Pixel true iff inside any region of the rail and, for logic regions,
// inside an occupied speckle cell (deterministic per-region seeding).
Mask rasterize_rail_footprint(const Floorplan& fp, const std::string& rail_id);

// Static mid-IR emissivity pattern in [1-contrast, 1].
Raster<double> render_emissivity_map(const Floorplan& fp);

std::uint64_t region_speckle_seed(const Floorplan& fp, std::size_t region_index);

}  // namespace railmap::floorplan
