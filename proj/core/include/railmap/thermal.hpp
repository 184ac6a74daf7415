#pragma once

#include <cstdint>

#include "railmap/floorplan.hpp"
#include "railmap/framestack.hpp"
#include "railmap/raster.hpp"
#include "railmap/stimulus.hpp"

namespace railmap::thermal {

// Dissipated power density (µW/µm²) of one modulated rail at the die pitch.
struct PowerMap {
  Raster<double> density_uw_per_um2;
  std::string rail_id;
  stimulus::ModulationSpec spec;
  double grid_pitch_um = 0.0;
};

// Steady periodic surface response at the modulation fundamental.
struct ThermalResponse {
  Raster<double> amplitude_uk;  // >= 0
  Raster<double> phase_rad;     // (-pi, pi], 0 where amplitude is 0
  double frequency_hz = 0.0;
  double diffusion_length_um = 0.0;
  double grid_pitch_um = 0.0;
};

PowerMap build_power_map(const floorplan::Floorplan& fp, const std::string& rail_id,
                         const stimulus::ModulationSpec& spec);

// Thermal-wave spreading: complex kernel exp(-r/mu) * exp(-i r/mu) with
// mu = sqrt(alpha/(pi f)), truncated at r = 8 mu and calibrated so that an
// isolated pixel of density p responds with amplitude gain_uk_per_uw * p.
ThermalResponse thermal_response(const PowerMap& pm, const floorplan::MaterialParams& material,
                                 double gain_uk_per_uw = 1.0);

struct IrRenderParams {
  int n_frames = 0;
  double fps = 0.0;
  double noise_sigma = 0.0;  // detector units, i.i.d. per pixel per frame
  std::uint64_t seed = 0;
  double dc_background = 1000.0;  // detector units
};

// Noisy IR camera frames: emissivity .* (dc + A*sin(2pi f t + phase)) + noise.
// Requires fps > 2f and at least 4 whole periods in the stack.
FrameStack render_ir_frames(const ThermalResponse& tr, const floorplan::Floorplan& fp,
                            const stimulus::ModulationSpec& spec, const IrRenderParams& params);

}  // namespace railmap::thermal
