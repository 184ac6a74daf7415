#include "railmap/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "railmap/fft.hpp"
#include "railmap/parallel.hpp"
#include "railmap/rng.hpp"

namespace railmap::thermal {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kKernelCutoffMu = 8.0;  // truncate thermal kernel at r = 8 mu
}

PowerMap build_power_map(const floorplan::Floorplan& fp, const std::string& rail_id,
                         const stimulus::ModulationSpec& spec) {
  const Mask footprint = floorplan::rasterize_rail_footprint(fp, rail_id);
  PowerMap pm;
  pm.rail_id = rail_id;
  pm.spec = spec;
  pm.grid_pitch_um = fp.die.grid_pitch_um;
  pm.density_uw_per_um2 = Raster<double>(footprint.width(), footprint.height(), 0.0);

  for (std::size_t i = 0; i < fp.regions.size(); ++i) {
    const auto& region = fp.regions[i];
    if (region.rail_id != rail_id || region.power_density_uw_per_um2 <= 0.0) continue;
    const Mask support = floorplan::rasterize_region_support(fp.die, region);
    for (std::size_t k = 0; k < support.size(); ++k) {
      if (!support.data()[k] || !footprint.data()[k]) continue;
      // same-rail overlaps resolve to the strongest structure
      pm.density_uw_per_um2.data()[k] =
          std::max(pm.density_uw_per_um2.data()[k], region.power_density_uw_per_um2);
    }
  }
  return pm;
}

ThermalResponse thermal_response(const PowerMap& pm, const floorplan::MaterialParams& material,
                                 double gain_uk_per_uw) {
  pm.spec.validate();
  const double f = pm.spec.frequency_hz;
  const double mu_um = material.diffusion_length_um(f);
  const double mu_px = mu_um / pm.grid_pitch_um;

  ThermalResponse tr;
  tr.frequency_hz = f;
  tr.diffusion_length_um = mu_um;
  tr.grid_pitch_um = pm.grid_pitch_um;

  const int w = pm.density_uw_per_um2.width();
  const int h = pm.density_uw_per_um2.height();
  tr.amplitude_uk = Raster<double>(w, h, 0.0);
  tr.phase_rad = Raster<double>(w, h, 0.0);

  const bool all_zero = std::all_of(pm.density_uw_per_um2.data().begin(),
                                    pm.density_uw_per_um2.data().end(),
                                    [](double v) { return v == 0.0; });
  if (all_zero) return tr;  // zero forcing: zero response, phase reported 0

  const int radius = std::max(1, static_cast<int>(std::ceil(kKernelCutoffMu * mu_px)));
  const int kdim = 2 * radius + 1;
  Raster<std::complex<double>> kernel(kdim, kdim, {0.0, 0.0});
  for (int y = 0; y < kdim; ++y) {
    for (int x = 0; x < kdim; ++x) {
      const double dx = x - radius;
      const double dy = y - radius;
      const double r = std::hypot(dx, dy);
      if (r > kKernelCutoffMu * mu_px) continue;
      const double decay = std::exp(-r / mu_px);
      const double lag = r / mu_px;
      kernel.at(x, y) = gain_uk_per_uw * decay * std::complex<double>(std::cos(lag), -std::sin(lag));
    }
  }

  const Raster<std::complex<double>> response = convolve_complex(pm.density_uw_per_um2, kernel);
  for (std::size_t i = 0; i < response.size(); ++i) {
    const std::complex<double> z = response.data()[i];
    const double amp = std::abs(z);
    tr.amplitude_uk.data()[i] = amp;
    tr.phase_rad.data()[i] = amp > 0.0 ? std::arg(z) : 0.0;
  }
  return tr;
}

FrameStack render_ir_frames(const ThermalResponse& tr, const floorplan::Floorplan& fp,
                            const stimulus::ModulationSpec& spec, const IrRenderParams& params) {
  spec.validate();
  const double f = spec.frequency_hz;
  if (params.n_frames < 1) fail(ErrorCategory::validation, "render_ir_frames: n_frames must be >= 1");
  if (params.fps <= 2.0 * f)
    fail(ErrorCategory::validation, "render_ir_frames: fps must exceed twice the modulation frequency");
  const double periods = params.n_frames / params.fps * f;
  if (periods < 4.0)
    fail(ErrorCategory::validation, "render_ir_frames: stack must cover at least 4 modulation periods");

  const int w = tr.amplitude_uk.width();
  const int h = tr.amplitude_uk.height();
  const Raster<double> emissivity = floorplan::render_emissivity_map(fp);
  if (!emissivity.same_shape(tr.amplitude_uk))
    fail(ErrorCategory::validation, "render_ir_frames: response and floorplan rasters disagree");

  // frame(t) = e .* (dc + A sin(wt + phi)) + noise
  //          = e*dc + (e A cos phi) sin(wt) + (e A sin phi) cos(wt) + noise
  const std::size_t n_px = tr.amplitude_uk.size();
  std::vector<double> dc_term(n_px), sin_coef(n_px), cos_coef(n_px);
  for (std::size_t i = 0; i < n_px; ++i) {
    const double e = emissivity.data()[i];
    const double a = tr.amplitude_uk.data()[i];
    const double phi = tr.phase_rad.data()[i];
    dc_term[i] = e * params.dc_background;
    sin_coef[i] = e * a * std::cos(phi);
    cos_coef[i] = e * a * std::sin(phi);
  }

  FrameStack fs;
  fs.width = w;
  fs.height = h;
  fs.fps = params.fps;
  fs.t0 = 0.0;
  fs.integer_periods = std::abs(periods - std::round(periods)) < 1e-9;
  fs.frames.assign(params.n_frames, Raster<float>());

  parallel_for(params.n_frames, [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t k = begin; k < end; ++k) {
      const double t = static_cast<double>(k) / params.fps;
      const double s = std::sin(kTwoPi * f * t + spec.phase_rad);
      const double c = std::cos(kTwoPi * f * t + spec.phase_rad);
      Raster<float> frame(w, h);
      Xoshiro256pp rng(mix_seed(params.seed, static_cast<std::uint64_t>(k)));
      float* out = frame.data().data();
      if (params.noise_sigma > 0.0) {
        for (std::size_t i = 0; i < n_px; ++i)
          out[i] = static_cast<float>(dc_term[i] + sin_coef[i] * s + cos_coef[i] * c +
                                      params.noise_sigma * rng.normal());
      } else {
        for (std::size_t i = 0; i < n_px; ++i)
          out[i] = static_cast<float>(dc_term[i] + sin_coef[i] * s + cos_coef[i] * c);
      }
      fs.frames[static_cast<std::size_t>(k)] = std::move(frame);
    }
  });
  return fs;
}

}  // namespace railmap::thermal
