#include <benchmark/benchmark.h>

#include "railmap/thermal.hpp"

namespace {

railmap::floorplan::Floorplan square_die(double side_um, double pitch_um) {
  railmap::floorplan::Floorplan fp;
  fp.die = {side_um, side_um, pitch_um};
  fp.material = {2.5e5, 0.25};
  fp.rails.push_back({"r0", "rail0", 0.82});
  railmap::floorplan::Region region;
  region.rail_id = "r0";
  region.kind = railmap::floorplan::RegionKind::supply;
  region.x_um = side_um * 0.25;
  region.y_um = side_um * 0.25;
  region.w_um = side_um * 0.5;
  region.h_um = side_um * 0.5;
  region.power_density_uw_per_um2 = 2.0;
  fp.regions.push_back(region);
  return fp;
}

void ThermalResponseKernel(benchmark::State& state) {
  const double side = static_cast<double>(state.range(0)) * 10.0;
  const auto fp = square_die(side, 10.0);
  railmap::stimulus::ModulationSpec spec{railmap::stimulus::Waveform::square, 50.0, 0.82, 0.41, 0.0};
  const auto pm = railmap::thermal::build_power_map(fp, "r0", spec);
  for (auto _ : state) {
    auto tr = railmap::thermal::thermal_response(pm, fp.material);
    benchmark::DoNotOptimize(tr.amplitude_uk.data().data());
  }
}
BENCHMARK(ThermalResponseKernel)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void RenderIrFrames(benchmark::State& state) {
  const auto fp = square_die(1280.0, 10.0);
  railmap::stimulus::ModulationSpec spec{railmap::stimulus::Waveform::square, 50.0, 0.82, 0.41, 0.0};
  const auto pm = railmap::thermal::build_power_map(fp, "r0", spec);
  const auto tr = railmap::thermal::thermal_response(pm, fp.material);
  railmap::thermal::IrRenderParams params;
  params.n_frames = static_cast<int>(state.range(0));
  params.fps = 400.0;
  params.noise_sigma = 10.0;
  params.seed = 7;
  for (auto _ : state) {
    auto fs = railmap::thermal::render_ir_frames(tr, fp, spec, params);
    benchmark::DoNotOptimize(fs.frames.data());
  }
}
BENCHMARK(RenderIrFrames)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace
