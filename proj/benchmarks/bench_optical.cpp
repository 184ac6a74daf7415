#include <benchmark/benchmark.h>

#include "railmap/optical.hpp"
#include "railmap/rng.hpp"

namespace {

void AcquireTile(benchmark::State& state) {
  railmap::optical::ModulationDepthMap depth;
  depth.grid_pitch_um = 10.0;
  depth.depth = railmap::Raster<double>(800, 800, 0.0);
  railmap::Xoshiro256pp rng(3);
  for (auto& v : depth.depth.data()) v = rng.uniform01() < 0.2 ? 0.012 : 0.0;

  const auto lens = railmap::optical::LensSpec::standard(static_cast<int>(state.range(0)));
  railmap::optical::TileOrigin origin{0, 0, 0.0, 0.0};
  railmap::optical::TileAcquireParams params;
  params.dwell_samples = 16;
  params.noise_sigma = 8.0;
  params.seed = 11;
  for (auto _ : state) {
    auto tile = railmap::optical::acquire_tile(depth, origin, lens, params);
    benchmark::DoNotOptimize(tile.amplitude.data().data());
  }
}
BENCHMARK(AcquireTile)->Arg(5)->Arg(20)->Arg(50)->Unit(benchmark::kMillisecond);

}  // namespace
