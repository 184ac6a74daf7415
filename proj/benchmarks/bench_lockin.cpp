#include <benchmark/benchmark.h>

#include <cmath>

#include "railmap/lockin.hpp"
#include "railmap/rng.hpp"

namespace {

railmap::FrameStack synthetic_stack(int width, int height, int n_frames, double fps, double f) {
  railmap::FrameStack fs;
  fs.width = width;
  fs.height = height;
  fs.fps = fps;
  railmap::Xoshiro256pp rng(42);
  for (int k = 0; k < n_frames; ++k) {
    railmap::Raster<float> frame(width, height);
    const double s = std::sin(2.0 * M_PI * f * k / fps);
    for (auto& v : frame.data()) v = static_cast<float>(1000.0 + 5.0 * s + rng.normal());
    fs.frames.push_back(std::move(frame));
  }
  return fs;
}

void DemodulateFrames(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const auto fs = synthetic_stack(dim, dim, 256, 400.0, 50.0);
  for (auto _ : state) {
    auto result = railmap::lockin::lockin_demodulate(fs, 50.0);
    benchmark::DoNotOptimize(result.amplitude.data().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(dim) * dim * 256);
}
BENCHMARK(DemodulateFrames)->Arg(64)->Arg(128)->Arg(256);

void PointBandFilter(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  std::vector<double> samples(n);
  for (std::size_t k = 0; k < n; ++k) samples[k] = std::sin(2.0 * M_PI * 1.0e4 * k / 1.0e5);
  railmap::lockin::BandFilterSpec band{1.0e4, 200.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(railmap::lockin::eofm_point_filter(samples, 1.0e5, band));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(PointBandFilter)->Arg(1 << 16)->Arg(1 << 18);

}  // namespace
