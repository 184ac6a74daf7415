#include <doctest.h>

#include <cmath>

#include "railmap/optical.hpp"
#include "railmap/rng.hpp"
#include "support/stats.hpp"

using namespace railmap;
using floorplan::Floorplan;
using stimulus::ModulationSpec;
using stimulus::Waveform;

namespace {

Floorplan llsi_die() {
  Floorplan fp;
  fp.die = {1000.0, 1000.0, 10.0};
  fp.material = {62831.853, 0.25};
  fp.emissivity_map_seed = 5;
  fp.rails.push_back({"a", "rail_a", 0.82});
  fp.rails.push_back({"b", "rail_b", 0.82});
  floorplan::Region ra;
  ra.rail_id = "a";
  ra.kind = floorplan::RegionKind::supply;
  ra.x_um = 100.0;
  ra.y_um = 100.0;
  ra.w_um = 300.0;
  ra.h_um = 300.0;
  ra.reflect_sensitivity = 0.2;
  fp.regions.push_back(ra);
  floorplan::Region rb = ra;
  rb.rail_id = "b";
  rb.x_um = 600.0;
  rb.y_um = 600.0;
  fp.regions.push_back(rb);
  floorplan::validate(fp);
  return fp;
}

ModulationSpec llsi_spec(double vpp = 0.1) {
  return {Waveform::sine, 2.0e6, vpp, 0.82, 0.0};
}

}  // namespace

TEST_CASE("modulation depth follows reflect_sensitivity * ripple / nominal") {
  const Floorplan fp = llsi_die();
  const auto depth = optical::modulation_depth_map(fp, "a", llsi_spec());
  // 0.2 * 0.05 / 0.82
  const double expected = 0.2 * 0.05 / 0.82;
  CHECK(depth.depth.at(20, 20) == doctest::Approx(expected).epsilon(1e-9));
  CHECK(expected == doctest::Approx(0.0122).epsilon(0.01));

  // zero off the rail footprint, including on the other rail
  CHECK(depth.depth.at(70, 70) == 0.0);
  CHECK(depth.depth.at(5, 5) == 0.0);
}

TEST_CASE("depth map is linear in Vpp and zero for Vpp = 0") {
  const Floorplan fp = llsi_die();
  const auto d1 = optical::modulation_depth_map(fp, "a", llsi_spec(0.05));
  const auto d2 = optical::modulation_depth_map(fp, "a", llsi_spec(0.1));
  for (std::size_t i = 0; i < d1.depth.size(); ++i)
    CHECK(d2.depth.data()[i] == doctest::Approx(2.0 * d1.depth.data()[i]).epsilon(1e-12));

  const auto d0 = optical::modulation_depth_map(fp, "a", llsi_spec(0.0));
  for (double v : d0.depth.data()) CHECK(v == 0.0);
}

TEST_CASE("pch_like LLSI-visible footprint covers 16.3% of the die") {
  const Floorplan fp =
      floorplan::load_floorplan(std::string(RAILMAP_SCENARIO_DIR) + "/pch_like.fp");
  const auto depth = optical::modulation_depth_map(fp, "core_prim", llsi_spec());
  std::int64_t nonzero = 0;
  for (double v : depth.depth.data()) nonzero += v > 0.0;
  const double fraction = static_cast<double>(nonzero) / depth.depth.size();
  CHECK(fraction == doctest::Approx(0.163).epsilon(0.012));
}

TEST_CASE("square stimulus is rejected on the LLSI path") {
  const Floorplan fp = llsi_die();
  ModulationSpec square{Waveform::square, 50.0, 0.82, 0.41, 0.0};
  CHECK_THROWS_AS(optical::modulation_depth_map(fp, "a", square), Error);
}

TEST_CASE("plan_tiles: exact fit, 20x reference arithmetic, centered oversize tile") {
  optical::LensSpec lens = optical::LensSpec::standard(20);

  // die exactly one tile: a single origin at (0,0)
  floorplan::Die one_tile{lens.field_width_um(), lens.field_height_um(), 10.0};
  const auto single = optical::plan_tiles(one_tile, lens, 0.0);
  REQUIRE(single.size() == 1);
  CHECK(single[0].px_x == 0);
  CHECK(single[0].px_y == 0);

  // 8 x 12 mm die with the 471 um field, no overlap: 17 x 26 tiles
  floorplan::Die die{8000.0, 12000.0, 10.0};
  const auto tiles = optical::plan_tiles(die, lens, 0.0);
  CHECK(tiles.size() == 17 * 26);

  // tile larger than the die: single centered tile (negative origin)
  floorplan::Die small{100.0, 100.0, 10.0};
  optical::LensSpec lens50 = optical::LensSpec::standard(50);
  const auto centered = optical::plan_tiles(small, lens50, 0.0);
  REQUIRE(centered.size() == 1);
  CHECK(centered[0].px_x < 0);

  CHECK_THROWS_AS(optical::plan_tiles(die, lens, 0.5), Error);
}

TEST_CASE("plan_tiles covers every die pixel for all valid overlaps") {
  optical::LensSpec lens;
  lens.magnification = 20;
  lens.spot_size_um = 2.5;
  lens.tile_width_px = 64;
  lens.tile_height_px = 48;
  lens.px_pitch_um = 1.0;
  floorplan::Die die{331.0, 257.0, 1.0};
  for (double overlap : {0.0, 0.1, 0.25, 0.49}) {
    const auto tiles = optical::plan_tiles(die, lens, overlap);
    Raster<std::uint8_t> covered(331, 257, 0);
    for (const auto& t : tiles)
      for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) {
          const auto gx = t.px_x + x;
          const auto gy = t.px_y + y;
          if (gx >= 0 && gy >= 0 && gx < 331 && gy < 257)
            covered.at(static_cast<int>(gx), static_cast<int>(gy)) = 1;
        }
    CHECK(count_true(covered) == 331 * 257);
  }
}

TEST_CASE("acquire_tile: zero depth and zero noise give a zero tile") {
  optical::ModulationDepthMap depth;
  depth.grid_pitch_um = 10.0;
  depth.depth = Raster<double>(100, 100, 0.0);
  optical::LensSpec lens = optical::LensSpec::standard(50);
  const auto tile = optical::acquire_tile(depth, {0, 0, 0.0, 0.0}, lens, {1, 0.0, 9, 1000.0, 2e7});
  for (float v : tile.amplitude.data()) CHECK(v == 0.0f);

  // a tile entirely off the die is an error
  CHECK_THROWS_AS(
      optical::acquire_tile(depth, {2000, 2000, 20000.0, 20000.0}, lens, {1, 0.0, 9, 1000.0, 2e7}),
      Error);
}

TEST_CASE("acquire_tile noise scales as 1/sqrt(dwell)") {
  optical::ModulationDepthMap depth;
  depth.grid_pitch_um = 10.0;
  depth.depth = Raster<double>(200, 200, 0.0);
  optical::LensSpec lens;
  lens.magnification = 50;
  lens.spot_size_um = 1e-6;  // negligible blur: keep the noise white
  lens.tile_width_px = 128;
  lens.tile_height_px = 128;
  lens.px_pitch_um = 1.0;

  optical::TileAcquireParams p1{1, 6.0, 31, 1000.0, 2e7};
  optical::TileAcquireParams p100{100, 6.0, 32, 1000.0, 2e7};
  const auto t1 = optical::acquire_tile(depth, {0, 0, 0.0, 0.0}, lens, p1);
  const auto t100 = optical::acquire_tile(depth, {0, 0, 0.0, 0.0}, lens, p100);

  std::vector<double> v1(t1.amplitude.data().begin(), t1.amplitude.data().end());
  std::vector<double> v100(t100.amplitude.data().begin(), t100.amplitude.data().end());
  // 16k pixels each; amplitudes are |noise|, the scale ratio is sqrt(100)
  const double ratio = testsupport::sample_std(v1) / testsupport::sample_std(v100);
  CHECK(ratio == doctest::Approx(10.0).epsilon(0.10));
}

TEST_CASE("single bright pixel blurs to the spot FWHM") {
  optical::ModulationDepthMap depth;
  depth.grid_pitch_um = 0.5;
  depth.depth = Raster<double>(64, 64, 0.0);
  depth.depth.at(32, 32) = 1.0;
  optical::LensSpec lens;
  lens.magnification = 50;
  lens.spot_size_um = 1.0;  // 2 px at 0.5 um pitch
  lens.tile_width_px = 64;
  lens.tile_height_px = 64;
  lens.px_pitch_um = 0.5;

  const auto tile = optical::acquire_tile(depth, {0, 0, 0.0, 0.0}, lens, {1, 0.0, 9, 1000.0, 2e7});
  // measure FWHM by linear interpolation of the half-maximum crossings
  const int py = 32;
  float peak = 0;
  int px = 0;
  for (int x = 0; x < 64; ++x)
    if (tile.amplitude.at(x, py) > peak) {
      peak = tile.amplitude.at(x, py);
      px = x;
    }
  const double half = peak / 2.0;
  auto crossing = [&](int dir) {
    for (int x = px; x > 0 && x < 63; x += dir) {
      const double a = tile.amplitude.at(x, py);
      const double b = tile.amplitude.at(x + dir, py);
      if (a >= half && b < half) return x + dir * (a - half) / (a - b);
    }
    return static_cast<double>(px);
  };
  const double fwhm_px = crossing(+1) - crossing(-1);
  CHECK(fwhm_px == doctest::Approx(2.0).epsilon(0.25));  // 2 px +- 0.5
}

TEST_CASE("split-then-stitch reproduces the map bit-identically") {
  optical::LensSpec lens;
  lens.magnification = 20;
  lens.spot_size_um = 2.5;
  lens.tile_width_px = 32;
  lens.tile_height_px = 32;
  lens.px_pitch_um = 1.0;
  floorplan::Die die{128.0, 96.0, 1.0};

  Raster<float> original(128, 96);
  Xoshiro256pp rng(77);
  for (auto& v : original.data()) v = static_cast<float>(rng.uniform01() * 100.0);

  std::vector<optical::TileScan> tiles;
  for (const auto& origin : optical::plan_tiles(die, lens, 0.0)) {
    optical::TileScan t;
    t.origin = origin;
    t.amplitude = Raster<float>(32, 32);
    for (int y = 0; y < 32; ++y)
      for (int x = 0; x < 32; ++x)
        t.amplitude.at(x, y) = original.at(static_cast<int>(origin.px_x) + x,
                                           static_cast<int>(origin.px_y) + y);
    t.dwell_samples = 1;
    tiles.push_back(std::move(t));
  }
  const auto stitched = optical::stitch_tiles(tiles, die, lens);
  REQUIRE(stitched.amplitude.same_shape(original));
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(stitched.amplitude.data()[i] == static_cast<double>(original.data()[i]));
    CHECK(stitched.coverage.data()[i] == 1);
  }
}

TEST_CASE("overlapping tiles blend by mean; gaps are an error naming boxes") {
  optical::LensSpec lens;
  lens.magnification = 20;
  lens.spot_size_um = 2.5;
  lens.tile_width_px = 32;
  lens.tile_height_px = 32;
  lens.px_pitch_um = 1.0;
  floorplan::Die die{48.0, 32.0, 1.0};

  optical::TileScan a;
  a.origin = {0, 0, 0.0, 0.0};
  a.amplitude = Raster<float>(32, 32, 1.0f);
  optical::TileScan b;
  b.origin = {16, 0, 16.0, 0.0};
  b.amplitude = Raster<float>(32, 32, 3.0f);
  const auto stitched = optical::stitch_tiles({a, b}, die, lens);
  CHECK(stitched.amplitude.at(8, 8) == 1.0);   // only tile a
  CHECK(stitched.amplitude.at(24, 8) == 2.0);  // overlap strip: mean of 1 and 3
  CHECK(stitched.amplitude.at(40, 8) == 3.0);  // only tile b

  // remove tile b: uncovered pixels reported with a bounding box
  try {
    optical::stitch_tiles({a}, die, lens);
    FAIL("expected coverage error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::validation);
    CHECK(std::string(e.what()).find("uncovered") != std::string::npos);
  }
}
