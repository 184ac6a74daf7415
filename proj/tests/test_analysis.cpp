#include <doctest.h>

#include <cmath>

#include "railmap/analysis.hpp"
#include "railmap/rng.hpp"
#include "support/stats.hpp"

using namespace railmap;
using analysis::RegionLabel;

TEST_CASE("MAD sigma estimate: unit gaussian map reads 1.0 +- 0.01") {
  Raster<double> map(1000, 1000);
  Xoshiro256pp rng(101);
  for (auto& v : map.data()) v = rng.normal();
  CHECK(analysis::estimate_noise_sigma(map) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("MAD sigma estimate is robust to 1% huge outliers") {
  Raster<double> map(1000, 1000);
  Xoshiro256pp rng(102);
  for (auto& v : map.data()) v = 2.0 * rng.normal();
  for (std::size_t i = 0; i < map.size(); i += 100) map.data()[i] = 1e6;
  CHECK(analysis::estimate_noise_sigma(map) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("MAD sigma: constant map reads 0; masked variants behave") {
  Raster<double> map(64, 64, 5.0);
  CHECK(analysis::estimate_noise_sigma(map) == 0.0);

  Mask empty(64, 64, 0);
  CHECK_THROWS_AS(analysis::estimate_noise_sigma(map, &empty), Error);

  // background mask excludes a bright block
  Raster<double> mixed(64, 64, 0.0);
  Mask background(64, 64, 1);
  Xoshiro256pp rng(103);
  for (auto& v : mixed.data()) v = rng.normal();
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) {
      mixed.at(x, y) = 1000.0;
      background.at(x, y) = 0;
    }
  CHECK(analysis::estimate_noise_sigma(mixed, &background) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("threshold classification: exact mask, components, exact fraction sum") {
  Raster<double> map(100, 100, 0.0);
  // two separated blobs at 10 sigma
  for (int y = 10; y < 20; ++y)
    for (int x = 10; x < 20; ++x) map.at(x, y) = 10.0;
  for (int y = 60; y < 70; ++y)
    for (int x = 60; x < 80; ++x) map.at(x, y) = 10.0;

  const auto r = analysis::classify_threshold(map, 3.0, 1.0);
  CHECK(count_true(r.affected_mask) == 100 + 200);
  CHECK(r.components.size() == 2);
  CHECK(r.affected_fraction == doctest::Approx(0.03));
  CHECK(r.affected_fraction + r.search_space_reduction == 1.0);  // exact

  std::int64_t total = 0;
  for (const auto& c : r.components) total += c.pixel_count;
  CHECK(total == count_true(r.affected_mask));
}

TEST_CASE("classification is monotone in k_sigma") {
  Raster<double> map(128, 128);
  Xoshiro256pp rng(104);
  for (auto& v : map.data()) v = std::abs(rng.normal());
  const auto r1 = analysis::classify_threshold(map, 1.0, 1.0);
  const auto r2 = analysis::classify_threshold(map, 2.0, 1.0);
  for (std::size_t i = 0; i < map.size(); ++i)
    if (r2.affected_mask.data()[i]) CHECK(r1.affected_mask.data()[i]);
}

TEST_CASE("zero map classifies to an empty mask with reduction 1.0") {
  Raster<double> map(64, 64, 0.0);
  const double sigma = analysis::estimate_noise_sigma(map);
  const auto r = analysis::classify_threshold(map, 3.0, sigma);
  CHECK(count_true(r.affected_mask) == 0);
  CHECK(r.affected_fraction == 0.0);
  CHECK(r.search_space_reduction == 1.0);
}

TEST_CASE("texture labeling separates solid from sprinkled regions") {
  Mask mask(200, 200, 0);
  // solid rectangle
  for (int y = 20; y < 60; ++y)
    for (int x = 20; x < 60; ++x) mask.at(x, y) = 1;
  // checkerboard block, away from the solid one
  for (int y = 120; y < 180; ++y)
    for (int x = 120; x < 180; ++x) mask.at(x, y) = ((x + y) % 2 == 0) ? 1 : 0;

  Raster<double> amp(200, 200, 0.0);
  for (int y = 0; y < 200; ++y)
    for (int x = 0; x < 200; ++x) amp.at(x, y) = mask.at(x, y) ? 10.0 : 0.0;

  auto r = analysis::classify_threshold(amp, 3.0, 1.0);
  analysis::label_texture(r, 10.0, 1.0, 0.9);  // 10 px window

  bool saw_supply = false, saw_logic = false;
  for (const auto& c : r.components) {
    if (c.min_x < 100 && c.label == RegionLabel::supply) saw_supply = true;
    if (c.min_x >= 100) {
      CHECK(c.label == RegionLabel::logic);
      saw_logic = true;
    }
  }
  CHECK(saw_supply);
  CHECK(saw_logic);
  // refined fraction counts only the sprinkled pixels
  CHECK(r.refined_logic_fraction ==
        doctest::Approx(0.5 * 60 * 60 / (200.0 * 200.0)).epsilon(0.05));
}

TEST_CASE("texture labeling: component smaller than the window uses its own fill") {
  Mask mask(64, 64, 0);
  for (int y = 30; y < 33; ++y)
    for (int x = 30; x < 33; ++x) mask.at(x, y) = 1;  // 3x3 solid dot
  Raster<double> amp(64, 64, 0.0);
  for (std::size_t i = 0; i < amp.size(); ++i) amp.data()[i] = mask.data()[i] ? 10.0 : 0.0;
  auto r = analysis::classify_threshold(amp, 3.0, 1.0);
  analysis::label_texture(r, 16.0, 1.0, 0.9);
  REQUIRE(r.components.size() == 1);
  CHECK(r.components[0].label == RegionLabel::supply);

  CHECK_THROWS_AS(analysis::label_texture(r, 2.0, 1.0, 0.9), Error);  // window < 4 px
}

TEST_CASE("overlay: disjoint masks merge, identical masks conflict everywhere") {
  Raster<double> a_map(64, 64, 0.0), b_map(64, 64, 0.0);
  for (int i = 0; i < 16; ++i) a_map.at(i, 0) = 10.0;
  for (int i = 16; i < 32; ++i) b_map.at(i, 0) = 10.0;
  auto a = analysis::classify_threshold(a_map, 3.0, 1.0);
  auto b = analysis::classify_threshold(b_map, 3.0, 1.0);

  const auto overlay = analysis::overlay_rails({{"a", &a}, {"b", &b}});
  CHECK(overlay.conflict_count == 0);
  CHECK(overlay.affected_count == 32);
  CHECK(overlay.rail_index.at(0, 0) == 0);
  CHECK(overlay.rail_index.at(20, 0) == 1);

  const auto clash = analysis::overlay_rails({{"a", &a}, {"b", &a}});
  CHECK(clash.conflict_count == 16);
  CHECK(clash.conflict_fraction == doctest::Approx(1.0));

  auto tiny = analysis::classify_threshold(Raster<double>(8, 8, 0.0), 3.0, 1.0);
  CHECK_THROWS_AS(analysis::overlay_rails({{"a", &a}, {"t", &tiny}}), Error);
}

TEST_CASE("scan plan: paper-scale die needs 96e6 positions and ~111 days") {
  analysis::ScanPlan plan;
  plan.area_width_um = 8000.0;
  plan.area_height_um = 12000.0;
  plan.step_x_um = 1.0;
  plan.step_y_um = 1.0;
  plan.n_attempts_per_position = 1;
  plan.t_attempt_s = 0.1;
  plan.comb_params = 1;
  const auto out = analysis::scan_time(plan);
  CHECK(out.positions == 96'000'000);
  CHECK(out.t_scan_s == doctest::Approx(9.6e6));
  CHECK(out.t_scan_s / 86400.0 == doctest::Approx(111.1).epsilon(0.005));
}

TEST_CASE("scan plan: degenerate single position and a small enumerated grid") {
  analysis::ScanPlan plan{10.0, 10.0, 10.0, 10.0, 3, 0.5, 2};
  const auto out = analysis::scan_time(plan);
  CHECK(out.positions == 1);
  CHECK(out.t_scan_s == doctest::Approx(3 * 0.5 * 2));

  analysis::ScanPlan grid{100.0, 100.0, 10.0, 10.0, 2, 0.5, 3};
  const auto g = analysis::scan_time(grid);
  // oracle: enumerate the grid positions directly
  std::int64_t count = 0;
  for (double x = 0; x < 100.0; x += 10.0)
    for (double y = 0; y < 100.0; y += 10.0) ++count;
  CHECK(g.positions == count);
  CHECK(g.t_scan_s == doctest::Approx(count * 2 * 0.5 * 3));
  CHECK(g.t_scan_s == doctest::Approx(300.0));
}

TEST_CASE("scan time is monotone in every input") {
  analysis::ScanPlan base{500.0, 400.0, 3.0, 5.0, 2, 0.25, 2};
  const double t0 = analysis::scan_time(base).t_scan_s;

  auto bump = [&](auto mutate) {
    analysis::ScanPlan p = base;
    mutate(p);
    return analysis::scan_time(p).t_scan_s;
  };
  CHECK(bump([](auto& p) { p.area_width_um *= 2; }) > t0);
  CHECK(bump([](auto& p) { p.area_height_um *= 2; }) > t0);
  CHECK(bump([](auto& p) { p.n_attempts_per_position += 1; }) > t0);
  CHECK(bump([](auto& p) { p.t_attempt_s *= 1.5; }) > t0);
  CHECK(bump([](auto& p) { p.comb_params += 1; }) > t0);
  CHECK(bump([](auto& p) { p.step_x_um *= 2; }) <= t0);
  CHECK(bump([](auto& p) { p.step_y_um *= 2; }) <= t0);
}

TEST_CASE("masked speedup is the reciprocal fraction") {
  CHECK(analysis::masked_speedup(0.189) == doctest::Approx(5.29).epsilon(0.01));
  CHECK(analysis::masked_speedup(1.0) == doctest::Approx(1.0));
  CHECK(analysis::masked_speedup(0.012) == doctest::Approx(83.3).epsilon(0.01));
  CHECK_THROWS_AS(analysis::masked_speedup(0.0), Error);
}

TEST_CASE("box and disk dilation grow masks as expected") {
  Mask m(16, 16, 0);
  m.at(8, 8) = 1;
  const Mask box = analysis::dilate_box(m, 2);
  CHECK(count_true(box) == 25);
  const Mask disk = analysis::dilate_disk(m, 2);
  CHECK(count_true(disk) == 13);  // |{dx,dy: dx^2+dy^2 <= 4}|
  CHECK(disk.at(8, 6));
  CHECK(!disk.at(6, 6));
}
