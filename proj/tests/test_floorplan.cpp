#include <doctest.h>

#include <cmath>
#include <string>

#include "railmap/floorplan.hpp"
#include "support/stats.hpp"

using namespace railmap;
using floorplan::Floorplan;

namespace {

const char* kMinimalDoc = R"(
emissivity_map_seed = 1

[die]
width_um = 1000.0
height_um = 1000.0
grid_pitch_um = 10.0

[material]
alpha_um2_per_s = 2.5e5
emissivity_contrast = 0.3

[[rails]]
id = "core"
name = "vcc_core_prim_0p82"
nominal_voltage_v = 0.82

[[regions]]
rail_id = "core"
kind = "supply"
rect_um = [0.0, 0.0, 1000.0, 1000.0]
power_density_uw_per_um2 = 1.0
reflect_sensitivity = 0.2
)";

std::string scenario_path(const char* name) {
  return std::string(RAILMAP_SCENARIO_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("minimal floorplan parses: one rail, one full-die supply region") {
  const Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);
  CHECK(fp.rails.size() == 1);
  CHECK(fp.regions.size() == 1);
  CHECK(fp.die.raster_width() == 100);
  const Mask footprint = floorplan::rasterize_rail_footprint(fp, "core");
  CHECK(fraction_true(footprint) == doctest::Approx(1.0));
}

TEST_CASE("region referencing an undeclared rail is a validation error naming it") {
  std::string doc = kMinimalDoc;
  doc += R"(
[[regions]]
rail_id = "vcc_ghost"
kind = "supply"
rect_um = [0.0, 0.0, 10.0, 10.0]
)";
  try {
    floorplan::parse_floorplan(doc);
    FAIL("expected validation error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::validation);
    CHECK(std::string(e.what()).find("vcc_ghost") != std::string::npos);
  }
}

TEST_CASE("cross-rail overlap is rejected, same-rail overlap is fine") {
  std::string doc = kMinimalDoc;
  doc += R"(
[[rails]]
id = "other"
nominal_voltage_v = 1.0

[[regions]]
rail_id = "other"
kind = "supply"
rect_um = [500.0, 500.0, 100.0, 100.0]
)";
  CHECK_THROWS_AS(floorplan::parse_floorplan(doc), Error);

  std::string same = kMinimalDoc;
  same += R"(
[[regions]]
rail_id = "core"
kind = "supply"
rect_um = [500.0, 500.0, 100.0, 100.0]
)";
  CHECK_NOTHROW(floorplan::parse_floorplan(same));
}

TEST_CASE("shapes must stay inside the die and rasters must be at least 8x8") {
  std::string doc = kMinimalDoc;
  doc += R"(
[[regions]]
rail_id = "core"
kind = "supply"
rect_um = [900.0, 900.0, 200.0, 50.0]
)";
  CHECK_THROWS_AS(floorplan::parse_floorplan(doc), Error);

  const char* tiny = R"(
[die]
width_um = 50.0
height_um = 50.0
grid_pitch_um = 10.0
[material]
alpha_um2_per_s = 1.0
emissivity_contrast = 0.0
)";
  CHECK_THROWS_AS(floorplan::parse_floorplan(tiny), Error);
}

TEST_CASE("supply region covering half the die has footprint fraction 0.5 exactly") {
  Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);
  fp.regions[0].w_um = 500.0;  // left half
  floorplan::validate(fp);
  const Mask footprint = floorplan::rasterize_rail_footprint(fp, "core");
  CHECK(fraction_true(footprint) == 0.5);
}

TEST_CASE("logic with speckle_fill 1.0 matches a supply region of the same shape") {
  Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);
  const Mask supply = floorplan::rasterize_rail_footprint(fp, "core");
  fp.regions[0].kind = floorplan::RegionKind::logic;
  fp.regions[0].speckle_fill = 1.0;
  fp.regions[0].speckle_pitch_um = 30.0;
  const Mask logic = floorplan::rasterize_rail_footprint(fp, "core");
  CHECK(supply.data() == logic.data());
}

TEST_CASE("speckle occupancy tracks the fill over a million cells") {
  // 1000x1000 px at pitch 1 um with 1 um cells -> 1e6 cells
  Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);
  fp.die.grid_pitch_um = 1.0;
  fp.regions[0].kind = floorplan::RegionKind::logic;
  fp.regions[0].speckle_fill = 0.4;
  fp.regions[0].speckle_pitch_um = 1.0;
  floorplan::validate(fp);
  const Mask footprint = floorplan::rasterize_rail_footprint(fp, "core");
  CHECK(fraction_true(footprint) == doctest::Approx(0.4).epsilon(0.025));  // +-0.01 absolute
}

TEST_CASE("rasterization is monotone in speckle_fill for the same seed") {
  Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);
  fp.regions[0].kind = floorplan::RegionKind::logic;
  fp.regions[0].speckle_pitch_um = 30.0;
  Mask prev(1, 1);
  bool first = true;
  for (double fill : {0.15, 0.35, 0.55, 0.8, 1.0}) {
    fp.regions[0].speckle_fill = fill;
    const Mask cur = floorplan::rasterize_rail_footprint(fp, "core");
    if (!first) {
      for (std::size_t i = 0; i < cur.size(); ++i)
        if (prev.data()[i]) CHECK(cur.data()[i]);  // prev subset of cur
    }
    prev = cur;
    first = false;
  }
}

TEST_CASE("footprints of distinct rails are pixel-disjoint and fractions sum below 1") {
  std::string doc = kMinimalDoc;
  // shrink the core region and add a second rail beside it
  Floorplan fp = floorplan::parse_floorplan(doc);
  fp.regions[0].w_um = 400.0;
  fp.rails.push_back({"usb", "vcc_usb_0p82", 0.82});
  floorplan::Region usb;
  usb.rail_id = "usb";
  usb.kind = floorplan::RegionKind::logic;
  usb.x_um = 500.0;
  usb.y_um = 100.0;
  usb.w_um = 300.0;
  usb.h_um = 300.0;
  usb.speckle_fill = 0.6;
  usb.speckle_pitch_um = 20.0;
  fp.regions.push_back(usb);
  floorplan::validate(fp);

  const Mask a = floorplan::rasterize_rail_footprint(fp, "core");
  const Mask b = floorplan::rasterize_rail_footprint(fp, "usb");
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a.data()[i] & b.data()[i]) == 0);
  CHECK(fraction_true(a) + fraction_true(b) <= 1.0);
}

TEST_CASE("parse(serialize(fp)) reproduces identical rasterizations") {
  Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);
  fp.regions[0].kind = floorplan::RegionKind::logic;
  fp.regions[0].speckle_fill = 0.5481;
  fp.regions[0].speckle_pitch_um = 30.0;
  floorplan::validate(fp);

  const std::string text = floorplan::serialize_floorplan(fp);
  const Floorplan fp2 = floorplan::parse_floorplan(text, "roundtrip");
  const Mask a = floorplan::rasterize_rail_footprint(fp, "core");
  const Mask b = floorplan::rasterize_rail_footprint(fp2, "core");
  CHECK(a.data() == b.data());
  const auto e1 = floorplan::render_emissivity_map(fp);
  const auto e2 = floorplan::render_emissivity_map(fp2);
  CHECK(e1.data() == e2.data());
}

TEST_CASE("emissivity map respects the contrast envelope and is textured") {
  Floorplan fp = floorplan::parse_floorplan(kMinimalDoc);

  fp.material.emissivity_contrast = 0.0;
  auto flat = floorplan::render_emissivity_map(fp);
  for (double v : flat.data()) CHECK(v == 1.0);

  fp.material.emissivity_contrast = 0.3;
  auto map1 = floorplan::render_emissivity_map(fp);
  auto map2 = floorplan::render_emissivity_map(fp);
  CHECK(map1.data() == map2.data());  // deterministic given the seed

  double lo = 2.0, hi = -1.0;
  std::vector<double> values(map1.data().begin(), map1.data().end());
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= 0.7);
  CHECK(hi <= 1.0);
  CHECK(testsupport::sample_std(values) > 0.0);
}

TEST_CASE("polygon regions rasterize with even-odd fill") {
  std::string doc = kMinimalDoc;
  Floorplan fp = floorplan::parse_floorplan(doc);
  fp.regions.clear();
  floorplan::Region tri;
  tri.rail_id = "core";
  tri.kind = floorplan::RegionKind::supply;
  tri.rect = false;
  tri.polygon_um = {{0.0, 0.0}, {1000.0, 0.0}, {0.0, 1000.0}};
  fp.regions.push_back(tri);
  floorplan::validate(fp);
  const Mask m = floorplan::rasterize_rail_footprint(fp, "core");
  CHECK(fraction_true(m) == doctest::Approx(0.5).epsilon(0.02));
  CHECK(m.at(2, 2));
  CHECK(!m.at(97, 97));
}

TEST_CASE("pch_like reference scenario reproduces the published area fractions") {
  const Floorplan fp = floorplan::load_floorplan(scenario_path("pch_like.fp"));
  CHECK(fp.die.width_um == 8000.0);
  CHECK(fp.die.height_um == 12000.0);

  const Mask core = floorplan::rasterize_rail_footprint(fp, "core_prim");
  const Mask usb = floorplan::rasterize_rail_footprint(fp, "usb");
  // rasterized footprints at the published fractions (quantization step)
  CHECK(fraction_true(core) == doctest::Approx(0.189).epsilon(0.011));
  CHECK(fraction_true(usb) == doctest::Approx(0.012).epsilon(0.02));
}
