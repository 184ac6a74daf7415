#include "railmap/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "railmap/config.hpp"
#include "railmap/rng.hpp"

namespace railmap::floorplan {

namespace {

constexpr int kMinRasterDim = 8;

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorCategory::validation, msg); }

bool point_in_polygon(const std::vector<std::array<double, 2>>& poly, double px, double py) {
  // even-odd rule
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xi = poly[i][0], yi = poly[i][1];
    const double xj = poly[j][0], yj = poly[j][1];
    const bool crosses = (yi > py) != (yj > py);
    if (crosses && px < (xj - xi) * (py - yi) / (yj - yi) + xi) inside = !inside;
  }
  return inside;
}

struct Bounds {
  double min_x, min_y, max_x, max_y;
};

Bounds region_bounds(const Region& r) {
  if (r.rect) return {r.x_um, r.y_um, r.x_um + r.w_um, r.y_um + r.h_um};
  Bounds b{r.polygon_um[0][0], r.polygon_um[0][1], r.polygon_um[0][0], r.polygon_um[0][1]};
  for (const auto& v : r.polygon_um) {
    b.min_x = std::min(b.min_x, v[0]);
    b.min_y = std::min(b.min_y, v[1]);
    b.max_x = std::max(b.max_x, v[0]);
    b.max_y = std::max(b.max_y, v[1]);
  }
  return b;
}

Region parse_region(const cfg::Table& t, std::size_t index) {
  const std::string where = "regions[" + std::to_string(index) + "]";
  Region r;
  r.rail_id = cfg::req_string(t, "rail_id", where);
  r.label = cfg::opt_string(t, "label", "", where);

  const std::string kind = cfg::req_string(t, "kind", where);
  if (kind == "supply") {
    r.kind = RegionKind::supply;
  } else if (kind == "logic") {
    r.kind = RegionKind::logic;
  } else {
    invalid(where + ": kind must be \"supply\" or \"logic\", got \"" + kind + "\"");
  }

  const bool has_rect = t.contains("rect_um");
  const bool has_poly = t.contains("polygon_um");
  if (has_rect == has_poly)
    invalid(where + ": exactly one of rect_um or polygon_um is required");
  if (has_rect) {
    const auto& arr = t.at("rect_um").as_array(where + ".rect_um");
    if (arr.size() != 4) invalid(where + ".rect_um: expected [x, y, w, h]");
    r.rect = true;
    r.x_um = arr[0].as_double(where + ".rect_um[0]");
    r.y_um = arr[1].as_double(where + ".rect_um[1]");
    r.w_um = arr[2].as_double(where + ".rect_um[2]");
    r.h_um = arr[3].as_double(where + ".rect_um[3]");
    if (r.w_um <= 0 || r.h_um <= 0) invalid(where + ".rect_um: width/height must be positive");
  } else {
    const auto& arr = t.at("polygon_um").as_array(where + ".polygon_um");
    if (arr.size() < 3) invalid(where + ".polygon_um: need at least 3 vertices");
    r.rect = false;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& v = arr[i].as_array(where + ".polygon_um[" + std::to_string(i) + "]");
      if (v.size() != 2) invalid(where + ".polygon_um: vertices are [x, y] pairs");
      r.polygon_um.push_back({v[0].as_double(where + ".polygon_um.x"), v[1].as_double(where + ".polygon_um.y")});
    }
  }

  r.power_density_uw_per_um2 = cfg::opt_double(t, "power_density_uw_per_um2", 0.0, where);
  r.reflect_sensitivity = cfg::opt_double(t, "reflect_sensitivity", 0.0, where);
  r.speckle_fill = cfg::opt_double(t, "speckle_fill", 1.0, where);
  r.speckle_pitch_um = cfg::opt_double(t, "speckle_pitch_um", 0.0, where);

  if (r.power_density_uw_per_um2 < 0) invalid(where + ": power_density_uw_per_um2 must be >= 0");
  if (r.reflect_sensitivity < 0) invalid(where + ": reflect_sensitivity must be >= 0");
  if (r.kind == RegionKind::logic) {
    if (!(r.speckle_fill > 0.0 && r.speckle_fill <= 1.0))
      invalid(where + ": speckle_fill must be in (0, 1]");
    if (r.speckle_pitch_um <= 0) invalid(where + ": logic regions need speckle_pitch_um > 0");
  } else {
    r.speckle_fill = 1.0;  // supply regions are always fully occupied
  }
  return r;
}

}  // namespace

int Die::raster_width() const { return static_cast<int>(std::ceil(width_um / grid_pitch_um)); }
int Die::raster_height() const { return static_cast<int>(std::ceil(height_um / grid_pitch_um)); }

bool Region::covers(double px_um, double py_um) const {
  if (rect)
    return px_um >= x_um && px_um < x_um + w_um && py_um >= y_um && py_um < y_um + h_um;
  return point_in_polygon(polygon_um, px_um, py_um);
}

std::string Region::describe(std::size_t index) const {
  std::string s = "region #" + std::to_string(index) + " (rail " + rail_id;
  if (!label.empty()) s += ", \"" + label + "\"";
  s += ")";
  return s;
}

double MaterialParams::diffusion_length_um(double frequency_hz) const {
  return std::sqrt(alpha_um2_per_s / (3.14159265358979323846 * frequency_hz));
}

const Rail& Floorplan::rail(const std::string& rail_id) const {
  for (const auto& r : rails)
    if (r.id == rail_id) return r;
  std::string known;
  for (const auto& r : rails) {
    if (!known.empty()) known += ", ";
    known += r.id;
  }
  invalid("unknown rail '" + rail_id + "' (known rails: " + known + ")");
}

bool Floorplan::has_rail(const std::string& rail_id) const noexcept {
  return std::any_of(rails.begin(), rails.end(), [&](const Rail& r) { return r.id == rail_id; });
}

void validate(const Floorplan& fp) {
  if (fp.die.width_um <= 0 || fp.die.height_um <= 0 || fp.die.grid_pitch_um <= 0)
    invalid("die dimensions and grid pitch must be positive");
  if (fp.die.raster_width() < kMinRasterDim || fp.die.raster_height() < kMinRasterDim)
    invalid("die raster must be at least 8x8 pixels at the configured pitch");
  if (fp.material.alpha_um2_per_s <= 0) invalid("material.alpha_um2_per_s must be positive");
  if (fp.material.emissivity_contrast < 0 || fp.material.emissivity_contrast > 1)
    invalid("material.emissivity_contrast must be in [0, 1]");

  for (std::size_t i = 0; i < fp.rails.size(); ++i) {
    if (fp.rails[i].nominal_voltage_v <= 0)
      invalid("rail '" + fp.rails[i].id + "': nominal_voltage_v must be positive");
    for (std::size_t j = i + 1; j < fp.rails.size(); ++j)
      if (fp.rails[i].id == fp.rails[j].id)
        invalid("duplicate rail id '" + fp.rails[i].id + "'");
  }

  for (std::size_t i = 0; i < fp.regions.size(); ++i) {
    const Region& r = fp.regions[i];
    if (!fp.has_rail(r.rail_id))
      invalid(r.describe(i) + ": references undeclared rail '" + r.rail_id + "'");
    const Bounds b = region_bounds(r);
    if (b.min_x < 0 || b.min_y < 0 || b.max_x > fp.die.width_um || b.max_y > fp.die.height_um)
      invalid(r.describe(i) + ": shape extends outside the die");
  }

  // Cross-rail isolation: region supports of different rails must be
  // pixel-disjoint. (Same-rail overlap is legal.)
  const int w = fp.die.raster_width();
  const int h = fp.die.raster_height();
  Raster<std::int32_t> owner(w, h, -1);
  for (std::size_t i = 0; i < fp.regions.size(); ++i) {
    const Region& r = fp.regions[i];
    const Mask support = rasterize_region_support(fp.die, r);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (!support.at(x, y)) continue;
        const std::int32_t prev = owner.at(x, y);
        if (prev >= 0 && fp.regions[prev].rail_id != r.rail_id)
          invalid(r.describe(i) + " overlaps " + fp.regions[prev].describe(prev) +
                  " of a different rail at pixel (" + std::to_string(x) + ", " + std::to_string(y) + ")");
        owner.at(x, y) = static_cast<std::int32_t>(i);
      }
    }
  }
}

Floorplan parse_floorplan(std::string_view text, const std::string& source_name) {
  const cfg::Table root = cfg::parse(text, source_name);
  Floorplan fp;

  const cfg::Table& die = root.at("die").as_table("die");
  fp.die.width_um = cfg::req_double(die, "width_um", "die");
  fp.die.height_um = cfg::req_double(die, "height_um", "die");
  fp.die.grid_pitch_um = cfg::req_double(die, "grid_pitch_um", "die");

  const cfg::Table& mat = root.at("material").as_table("material");
  fp.material.alpha_um2_per_s = cfg::req_double(mat, "alpha_um2_per_s", "material");
  fp.material.emissivity_contrast = cfg::req_double(mat, "emissivity_contrast", "material");

  fp.emissivity_map_seed = static_cast<std::uint64_t>(cfg::opt_int(root, "emissivity_map_seed", 0, "floorplan"));

  if (const cfg::Value* rails = root.find("rails")) {
    const cfg::Array& arr = rails->as_array("rails");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const cfg::Table& t = arr[i].as_table("rails[" + std::to_string(i) + "]");
      Rail r;
      r.id = cfg::req_string(t, "id", "rails[" + std::to_string(i) + "]");
      r.name = cfg::opt_string(t, "name", r.id, "rails[" + std::to_string(i) + "]");
      r.nominal_voltage_v = cfg::req_double(t, "nominal_voltage_v", "rails[" + std::to_string(i) + "]");
      fp.rails.push_back(std::move(r));
    }
  }
  if (const cfg::Value* regions = root.find("regions")) {
    const cfg::Array& arr = regions->as_array("regions");
    for (std::size_t i = 0; i < arr.size(); ++i)
      fp.regions.push_back(parse_region(arr[i].as_table("regions[" + std::to_string(i) + "]"), i));
  }

  validate(fp);
  return fp;
}

Floorplan load_floorplan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open floorplan '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_floorplan(ss.str(), path);
}

std::string serialize_floorplan(const Floorplan& fp) {
  cfg::Table root;
  root.set("emissivity_map_seed") = cfg::Value(static_cast<std::int64_t>(fp.emissivity_map_seed));

  cfg::Table die;
  die.set("width_um") = cfg::Value(fp.die.width_um);
  die.set("height_um") = cfg::Value(fp.die.height_um);
  die.set("grid_pitch_um") = cfg::Value(fp.die.grid_pitch_um);
  root.set("die") = cfg::Value(std::move(die));

  cfg::Table mat;
  mat.set("alpha_um2_per_s") = cfg::Value(fp.material.alpha_um2_per_s);
  mat.set("emissivity_contrast") = cfg::Value(fp.material.emissivity_contrast);
  root.set("material") = cfg::Value(std::move(mat));

  cfg::Array rails;
  for (const auto& r : fp.rails) {
    cfg::Table t;
    t.set("id") = cfg::Value(r.id);
    t.set("name") = cfg::Value(r.name);
    t.set("nominal_voltage_v") = cfg::Value(r.nominal_voltage_v);
    rails.emplace_back(std::move(t));
  }
  root.set("rails") = cfg::Value(std::move(rails));

  cfg::Array regions;
  for (const auto& r : fp.regions) {
    cfg::Table t;
    t.set("rail_id") = cfg::Value(r.rail_id);
    if (!r.label.empty()) t.set("label") = cfg::Value(r.label);
    t.set("kind") = cfg::Value(std::string(r.kind == RegionKind::supply ? "supply" : "logic"));
    if (r.rect) {
      cfg::Array rect;
      rect.emplace_back(r.x_um);
      rect.emplace_back(r.y_um);
      rect.emplace_back(r.w_um);
      rect.emplace_back(r.h_um);
      t.set("rect_um") = cfg::Value(std::move(rect));
    } else {
      cfg::Array poly;
      for (const auto& v : r.polygon_um) {
        cfg::Array vert;
        vert.emplace_back(v[0]);
        vert.emplace_back(v[1]);
        poly.emplace_back(std::move(vert));
      }
      t.set("polygon_um") = cfg::Value(std::move(poly));
    }
    t.set("power_density_uw_per_um2") = cfg::Value(r.power_density_uw_per_um2);
    t.set("reflect_sensitivity") = cfg::Value(r.reflect_sensitivity);
    if (r.kind == RegionKind::logic) {
      t.set("speckle_fill") = cfg::Value(r.speckle_fill);
      t.set("speckle_pitch_um") = cfg::Value(r.speckle_pitch_um);
    }
    regions.emplace_back(std::move(t));
  }
  root.set("regions") = cfg::Value(std::move(regions));

  return cfg::serialize(root);
}

Mask rasterize_region_support(const Die& die, const Region& region) {
  const int w = die.raster_width();
  const int h = die.raster_height();
  Mask m(w, h, 0);
  const double p = die.grid_pitch_um;
  const Bounds b = region_bounds(region);
  const int x0 = std::max(0, static_cast<int>(std::floor(b.min_x / p)) - 1);
  const int y0 = std::max(0, static_cast<int>(std::floor(b.min_y / p)) - 1);
  const int x1 = std::min(w - 1, static_cast<int>(std::ceil(b.max_x / p)) + 1);
  const int y1 = std::min(h - 1, static_cast<int>(std::ceil(b.max_y / p)) + 1);
  for (int y = y0; y <= y1; ++y) {
    const double cy = (y + 0.5) * p;
    for (int x = x0; x <= x1; ++x) {
      const double cx = (x + 0.5) * p;
      if (region.covers(cx, cy)) m.at(x, y) = 1;
    }
  }
  return m;
}

std::uint64_t region_speckle_seed(const Floorplan& fp, std::size_t region_index) {
  return mix_seed(fp.emissivity_map_seed, 0x5BECC1E00ULL + region_index);
}

Mask rasterize_rail_footprint(const Floorplan& fp, const std::string& rail_id) {
  fp.rail(rail_id);  // unknown rail -> error
  const int w = fp.die.raster_width();
  const int h = fp.die.raster_height();
  const double p = fp.die.grid_pitch_um;
  Mask out(w, h, 0);
  for (std::size_t i = 0; i < fp.regions.size(); ++i) {
    const Region& r = fp.regions[i];
    if (r.rail_id != rail_id) continue;
    const Mask support = rasterize_region_support(fp.die, r);
    if (r.kind == RegionKind::supply || r.speckle_fill >= 1.0) {
      for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] |= support.data()[k];
      continue;
    }
    // Speckle cells on a die-anchored grid; occupancy from a per-region
    // stateless hash so footprints are monotone in speckle_fill.
    const std::uint64_t seed = region_speckle_seed(fp, i);
    for (int y = 0; y < h; ++y) {
      const double cy = (y + 0.5) * p;
      const auto cell_y = static_cast<std::int64_t>(std::floor(cy / r.speckle_pitch_um));
      for (int x = 0; x < w; ++x) {
        if (!support.at(x, y)) continue;
        const double cx = (x + 0.5) * p;
        const auto cell_x = static_cast<std::int64_t>(std::floor(cx / r.speckle_pitch_um));
        if (cell_hash01(seed, cell_x, cell_y) < r.speckle_fill) out.at(x, y) = 1;
      }
    }
  }
  return out;
}

Raster<double> render_emissivity_map(const Floorplan& fp) {
  const int w = fp.die.raster_width();
  const int h = fp.die.raster_height();
  const double contrast = fp.material.emissivity_contrast;
  Raster<double> out(w, h, 1.0);
  if (contrast <= 0.0) return out;

  const std::uint64_t texture_seed = mix_seed(fp.emissivity_map_seed, 0x7E87u);
  const double background_base = u01_from_bits(mix_seed(fp.emissivity_map_seed, 0xBA5Eu));

  // Per-region base levels give the map its block structure.
  std::vector<double> region_base(fp.regions.size());
  for (std::size_t i = 0; i < fp.regions.size(); ++i)
    region_base[i] = u01_from_bits(mix_seed(fp.emissivity_map_seed, 0x0E0'000u + i));

  Raster<std::int32_t> owner(w, h, -1);
  for (std::size_t i = 0; i < fp.regions.size(); ++i) {
    const Mask support = rasterize_region_support(fp.die, fp.regions[i]);
    for (std::size_t k = 0; k < support.size(); ++k)
      if (support.data()[k]) owner.data()[k] = static_cast<std::int32_t>(i);
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::int32_t r = owner.at(x, y);
      const double base = r >= 0 ? region_base[r] : background_base;
      const double texture = cell_hash01(texture_seed, x, y);
      const double mix = 0.55 * base + 0.45 * texture;
      out.at(x, y) = 1.0 - contrast * mix;
    }
  }
  return out;
}

}  // namespace railmap::floorplan
