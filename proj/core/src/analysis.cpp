#include "railmap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace railmap::analysis {

namespace {

double median_of(std::vector<double>& v) {
  const std::size_t n = v.size();
  const std::size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double m = v[mid];
  if (n % 2 == 0) {
    std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
    m = 0.5 * (m + v[mid - 1]);
  }
  return m;
}

// summed-area table; sums are over [0..x) x [0..y)
Raster<std::int64_t> integral_image(const Mask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  Raster<std::int64_t> ii(w + 1, h + 1, 0);
  for (int y = 0; y < h; ++y) {
    std::int64_t row = 0;
    for (int x = 0; x < w; ++x) {
      row += mask.at(x, y) ? 1 : 0;
      ii.at(x + 1, y + 1) = ii.at(x + 1, y) + row;
    }
  }
  return ii;
}

std::int64_t box_sum(const Raster<std::int64_t>& ii, int x0, int y0, int x1, int y1) {
  // inclusive box [x0..x1] x [y0..y1]
  return ii.at(x1 + 1, y1 + 1) - ii.at(x0, y1 + 1) - ii.at(x1 + 1, y0) + ii.at(x0, y0);
}

}  // namespace

const char* to_string(RegionLabel l) noexcept {
  switch (l) {
    case RegionLabel::supply: return "supply";
    case RegionLabel::logic: return "logic";
    case RegionLabel::unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

double estimate_noise_sigma(const Raster<double>& amplitude, const Mask* background_mask) {
  if (amplitude.empty()) fail(ErrorCategory::validation, "empty amplitude map");
  if (background_mask && !background_mask->same_shape(amplitude))
    fail(ErrorCategory::validation, "background mask shape disagrees with amplitude map");

  std::vector<double> values;
  values.reserve(amplitude.size());
  for (std::size_t i = 0; i < amplitude.size(); ++i) {
    if (background_mask && !background_mask->data()[i]) continue;
    values.push_back(amplitude.data()[i]);
  }
  if (values.empty()) fail(ErrorCategory::validation, "all pixels are masked out of the background");

  const double med = median_of(values);
  for (auto& v : values) v = std::abs(v - med);
  const double mad = median_of(values);
  return 1.4826 * mad;
}

ClassificationResult classify_threshold(const Raster<double>& amplitude, double k_sigma,
                                        double sigma) {
  if (k_sigma <= 0) fail(ErrorCategory::validation, "k_sigma must be positive");
  if (sigma < 0) fail(ErrorCategory::validation, "sigma must be >= 0");

  ClassificationResult out;
  out.noise_sigma_est = sigma;
  out.threshold_value = k_sigma * sigma;
  out.affected_mask = Mask(amplitude.width(), amplitude.height(), 0);
  for (std::size_t i = 0; i < amplitude.size(); ++i)
    out.affected_mask.data()[i] = amplitude.data()[i] > out.threshold_value ? 1 : 0;

  Labeling labeling = connected_components(out.affected_mask);
  out.component_ids = std::move(labeling.labels);
  out.components.reserve(labeling.components.size());
  for (const auto& c : labeling.components)
    out.components.push_back(
        {c.id, c.pixel_count, c.min_x, c.min_y, c.max_x, c.max_y, RegionLabel::unlabeled});

  out.affected_fraction = fraction_true(out.affected_mask);
  out.search_space_reduction = 1.0 - out.affected_fraction;
  return out;
}

void label_texture(ClassificationResult& result, double window_um, double grid_pitch_um,
                   double fill_cutoff) {
  const int w = result.affected_mask.width();
  const int h = result.affected_mask.height();
  const int window = static_cast<int>(std::llround(window_um / grid_pitch_um));
  if (window < 4)
    fail(ErrorCategory::validation, "texture window must span at least 4 pixels");

  // merge components within half a window into clusters
  const Mask merged = dilate_box(result.affected_mask, window / 2);
  const Labeling clusters = connected_components(merged);
  const std::size_t n_clusters = clusters.components.size();

  // cluster extents over mask pixels (the dilated support would dilute
  // solid regions with empty margin)
  struct ClusterStats {
    int min_x, min_y, max_x, max_y;
    std::int64_t mask_px = 0;
    // extent of the largest member component: stray noise specks merged
    // into the cluster must not stretch the windowed-fill region
    std::int64_t core_px = 0;
    int core_min_x = 0, core_min_y = 0, core_max_x = -1, core_max_y = -1;
  };
  std::vector<ClusterStats> stats(n_clusters, {w, h, -1, -1, 0, 0, 0, 0, -1, -1});
  std::vector<std::int32_t> component_cluster(result.components.size(), -1);
  for (const auto& comp : result.components) {
    std::int32_t cl = -1;
    for (int x = comp.min_x; x <= comp.max_x && cl < 0; ++x)
      if (result.component_ids.at(x, comp.min_y) == comp.id)
        cl = clusters.labels.at(x, comp.min_y);
    component_cluster[static_cast<std::size_t>(comp.id)] = cl;
    if (cl < 0) continue;
    ClusterStats& s = stats[static_cast<std::size_t>(cl)];
    s.min_x = std::min(s.min_x, comp.min_x);
    s.min_y = std::min(s.min_y, comp.min_y);
    s.max_x = std::max(s.max_x, comp.max_x);
    s.max_y = std::max(s.max_y, comp.max_y);
    s.mask_px += comp.pixel_count;
    if (comp.pixel_count > s.core_px) {
      s.core_px = comp.pixel_count;
      s.core_min_x = comp.min_x;
      s.core_min_y = comp.min_y;
      s.core_max_x = comp.max_x;
      s.core_max_y = comp.max_y;
    }
  }

  const Raster<std::int64_t> mask_ii = integral_image(result.affected_mask);
  const double window_area = static_cast<double>(window) * window;

  std::vector<RegionLabel> cluster_label(n_clusters, RegionLabel::unlabeled);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    const ClusterStats& s = stats[c];
    if (s.mask_px == 0) {
      cluster_label[c] = RegionLabel::logic;
      continue;
    }
    const int cw = s.core_max_x - s.core_min_x + 1;
    const int ch = s.core_max_y - s.core_min_y + 1;
    double fill = -1.0;
    if (cw >= window && ch >= window) {
      // mean windowed fill over windows inside the dominant component
      double acc = 0.0;
      std::int64_t n_windows = 0;
      for (int y = s.core_min_y; y + window <= s.core_max_y + 1; ++y) {
        for (int x = s.core_min_x; x + window <= s.core_max_x + 1; ++x) {
          // overlapping extents: keep only windows centered in this cluster
          if (clusters.labels.at(x + window / 2, y + window / 2) != static_cast<std::int32_t>(c))
            continue;
          acc += static_cast<double>(box_sum(mask_ii, x, y, x + window - 1, y + window - 1)) /
                 window_area;
          ++n_windows;
        }
      }
      if (n_windows > 0) fill = acc / static_cast<double>(n_windows);
    }
    if (fill < 0.0) {
      // cluster smaller than the window: its own bounding-box fill
      const int bw = s.max_x - s.min_x + 1;
      const int bh = s.max_y - s.min_y + 1;
      fill = static_cast<double>(s.mask_px) /
             (static_cast<double>(bw) * static_cast<double>(bh));
    }
    cluster_label[c] = fill >= fill_cutoff ? RegionLabel::supply : RegionLabel::logic;
  }

  std::int64_t logic_px = 0;
  for (auto& comp : result.components) {
    const std::int32_t cl = component_cluster[static_cast<std::size_t>(comp.id)];
    comp.label = cl >= 0 ? cluster_label[static_cast<std::size_t>(cl)] : RegionLabel::logic;
    if (comp.label == RegionLabel::logic) logic_px += comp.pixel_count;
  }
  result.refined_logic_fraction =
      static_cast<double>(logic_px) / static_cast<double>(result.affected_mask.size());
}

RailOverlay overlay_rails(
    const std::vector<std::pair<std::string, const ClassificationResult*>>& results) {
  if (results.empty()) fail(ErrorCategory::validation, "overlay needs at least one rail result");
  const int w = results.front().second->affected_mask.width();
  const int h = results.front().second->affected_mask.height();

  RailOverlay out;
  out.rail_index = Raster<std::int16_t>(w, h, -1);
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& [rail_id, res] = results[r];
    out.rail_ids.push_back(rail_id);
    if (!res->affected_mask.same_shape(w, h))
      fail(ErrorCategory::validation, "overlay inputs are not co-registered (dimension mismatch)");
    for (std::size_t i = 0; i < res->affected_mask.size(); ++i) {
      if (!res->affected_mask.data()[i]) continue;
      auto& cell = out.rail_index.data()[i];
      if (cell == -1) {
        cell = static_cast<std::int16_t>(r);
      } else {
        if (cell != -2) ++out.conflict_count;
        cell = -2;
      }
    }
  }
  for (auto v : out.rail_index.data()) out.affected_count += (v != -1);
  out.conflict_fraction = out.affected_count > 0
                              ? static_cast<double>(out.conflict_count) / out.affected_count
                              : 0.0;
  return out;
}

ScanPlan scan_time(ScanPlan plan) {
  if (plan.area_width_um <= 0 || plan.area_height_um <= 0 || plan.step_x_um <= 0 ||
      plan.step_y_um <= 0 || plan.n_attempts_per_position <= 0 || plan.t_attempt_s <= 0 ||
      plan.comb_params <= 0)
    fail(ErrorCategory::validation, "all scan plan inputs must be positive");
  const auto nx = static_cast<std::int64_t>(std::ceil(plan.area_width_um / plan.step_x_um));
  const auto ny = static_cast<std::int64_t>(std::ceil(plan.area_height_um / plan.step_y_um));
  plan.positions = nx * ny;
  plan.t_scan_s = static_cast<double>(plan.positions) *
                  static_cast<double>(plan.n_attempts_per_position) * plan.t_attempt_s *
                  static_cast<double>(plan.comb_params);
  return plan;
}

double masked_scan_time_s(const ScanPlan& plan, double affected_fraction) {
  if (!(affected_fraction > 0.0 && affected_fraction <= 1.0))
    fail(ErrorCategory::numeric, "affected fraction must be in (0, 1]");
  return plan.t_scan_s * affected_fraction;
}

double masked_speedup(double affected_fraction) {
  if (!(affected_fraction > 0.0 && affected_fraction <= 1.0))
    fail(ErrorCategory::numeric, "speedup undefined for affected fraction outside (0, 1]");
  return 1.0 / affected_fraction;
}

Mask dilate_box(const Mask& mask, int radius_px) {
  if (radius_px <= 0) return mask;
  const int w = mask.width();
  const int h = mask.height();
  Mask tmp(w, h, 0);
  // horizontal pass
  for (int y = 0; y < h; ++y) {
    int run = -1;  // rightmost set pixel seen within reach
    for (int x = 0; x < w; ++x)
      if (mask.at(x, y)) {
        const int lo = std::max(0, x - radius_px);
        const int hi = std::min(w - 1, x + radius_px);
        for (int i = std::max(lo, run + 1); i <= hi; ++i) tmp.at(i, y) = 1;
        run = hi;
      }
  }
  Mask out(w, h, 0);
  for (int x = 0; x < w; ++x) {
    int run = -1;
    for (int y = 0; y < h; ++y)
      if (tmp.at(x, y)) {
        const int lo = std::max(0, y - radius_px);
        const int hi = std::min(h - 1, y + radius_px);
        for (int i = std::max(lo, run + 1); i <= hi; ++i) out.at(x, i) = 1;
        run = hi;
      }
  }
  return out;
}

Mask dilate_disk(const Mask& mask, int radius_px) {
  if (radius_px <= 0) return mask;
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius_px; dy <= radius_px; ++dy)
    for (int dx = -radius_px; dx <= radius_px; ++dx)
      if (dx * dx + dy * dy <= radius_px * radius_px) offsets.emplace_back(dx, dy);

  const int w = mask.width();
  const int h = mask.height();
  Mask out(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!mask.at(x, y)) continue;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx;
        const int ny = y + dy;
        if (nx >= 0 && ny >= 0 && nx < w && ny < h) out.at(nx, ny) = 1;
      }
    }
  return out;
}

}  // namespace railmap::analysis
