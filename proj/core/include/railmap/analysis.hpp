#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "railmap/ccl.hpp"
#include "railmap/raster.hpp"

namespace railmap::analysis {

enum class RegionLabel { unlabeled, supply, logic };

const char* to_string(RegionLabel l) noexcept;

struct Component {
  std::int32_t id = 0;
  std::int64_t pixel_count = 0;
  int min_x = 0, min_y = 0, max_x = 0, max_y = 0;
  RegionLabel label = RegionLabel::unlabeled;
};

struct ClassificationResult {
  Mask affected_mask;
  Raster<std::int32_t> component_ids;  // -1 background
  std::vector<Component> components;
  double threshold_value = 0.0;
  double noise_sigma_est = 0.0;
  double affected_fraction = 0.0;
  double search_space_reduction = 0.0;
  // logic-labeled area / die area, set by label_texture
  double refined_logic_fraction = -1.0;
};

// Robust scale: 1.4826 * median(|x - median|) over background pixels
// (whole map when no mask is given).
double estimate_noise_sigma(const Raster<double>& amplitude, const Mask* background_mask = nullptr);

// mask = amplitude > k_sigma * sigma; components by 8-connectivity.
ClassificationResult classify_threshold(const Raster<double>& amplitude, double k_sigma,
                                        double sigma);

// Supply/logic discrimination by windowed fill ratio: components within
// half a window of each other merge into one cluster; a cluster whose mean
// windowed fill is >= fill_cutoff is supply (solid), else logic
// (sprinkled). Clusters smaller than a window fall back to their own
// bounding-box fill. Requires window_um >= 4 pixels.
void label_texture(ClassificationResult& result, double window_um, double grid_pitch_um,
                   double fill_cutoff = 0.9);

struct RailOverlay {
  Raster<std::int16_t> rail_index;  // -1 none, -2 conflict, else index into rail_ids
  std::vector<std::string> rail_ids;
  std::int64_t conflict_count = 0;
  std::int64_t affected_count = 0;  // pixels claimed by at least one rail
  double conflict_fraction = 0.0;   // conflicts / affected
};

// Superimposes per-rail masks into one attribution map; pixels claimed by
// more than one rail are flagged as conflicts.
RailOverlay overlay_rails(const std::vector<std::pair<std::string, const ClassificationResult*>>& results);

// Scan-time model for a position-stepped physical attack campaign.
struct ScanPlan {
  double area_width_um = 0.0;
  double area_height_um = 0.0;
  double step_x_um = 0.0;
  double step_y_um = 0.0;
  std::int64_t n_attempts_per_position = 1;
  double t_attempt_s = 0.0;
  std::int64_t comb_params = 1;
  // derived
  std::int64_t positions = 0;
  double t_scan_s = 0.0;
};

// positions = ceil(w/sx)*ceil(h/sy); t = positions * n * t_attempt * comb.
ScanPlan scan_time(ScanPlan plan);

// Campaign restricted to the identified fraction of the area.
double masked_scan_time_s(const ScanPlan& plan, double affected_fraction);
double masked_speedup(double affected_fraction);  // 1 / fraction

// Morphology helpers (mask utilities shared with tests/pipelines).
Mask dilate_box(const Mask& mask, int radius_px);
Mask dilate_disk(const Mask& mask, int radius_px);

}  // namespace railmap::analysis
