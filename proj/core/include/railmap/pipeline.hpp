#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "railmap/analysis.hpp"
#include "railmap/floorplan.hpp"
#include "railmap/framestack.hpp"
#include "railmap/lockin.hpp"
#include "railmap/optical.hpp"
#include "railmap/stimulus.hpp"
#include "railmap/thermal.hpp"

namespace railmap::pipeline {

enum class Technique { lit, llsi };

const char* to_string(Technique t) noexcept;

struct LitAcquisition {
  int n_frames = 512;
  double fps = 400.0;
  double noise_sigma = 16.0;
  std::uint64_t seed = 1;
  double dc_background = 1000.0;
  double gain_uk_per_uw = 1.0;
};

struct LlsiAcquisition {
  optical::LensSpec lens = optical::LensSpec::standard(5);
  int dwell_samples = 16;
  double noise_sigma = 8.0;
  std::uint64_t seed = 1;
  double overlap_fraction = 0.1;
  double laser_dc = 1000.0;
  double sample_rate_hz = 2.0e7;
};

// k_sigma 3 is the conventional detection threshold; scenario configs
// override it upward where the amplitude background is Rayleigh-tailed.
// window_um must span >= 4 raster pixels when texture labeling runs.
struct AnalysisParams {
  double k_sigma = 3.0;
  double window_um = 25.0;
  double fill_cutoff = 0.9;
};

struct PipelineConfig {
  std::filesystem::path floorplan_path;
  Technique technique = Technique::lit;
  std::string rail_id;
  stimulus::ModulationSpec modulation;
  LitAcquisition lit;
  LlsiAcquisition llsi;
  AnalysisParams analysis;
  std::filesystem::path output_dir;
  // LIT stimulus band sanity window (switchable-PSU territory)
  double lit_band_min_hz = 40.0;
  double lit_band_max_hz = 60.0;

  void validate() const;
};

// Relative floorplan paths resolve against the config file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

// ---- in-memory chains (what the disk commands orchestrate) ----

FrameStack simulate_lit_frames(const floorplan::Floorplan& fp, const PipelineConfig& cfg);
std::vector<optical::TileScan> simulate_llsi_tiles(const floorplan::Floorplan& fp,
                                                   const PipelineConfig& cfg);
optical::StitchResult stitch_llsi(const floorplan::Floorplan& fp, const PipelineConfig& cfg,
                                  const std::vector<optical::TileScan>& tiles);

// sigma estimate + threshold classification + texture labeling
analysis::ClassificationResult analyze_amplitude_map(const Raster<double>& amplitude,
                                                     double grid_pitch_um,
                                                     const AnalysisParams& params);

// ---- disk commands (CLI surface) ----

void cmd_simulate(const PipelineConfig& cfg);
void cmd_analyze(const PipelineConfig& cfg);

struct PlanReport {
  analysis::ScanPlan plan;
  double affected_fraction = -1.0;  // < 0 when no mask was given
  double t_masked_s = -1.0;
  double speedup = -1.0;
};

// Optional mask (0/1 map file) restricts the campaign to affected pixels.
PlanReport cmd_plan(const analysis::ScanPlan& inputs,
                    const std::optional<std::filesystem::path>& mask_file,
                    const std::optional<std::filesystem::path>& report_file, std::ostream& out);

void cmd_stitch(const std::filesystem::path& tile_index_json,
                const std::filesystem::path& output_map, std::ostream& out);

void cmd_validate_floorplan(const std::filesystem::path& floorplan_path, std::ostream& out);

std::string humanize_seconds(double seconds);  // "9.6e+06 s (111.1 days)"

}  // namespace railmap::pipeline
