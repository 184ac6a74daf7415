#include "railmap/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "railmap/config.hpp"
#include "railmap/image.hpp"
#include "railmap/rng.hpp"

namespace railmap::pipeline {

using json = nlohmann::ordered_json;

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCategory::io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorCategory::io, "write failed for '" + path.string() + "'");
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCategory::io, "cannot open '" + path.string() + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(ErrorCategory::format, "malformed JSON in '" + path.string() + "'");
  return j;
}

json modulation_json(const stimulus::ModulationSpec& m) {
  return {{"waveform", stimulus::to_string(m.waveform)},
          {"frequency_hz", m.frequency_hz},
          {"amplitude_vpp", m.amplitude_vpp},
          {"dc_offset_v", m.dc_offset_v},
          {"phase_rad", m.phase_rad}};
}

stimulus::ModulationSpec modulation_from_table(const cfg::Table& t) {
  stimulus::ModulationSpec m;
  m.waveform = stimulus::waveform_from_string(cfg::req_string(t, "waveform", "modulation"));
  m.frequency_hz = cfg::req_double(t, "frequency_hz", "modulation");
  m.amplitude_vpp = cfg::req_double(t, "amplitude_vpp", "modulation");
  m.dc_offset_v = cfg::req_double(t, "dc_offset_v", "modulation");
  m.phase_rad = cfg::opt_double(t, "phase_rad", 0.0, "modulation");
  m.validate();
  return m;
}

json components_json(const analysis::ClassificationResult& c, std::size_t cap = 32) {
  // largest components first; speckle produces thousands of small ones
  std::vector<const analysis::Component*> sorted;
  sorted.reserve(c.components.size());
  for (const auto& comp : c.components) sorted.push_back(&comp);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->pixel_count > b->pixel_count; });
  json arr = json::array();
  for (std::size_t i = 0; i < sorted.size() && i < cap; ++i) {
    const auto* comp = sorted[i];
    arr.push_back({{"id", comp->id},
                   {"pixels", comp->pixel_count},
                   {"bbox", {comp->min_x, comp->min_y, comp->max_x, comp->max_y}},
                   {"label", analysis::to_string(comp->label)}});
  }
  return arr;
}

Raster<double> dc_reflected_map(const floorplan::Floorplan& fp, const optical::LensSpec& lens,
                                double laser_dc, int out_w, int out_h) {
  // DC reflected-light image: laser DC level textured by the static
  // emissivity pattern, resampled to the lens grid
  const Raster<double> emissivity = floorplan::render_emissivity_map(fp);
  Raster<double> out(out_w, out_h, 0.0);
  for (int y = 0; y < out_h; ++y) {
    const int sy = std::min(emissivity.height() - 1,
                            static_cast<int>((y + 0.5) * lens.px_pitch_um / fp.die.grid_pitch_um));
    for (int x = 0; x < out_w; ++x) {
      const int sx = std::min(emissivity.width() - 1,
                              static_cast<int>((x + 0.5) * lens.px_pitch_um / fp.die.grid_pitch_um));
      out.at(x, y) = laser_dc * emissivity.at(sx, sy);
    }
  }
  return out;
}

json analysis_report(const PipelineConfig& cfg, const analysis::ClassificationResult& result) {
  json j;
  j["technique"] = to_string(cfg.technique);
  j["rail_id"] = cfg.rail_id;
  j["modulation"] = modulation_json(cfg.modulation);
  j["noise_sigma_est"] = result.noise_sigma_est;
  j["threshold_value"] = result.threshold_value;
  j["k_sigma"] = cfg.analysis.k_sigma;
  j["affected_fraction"] = result.affected_fraction;
  j["search_space_reduction"] = result.search_space_reduction;
  j["refined_logic_fraction"] = result.refined_logic_fraction;
  std::int64_t supply_px = 0, logic_px = 0;
  for (const auto& c : result.components) {
    if (c.label == analysis::RegionLabel::supply) supply_px += c.pixel_count;
    if (c.label == analysis::RegionLabel::logic) logic_px += c.pixel_count;
  }
  j["supply_labeled_fraction"] =
      static_cast<double>(supply_px) / static_cast<double>(result.affected_mask.size());
  j["n_components"] = result.components.size();
  j["largest_components"] = components_json(result);
  return j;
}

}  // namespace

const char* to_string(Technique t) noexcept { return t == Technique::lit ? "lit" : "llsi"; }

void PipelineConfig::validate() const {
  modulation.validate();
  if (rail_id.empty()) fail(ErrorCategory::config, "pipeline.rail_id is required");
  if (technique == Technique::lit) {
    if (modulation.waveform != stimulus::Waveform::square)
      fail(ErrorCategory::config, "LIT pipelines require a square stimulus");
    if (modulation.frequency_hz < lit_band_min_hz || modulation.frequency_hz > lit_band_max_hz)
      fail(ErrorCategory::config,
           "LIT modulation frequency outside the configured band [" +
               std::to_string(lit_band_min_hz) + ", " + std::to_string(lit_band_max_hz) + "] Hz");
  } else {
    if (modulation.waveform != stimulus::Waveform::sine)
      fail(ErrorCategory::config, "LLSI pipelines require a sine stimulus");
  }
}

PipelineConfig load_pipeline_config(const std::filesystem::path& path) {
  const cfg::Table root = cfg::parse_file(path.string());
  PipelineConfig out;

  const cfg::Table& pipe = root.at("pipeline").as_table("pipeline");
  const std::string technique = cfg::req_string(pipe, "technique", "pipeline");
  if (technique == "lit") {
    out.technique = Technique::lit;
  } else if (technique == "llsi") {
    out.technique = Technique::llsi;
  } else {
    fail(ErrorCategory::config, "pipeline.technique must be \"lit\" or \"llsi\"");
  }
  std::filesystem::path fp_path = cfg::req_string(pipe, "floorplan", "pipeline");
  if (fp_path.is_relative()) fp_path = path.parent_path() / fp_path;
  out.floorplan_path = fp_path;
  out.rail_id = cfg::req_string(pipe, "rail_id", "pipeline");
  out.output_dir = cfg::opt_string(pipe, "output_dir", "out", "pipeline");
  out.lit_band_min_hz = cfg::opt_double(pipe, "lit_band_min_hz", 40.0, "pipeline");
  out.lit_band_max_hz = cfg::opt_double(pipe, "lit_band_max_hz", 60.0, "pipeline");

  out.modulation = modulation_from_table(root.at("modulation").as_table("modulation"));

  if (const cfg::Value* acq_v = root.find("acquisition")) {
    const cfg::Table& acq = acq_v->as_table("acquisition");
    if (out.technique == Technique::lit) {
      out.lit.n_frames = static_cast<int>(cfg::opt_int(acq, "n_frames", out.lit.n_frames, "acquisition"));
      out.lit.fps = cfg::opt_double(acq, "fps", out.lit.fps, "acquisition");
      out.lit.noise_sigma = cfg::opt_double(acq, "noise_sigma", out.lit.noise_sigma, "acquisition");
      out.lit.seed = static_cast<std::uint64_t>(cfg::opt_int(acq, "seed", 1, "acquisition"));
      out.lit.dc_background = cfg::opt_double(acq, "dc_background", out.lit.dc_background, "acquisition");
      out.lit.gain_uk_per_uw = cfg::opt_double(acq, "gain_uk_per_uw", out.lit.gain_uk_per_uw, "acquisition");
    } else {
      const int mag = static_cast<int>(cfg::opt_int(acq, "magnification", 5, "acquisition"));
      out.llsi.lens = optical::LensSpec::standard(mag);
      out.llsi.lens.spot_size_um =
          cfg::opt_double(acq, "spot_size_um", out.llsi.lens.spot_size_um, "acquisition");
      out.llsi.dwell_samples =
          static_cast<int>(cfg::opt_int(acq, "dwell_samples", out.llsi.dwell_samples, "acquisition"));
      out.llsi.noise_sigma = cfg::opt_double(acq, "noise_sigma", out.llsi.noise_sigma, "acquisition");
      out.llsi.seed = static_cast<std::uint64_t>(cfg::opt_int(acq, "seed", 1, "acquisition"));
      out.llsi.overlap_fraction =
          cfg::opt_double(acq, "overlap_fraction", out.llsi.overlap_fraction, "acquisition");
      out.llsi.laser_dc = cfg::opt_double(acq, "laser_dc", out.llsi.laser_dc, "acquisition");
      out.llsi.sample_rate_hz =
          cfg::opt_double(acq, "sample_rate_hz", out.llsi.sample_rate_hz, "acquisition");
    }
  }

  if (const cfg::Value* ana_v = root.find("analysis")) {
    const cfg::Table& ana = ana_v->as_table("analysis");
    out.analysis.k_sigma = cfg::opt_double(ana, "k_sigma", out.analysis.k_sigma, "analysis");
    out.analysis.window_um = cfg::opt_double(ana, "window_um", out.analysis.window_um, "analysis");
    out.analysis.fill_cutoff = cfg::opt_double(ana, "fill_cutoff", out.analysis.fill_cutoff, "analysis");
  }

  out.validate();
  return out;
}

FrameStack simulate_lit_frames(const floorplan::Floorplan& fp, const PipelineConfig& cfg) {
  const thermal::PowerMap pm = thermal::build_power_map(fp, cfg.rail_id, cfg.modulation);
  const thermal::ThermalResponse tr =
      thermal::thermal_response(pm, fp.material, cfg.lit.gain_uk_per_uw);
  thermal::IrRenderParams render;
  render.n_frames = cfg.lit.n_frames;
  render.fps = cfg.lit.fps;
  render.noise_sigma = cfg.lit.noise_sigma;
  render.seed = cfg.lit.seed;
  render.dc_background = cfg.lit.dc_background;
  return thermal::render_ir_frames(tr, fp, cfg.modulation, render);
}

std::vector<optical::TileScan> simulate_llsi_tiles(const floorplan::Floorplan& fp,
                                                   const PipelineConfig& cfg) {
  const optical::ModulationDepthMap depth =
      optical::modulation_depth_map(fp, cfg.rail_id, cfg.modulation);
  const auto origins = optical::plan_tiles(fp.die, cfg.llsi.lens, cfg.llsi.overlap_fraction);
  std::vector<optical::TileScan> tiles;
  tiles.reserve(origins.size());
  for (std::size_t i = 0; i < origins.size(); ++i) {
    optical::TileAcquireParams params;
    params.dwell_samples = cfg.llsi.dwell_samples;
    params.noise_sigma = cfg.llsi.noise_sigma;
    params.seed = mix_seed(cfg.llsi.seed, i);
    params.laser_dc = cfg.llsi.laser_dc;
    params.sample_rate_hz = cfg.llsi.sample_rate_hz;
    tiles.push_back(optical::acquire_tile(depth, origins[i], cfg.llsi.lens, params));
  }
  return tiles;
}

optical::StitchResult stitch_llsi(const floorplan::Floorplan& fp, const PipelineConfig& cfg,
                                  const std::vector<optical::TileScan>& tiles) {
  return optical::stitch_tiles(tiles, fp.die, cfg.llsi.lens);
}

analysis::ClassificationResult analyze_amplitude_map(const Raster<double>& amplitude,
                                                     double grid_pitch_um,
                                                     const AnalysisParams& params) {
  const double sigma = analysis::estimate_noise_sigma(amplitude);
  analysis::ClassificationResult result =
      analysis::classify_threshold(amplitude, params.k_sigma, sigma);
  analysis::label_texture(result, params.window_um, grid_pitch_um, params.fill_cutoff);
  return result;
}

void cmd_simulate(const PipelineConfig& cfg) {
  cfg.validate();
  const floorplan::Floorplan fp = floorplan::load_floorplan(cfg.floorplan_path.string());
  if (!fp.has_rail(cfg.rail_id)) fp.rail(cfg.rail_id);  // error lists valid rails
  std::filesystem::create_directories(cfg.output_dir);

  json index;
  index["technique"] = to_string(cfg.technique);
  index["floorplan"] = cfg.floorplan_path.string();
  index["rail_id"] = cfg.rail_id;
  index["modulation"] = modulation_json(cfg.modulation);

  if (cfg.technique == Technique::lit) {
    const FrameStack fs = simulate_lit_frames(fp, cfg);
    io::write_frame_stack(cfg.output_dir / "frames.mfrs", fs);
    index["acquisition"] = {{"n_frames", cfg.lit.n_frames},
                            {"fps", cfg.lit.fps},
                            {"noise_sigma", cfg.lit.noise_sigma},
                            {"seed", cfg.lit.seed},
                            {"dc_background", cfg.lit.dc_background},
                            {"gain_uk_per_uw", cfg.lit.gain_uk_per_uw},
                            {"integer_periods", fs.integer_periods}};
    index["artifacts"] = {{"frames", "frames.mfrs"}};
  } else {
    const auto tiles = simulate_llsi_tiles(fp, cfg);
    const std::filesystem::path tile_dir = cfg.output_dir / "tiles";
    std::filesystem::create_directories(tile_dir);
    json tile_list = json::array();
    for (std::size_t i = 0; i < tiles.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "tile_%04zu.mfrs", i);
      io::write_map_f32(tile_dir / name, tiles[i].amplitude);
      tile_list.push_back({{"file", std::string("tiles/") + name},
                           {"origin_px", {tiles[i].origin.px_x, tiles[i].origin.px_y}},
                           {"origin_um", {tiles[i].origin.x_um, tiles[i].origin.y_um}}});
    }
    index["acquisition"] = {{"magnification", cfg.llsi.lens.magnification},
                            {"spot_size_um", cfg.llsi.lens.spot_size_um},
                            {"tile_px", {cfg.llsi.lens.tile_width_px, cfg.llsi.lens.tile_height_px}},
                            {"px_pitch_um", cfg.llsi.lens.px_pitch_um},
                            {"dwell_samples", cfg.llsi.dwell_samples},
                            {"dwell_time_s", tiles.empty() ? 0.0 : tiles.front().dwell_time_s},
                            {"noise_sigma", cfg.llsi.noise_sigma},
                            {"overlap_fraction", cfg.llsi.overlap_fraction},
                            {"laser_dc", cfg.llsi.laser_dc},
                            {"sample_rate_hz", cfg.llsi.sample_rate_hz},
                            {"seed", cfg.llsi.seed}};
    index["die_um"] = {fp.die.width_um, fp.die.height_um};
    index["tiles"] = std::move(tile_list);
  }
  write_text(cfg.output_dir / "simulate_index.json", index.dump(2) + "\n");
}

void cmd_analyze(const PipelineConfig& cfg) {
  cfg.validate();
  const floorplan::Floorplan fp = floorplan::load_floorplan(cfg.floorplan_path.string());
  std::filesystem::create_directories(cfg.output_dir);

  Raster<double> amplitude;
  Raster<double> base;  // overlay background
  double pitch_um = fp.die.grid_pitch_um;

  if (cfg.technique == Technique::lit) {
    const FrameStack fs = io::read_frame_stack(cfg.output_dir / "frames.mfrs");
    const lockin::LockInResult demod =
        lockin::lockin_demodulate(fs, cfg.modulation.frequency_hz, cfg.modulation.phase_rad);
    io::write_map_f32(cfg.output_dir / "amplitude.mfrs", demod.amplitude);
    io::write_map_f32(cfg.output_dir / "phase.mfrs", demod.phase_rad);
    json meta = {{"ref_frequency_hz", demod.ref_frequency_hz},
                 {"ref_phase_rad", cfg.modulation.phase_rad},
                 {"n_frames_integrated", demod.n_frames_integrated},
                 {"periods_integrated", demod.periods_integrated}};
    write_text(cfg.output_dir / "lockin_meta.json", meta.dump(2) + "\n");
    amplitude = demod.amplitude;
    base = floorplan::render_emissivity_map(fp);
  } else {
    const json index = read_json(cfg.output_dir / "simulate_index.json");
    std::vector<optical::TileScan> tiles;
    for (const auto& t : index.at("tiles")) {
      optical::TileScan tile;
      tile.origin.px_x = t.at("origin_px")[0].get<std::int64_t>();
      tile.origin.px_y = t.at("origin_px")[1].get<std::int64_t>();
      tile.origin.x_um = t.at("origin_um")[0].get<double>();
      tile.origin.y_um = t.at("origin_um")[1].get<double>();
      const FrameStack fs = io::read_frame_stack(cfg.output_dir / t.at("file").get<std::string>());
      Raster<float> amp(fs.width, fs.height);
      amp.data() = fs.frames.at(0).data();
      tile.amplitude = std::move(amp);
      tile.dwell_samples = cfg.llsi.dwell_samples;
      tiles.push_back(std::move(tile));
    }
    const optical::StitchResult stitched = optical::stitch_tiles(tiles, fp.die, cfg.llsi.lens);
    io::write_map_f32(cfg.output_dir / "stitched.mfrs", stitched.amplitude);
    pitch_um = stitched.px_pitch_um;
    base = dc_reflected_map(fp, cfg.llsi.lens, cfg.llsi.laser_dc, stitched.amplitude.width(),
                            stitched.amplitude.height());
    amplitude = stitched.amplitude;
  }

  const analysis::ClassificationResult result =
      analyze_amplitude_map(amplitude, pitch_um, cfg.analysis);
  io::write_mask(cfg.output_dir / "mask.mfrs", result.affected_mask);
  // strong/weak split at twice the detection threshold (6 sigma vs 3-6
  // sigma at the default k_sigma = 3)
  const Raster<image::Rgb8> overlay =
      image::render_overlay(base, amplitude, result.threshold_value, 2.0 * result.threshold_value);
  image::write_ppm(cfg.output_dir / "overlay.ppm", overlay);

  json report = analysis_report(cfg, result);
  report["grid_pitch_um"] = pitch_um;
  write_text(cfg.output_dir / "report.json", report.dump(2) + "\n");
}

PlanReport cmd_plan(const analysis::ScanPlan& inputs,
                    const std::optional<std::filesystem::path>& mask_file,
                    const std::optional<std::filesystem::path>& report_file, std::ostream& out) {
  PlanReport report;
  report.plan = analysis::scan_time(inputs);

  json j;
  j["area_um"] = {report.plan.area_width_um, report.plan.area_height_um};
  j["step_um"] = {report.plan.step_x_um, report.plan.step_y_um};
  j["n_attempts_per_position"] = report.plan.n_attempts_per_position;
  j["t_attempt_s"] = report.plan.t_attempt_s;
  j["comb_params"] = report.plan.comb_params;
  j["positions"] = report.plan.positions;
  j["t_scan_s"] = report.plan.t_scan_s;
  j["t_scan_days"] = report.plan.t_scan_s / 86400.0;

  out << "positions: " << report.plan.positions << "\n";
  out << "t_scan: " << humanize_seconds(report.plan.t_scan_s) << "\n";

  if (mask_file) {
    const Raster<double> mask_map = io::read_map_f32(*mask_file);
    std::int64_t on = 0;
    for (double v : mask_map.data()) on += v != 0.0;
    report.affected_fraction = static_cast<double>(on) / static_cast<double>(mask_map.size());
    report.t_masked_s = analysis::masked_scan_time_s(report.plan, report.affected_fraction);
    report.speedup = analysis::masked_speedup(report.affected_fraction);
    j["affected_fraction"] = report.affected_fraction;
    j["t_masked_s"] = report.t_masked_s;
    j["t_masked_days"] = report.t_masked_s / 86400.0;
    j["speedup"] = report.speedup;
    out << "affected fraction: " << report.affected_fraction << "\n";
    out << "t_masked: " << humanize_seconds(report.t_masked_s) << "\n";
    out << "speedup: " << report.speedup << "x\n";
  }

  if (report_file) write_text(*report_file, j.dump(2) + "\n");
  return report;
}

void cmd_stitch(const std::filesystem::path& tile_index_json,
                const std::filesystem::path& output_map, std::ostream& out) {
  const json index = read_json(tile_index_json);
  const auto& acq = index.at("acquisition");
  optical::LensSpec lens = optical::LensSpec::standard(acq.at("magnification").get<int>());
  lens.spot_size_um = acq.at("spot_size_um").get<double>();

  floorplan::Die die;
  die.width_um = index.at("die_um")[0].get<double>();
  die.height_um = index.at("die_um")[1].get<double>();
  die.grid_pitch_um = lens.px_pitch_um;

  std::vector<optical::TileScan> tiles;
  for (const auto& t : index.at("tiles")) {
    optical::TileScan tile;
    tile.origin.px_x = t.at("origin_px")[0].get<std::int64_t>();
    tile.origin.px_y = t.at("origin_px")[1].get<std::int64_t>();
    tile.origin.x_um = t.at("origin_um")[0].get<double>();
    tile.origin.y_um = t.at("origin_um")[1].get<double>();
    const FrameStack fs =
        io::read_frame_stack(tile_index_json.parent_path() / t.at("file").get<std::string>());
    Raster<float> amp(fs.width, fs.height);
    amp.data() = fs.frames.at(0).data();
    tile.amplitude = std::move(amp);
    tiles.push_back(std::move(tile));
  }
  const optical::StitchResult stitched = optical::stitch_tiles(tiles, die, lens);
  io::write_map_f32(output_map, stitched.amplitude);
  out << "stitched " << tiles.size() << " tiles into " << stitched.amplitude.width() << "x"
      << stitched.amplitude.height() << " map\n";
}

void cmd_validate_floorplan(const std::filesystem::path& floorplan_path, std::ostream& out) {
  const floorplan::Floorplan fp = floorplan::load_floorplan(floorplan_path.string());
  out << "floorplan OK: " << fp.die.width_um << " x " << fp.die.height_um << " um at "
      << fp.die.grid_pitch_um << " um pitch (" << fp.die.raster_width() << " x "
      << fp.die.raster_height() << " px)\n";
  out << "rails: " << fp.rails.size() << ", regions: " << fp.regions.size() << "\n";
  for (const auto& rail : fp.rails) {
    const Mask footprint = floorplan::rasterize_rail_footprint(fp, rail.id);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", fraction_true(footprint));
    out << "  rail " << rail.id << " (" << rail.name << "): footprint fraction " << buf << "\n";
  }
}

std::string humanize_seconds(double seconds) {
  char buf[96];
  if (seconds >= 86400.0)
    std::snprintf(buf, sizeof buf, "%.6g s (%.1f days)", seconds, seconds / 86400.0);
  else if (seconds >= 3600.0)
    std::snprintf(buf, sizeof buf, "%.6g s (%.1f hours)", seconds, seconds / 3600.0);
  else
    std::snprintf(buf, sizeof buf, "%.6g s", seconds);
  return buf;
}

}  // namespace railmap::pipeline
