// railmap: modulation-based sub-circuit identification toolkit.
//
// Simulates per-rail supply modulation on a synthetic die, renders thermal
// (LIT) and optical (LLSI) acquisitions, lock-in demodulates them into
// amplitude/phase maps, classifies rail-attributed regions and reports
// search-space and scan-time metrics.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "railmap/analysis.hpp"
#include "railmap/errors.hpp"
#include "railmap/pipeline.hpp"

namespace {

int exit_code_for(railmap::ErrorCategory c) {
  switch (c) {
    case railmap::ErrorCategory::syntax: return 2;
    case railmap::ErrorCategory::validation: return 3;
    case railmap::ErrorCategory::io: return 4;
    case railmap::ErrorCategory::format: return 5;
    case railmap::ErrorCategory::config: return 6;
    case railmap::ErrorCategory::numeric: return 7;
  }
  return 1;
}

railmap::pipeline::PipelineConfig load_config(const std::string& config_path,
                                              const std::string& rail_override,
                                              const std::string& out_override,
                                              std::int64_t seed_override) {
  auto cfg = railmap::pipeline::load_pipeline_config(config_path);
  if (!rail_override.empty()) cfg.rail_id = rail_override;
  if (!out_override.empty()) cfg.output_dir = out_override;
  if (seed_override >= 0) {
    cfg.lit.seed = static_cast<std::uint64_t>(seed_override);
    cfg.llsi.seed = static_cast<std::uint64_t>(seed_override);
  }
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modulation-based sub-circuit identification (LIT / LLSI simulation & analysis)"};
  app.require_subcommand(1);

  std::string config_path, rail_override, out_override;
  std::int64_t seed_override = -1;

  auto add_pipeline_flags = [&](CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "pipeline config file")->required();
    cmd->add_option("--rail", rail_override, "override pipeline.rail_id");
    cmd->add_option("--out", out_override, "override pipeline.output_dir");
    cmd->add_option("--seed", seed_override, "override acquisition seed");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "simulate an acquisition (frames or tiles)");
  add_pipeline_flags(simulate);
  CLI::App* analyze = app.add_subcommand("analyze", "demodulate/stitch, classify and report");
  add_pipeline_flags(analyze);

  CLI::App* plan = app.add_subcommand("plan", "scan-time budget for a stepped campaign");
  railmap::analysis::ScanPlan plan_in;
  std::string plan_mask, plan_report;
  plan->add_option("--width-um", plan_in.area_width_um, "scan area width (um)")->required();
  plan->add_option("--height-um", plan_in.area_height_um, "scan area height (um)")->required();
  plan->add_option("--step-x-um", plan_in.step_x_um, "step size x (um)")->required();
  plan->add_option("--step-y-um", plan_in.step_y_um, "step size y (um)")->required();
  plan->add_option("--attempts", plan_in.n_attempts_per_position, "attempts per position")
      ->default_val(1);
  plan->add_option("--t-attempt-s", plan_in.t_attempt_s, "time per attempt (s)")->required();
  plan->add_option("--comb", plan_in.comb_params, "fault parameter combinations")->default_val(1);
  plan->add_option("--mask", plan_mask, "0/1 map file restricting the campaign");
  plan->add_option("--report", plan_report, "write a JSON report here");

  CLI::App* stitch = app.add_subcommand("stitch", "stitch a tile set into a whole-die map");
  std::string stitch_index, stitch_out;
  stitch->add_option("--index", stitch_index, "simulate_index.json of a tile set")->required();
  stitch->add_option("--out-map", stitch_out, "output map file (.mfrs)")->required();

  CLI::App* validate = app.add_subcommand("validate-floorplan", "parse and validate a floorplan");
  std::string validate_path;
  validate->add_option("floorplan", validate_path, "floorplan file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      railmap::pipeline::cmd_simulate(
          load_config(config_path, rail_override, out_override, seed_override));
    } else if (analyze->parsed()) {
      railmap::pipeline::cmd_analyze(
          load_config(config_path, rail_override, out_override, seed_override));
    } else if (plan->parsed()) {
      std::optional<std::filesystem::path> mask, report;
      if (!plan_mask.empty()) mask = plan_mask;
      if (!plan_report.empty()) report = plan_report;
      railmap::pipeline::cmd_plan(plan_in, mask, report, std::cout);
    } else if (stitch->parsed()) {
      railmap::pipeline::cmd_stitch(stitch_index, stitch_out, std::cout);
    } else if (validate->parsed()) {
      railmap::pipeline::cmd_validate_floorplan(validate_path, std::cout);
    }
  } catch (const railmap::Error& e) {
    std::cerr << "error[" << railmap::to_string(e.category()) << "]: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
