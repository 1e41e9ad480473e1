// Command line front end: synthetic worlds and the staged mining pipeline.

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mobmotif/error.hpp"
#include "mobmotif/pipeline.hpp"
#include "mobmotif/synth.hpp"

namespace fs = std::filesystem;
using namespace mobmotif;

namespace {

fs::path resolve(const fs::path& dir, const fs::path& p) {
  if (p.empty() || dir.empty() || p.is_absolute()) return p;
  return dir / p;
}

void print_summary(const RunResult& r, const fs::path& out) {
  for (const auto& [k, v] : r.manifest.counts) std::cout << k << '=' << v << '\n';
  std::cout << "wrote " << r.artifacts.size() + 1 << " files to " << out.string() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Daily mobility motif mining over geo-located point records"};
  app.set_config("--config", "", "key=value run configuration; flags override it");
  app.require_subcommand(1);

  RunConfig cfg;
  fs::path data_dir;
  std::string scope = "day";
  std::string residency = "span";
  std::string pooling = "per-point";
  bool all_days = false;
  bool free_home = false;
  bool keep_ids = false;

  app.add_option("--data-dir", data_dir, "Base directory for relative input paths");
  app.add_option("--records", cfg.records, "Point record stream");
  app.add_option("--schema", cfg.record_schema, "Column layout, e.g. delim=comma,user=0,ts=1,lat=2,lon=3,header=1");
  app.add_option("--parcels", cfg.parcels, "Land-use parcel GeoJSON");
  app.add_option("--category-attribute", cfg.category_attribute, "Parcel property holding the land-use category");
  app.add_option("--scheme", cfg.scheme, "category<TAB>code activity scheme");
  app.add_option("--boundary", cfg.boundary, "Study-region polygon GeoJSON");
  app.add_option("--blocklist", cfg.blocklist, "Keyword blocklist, one per line");
  app.add_option("--zones", cfg.zones, "Zone GeoJSON with a population property");
  app.add_option("--population-attribute", cfg.zone_population_attribute, "Zone property holding the population");
  app.add_option("--out", cfg.output_dir, "Output directory")->capture_default_str();
  app.add_option("--radius", cfg.radius_m, "Parcel search radius in meters")->capture_default_str();
  app.add_option("--max-speed", cfg.max_speed_mps, "Speed limit in m/s")->capture_default_str();
  app.add_option("--min-days", cfg.min_residency_days, "Residency in days (strictly more)")->capture_default_str();
  app.add_option("--residency", residency, "Residency measure")
      ->check(CLI::IsMember({"span", "active-days"}))
      ->capture_default_str();
  app.add_option("--min-slots", cfg.min_slots, "Half-hour slots for an active day")->capture_default_str();
  app.add_flag("--all-days", all_days, "Keep weekend days");
  app.add_option("--active-scope", scope, "Apply the slot threshold per day or per user")
      ->check(CLI::IsMember({"day", "user"}))
      ->capture_default_str();
  app.add_option("--cutoff", cfg.cutoff, "Motif frequency cutoff (fraction)")->capture_default_str();
  app.add_option("--max-nodes", cfg.max_nodes, "Largest network size given its own class")->capture_default_str();
  app.add_flag("--free-home", free_home, "Do not pin the home node during canonicalization");
  app.add_option("--utc-offset", cfg.utc_offset_minutes, "Fixed local offset in minutes")->capture_default_str();
  app.add_flag("--keep-ids", keep_ids, "Do not hash user identifiers");
  app.add_option("--pooling", pooling, "Density pooling weight")
      ->check(CLI::IsMember({"per-point", "per-user"}))
      ->capture_default_str();
  app.add_option("--density-bound", cfg.density_grid.bound, "Density half-width in sigma units")
      ->capture_default_str();
  app.add_option("--density-bins", cfg.density_grid.bins, "Density bins per axis")->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads")->capture_default_str();

  std::map<std::string, Stage> stages;
  std::vector<CLI::App*> stage_commands;
  const std::vector<std::pair<Stage, const char*>> stage_help{
      {Stage::ingest, "Parse and filter records"},
      {Stage::annotate, "Ingest, then annotate with parcels and infer homes"},
      {Stage::mine, "Annotate, then build daily networks and run the motif census"},
      {Stage::shape, "Mine, then align trajectories and build the density"},
      {Stage::all, "Every stage"}};
  for (const auto& [stage, help] : stage_help) {
    auto* sub = app.add_subcommand(to_string(stage), help);
    sub->fallthrough();
    stage_commands.push_back(sub);
  }

  SynthConfig synth;
  fs::path synth_out = "synth_world";
  std::vector<std::string> templates;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic world with ground truth");
  synth_cmd->fallthrough(false);
  synth_cmd->add_option("--dir", synth_out, "Output directory")->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--users", synth.num_users, "Legitimate users")->capture_default_str();
  synth_cmd->add_option("--template", templates, "walk|weight|spacing_km, e.g. \"H W H|0.5|3\"");
  synth_cmd->add_option("--tweets-min", synth.tweets_min, "Fewest records per day")->capture_default_str();
  synth_cmd->add_option("--tweets-max", synth.tweets_max, "Most records per day")->capture_default_str();
  synth_cmd->add_option("--bots", synth.stationary_bots, "Stationary broadcasters")->capture_default_str();
  synth_cmd->add_option("--teleporters", synth.teleporters, "Users exceeding the speed limit")->capture_default_str();
  synth_cmd->add_option("--tourists", synth.tourists, "Short-stay users")->capture_default_str();
  synth_cmd->add_option("--weekdays", synth.active_weekdays, "Active weekdays per user")->capture_default_str();
  synth_cmd->add_option("--cells", synth.cells_per_side, "Parcels per grid side")->capture_default_str();
  synth_cmd->add_option("--cell-m", synth.cell_m, "Parcel side in meters")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth_cmd->parsed()) {
      if (!templates.empty()) {
        synth.templates.clear();
        for (const auto& t : templates) synth.templates.push_back(MotifTemplate::parse(t));
      }
      const auto world = generate(synth);
      write_synth(world, synth, synth_out);
      std::cout << "wrote synthetic world to " << synth_out.string() << '\n';
      return EXIT_SUCCESS;
    }

    Stage stage = Stage::all;
    for (auto* sub : stage_commands) {
      if (sub->parsed()) stage = parse_stage(sub->get_name());
    }
    for (auto* p : {&cfg.records, &cfg.parcels, &cfg.scheme, &cfg.boundary, &cfg.blocklist, &cfg.zones}) {
      *p = resolve(data_dir, *p);
    }
    cfg.weekdays_only = !all_days;
    cfg.active_scope = scope == "user" ? ActiveScope::user : ActiveScope::day;
    cfg.residency_mode = residency == "active-days" ? ResidencyMode::active_days : ResidencyMode::span;
    cfg.pooling = pooling == "per-user" ? Pooling::per_user : Pooling::per_point;
    cfg.pin_home = !free_home;
    cfg.hash_user_ids = !keep_ids;

    const auto result = run_pipeline(stage, cfg);
    print_summary(result, cfg.output_dir);
    return EXIT_SUCCESS;
  } catch (const std::exception& e) {
    std::cerr << "mobmotif: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
}
