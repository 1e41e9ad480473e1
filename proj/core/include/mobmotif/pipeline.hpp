#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mobmotif/annotate.hpp"
#include "mobmotif/ingest.hpp"
#include "mobmotif/motif.hpp"
#include "mobmotif/shape_stats.hpp"

namespace mobmotif {

enum class Stage { ingest, annotate, mine, shape, all };

const char* to_string(Stage stage);
/// Throws Error for unknown names.
Stage parse_stage(std::string_view name);

struct RunConfig {
  std::filesystem::path records;
  std::filesystem::path parcels;
  /// Optional inputs; empty paths are unused.
  std::filesystem::path boundary;
  std::filesystem::path blocklist;
  std::filesystem::path scheme;
  std::filesystem::path zones;
  std::string zone_population_attribute = "population";
  std::string category_attribute = "category";
  std::string record_schema;
  std::filesystem::path output_dir = "mobmotif_out";

  double radius_m = kDefaultSearchRadiusM;
  double max_speed_mps = 240.0;
  double min_residency_days = 30.0;
  ResidencyMode residency_mode = ResidencyMode::span;
  int min_slots = 6;
  bool weekdays_only = true;
  ActiveScope active_scope = ActiveScope::day;
  double cutoff = 0.005;
  std::size_t max_nodes = 6;
  bool pin_home = true;
  int utc_offset_minutes = 0;
  bool hash_user_ids = true;
  Pooling pooling = Pooling::per_point;
  DensityGrid density_grid;
  unsigned workers = 1;

  /// Throws Error naming the offending setting or missing input path.
  void validate(Stage stage) const;
};

/// Ordered stage counts written to manifest.json.
struct Manifest {
  std::vector<std::pair<std::string, std::size_t>> counts;

  void set(std::string key, std::size_t value);
  std::optional<std::size_t> get(std::string_view key) const;
};

struct RunResult {
  Manifest manifest;
  std::vector<HomeAssignment> homes;
  std::vector<MotifCensus> censuses;
  std::vector<DistanceStats> distances;
  std::optional<ReferenceFrameDensity> density;
  std::optional<Correlation> correlation;
  /// File names written into the output directory.
  std::vector<std::string> artifacts;
};

/// Runs the stage chain through `stage` and writes every artifact atomically
/// into cfg.output_dir. Throws Error on fatal input problems.
RunResult run_pipeline(Stage stage, const RunConfig& cfg);

}  // namespace mobmotif
