#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mobmotif/geo.hpp"
#include "mobmotif/motif.hpp"
#include "mobmotif/parcel_index.hpp"

namespace mobmotif {

/// A planted daily walk. Tokens are activity labels with an optional numeric
/// suffix; equal tokens are the same place, e.g. "H R1 H R2 H" visits two
/// different residences. The walk must start and end with "H".
struct MotifTemplate {
  std::string walk;
  double weight = 1.0;
  double spacing_km = 2.0;

  /// "H W H|0.5|3.0" (walk|weight|spacing_km).
  static MotifTemplate parse(std::string_view text);
};

struct SynthConfig {
  std::uint64_t seed = 42;
  /// South-west corner of the parcel grid.
  LatLon origin{41.80, -87.75};
  std::size_t cells_per_side = 120;
  double cell_m = 100.0;
  /// Background land-use fractions for codes 1..12.
  std::array<double, kActivityCount> activity_mix{0.7415, 0.0012, 0.1236, 0.0079, 0.0015, 0.0271,
                                                  0.0050, 0.0191, 0.0007, 0.0085, 0.0349, 0.0290};
  std::size_t num_users = 100;
  std::vector<MotifTemplate> templates{{"H W H", 1.0, 2.0}};
  int tweets_min = 8;
  int tweets_max = 12;
  std::size_t stationary_bots = 0;
  std::size_t teleporters = 0;
  std::size_t tourists = 0;
  /// Weekdays on which each user follows their template.
  std::size_t active_weekdays = 20;
  /// Calendar window the active weekdays are spread over.
  std::size_t span_days = 42;
  /// A Monday.
  std::chrono::sys_days epoch = std::chrono::sys_days{std::chrono::year{2014} / 3 / 3};
  int utc_offset_minutes = -360;
};

enum class SynthRole { resident, tourist, teleporter, stationary_bot };

const char* to_string(SynthRole role);

struct SynthUser {
  std::string user_id;
  SynthRole role = SynthRole::resident;
  /// Index into SynthConfig::templates; unused for bots.
  std::size_t template_index = 0;
  ParcelId home = 0;
};

struct ExpectedClass {
  MotifKind kind = MotifKind::lbm;
  std::string signature;
  std::size_t node_count = 0;
  double percentage = 0.0;
};

struct ExpectedDistance {
  MotifKind kind = MotifKind::lbm;
  std::string group;
  double d_hat_km = 0.0;
  double D_hat_km = 0.0;
};

/// Everything the pipeline should recover, derived from the plan before any
/// record is emitted.
struct GroundTruth {
  std::vector<SynthUser> users;
  std::size_t expected_users = 0;
  std::size_t expected_networks = 0;
  std::vector<ExpectedClass> census;
  /// Computed from parcel-center geometry.
  std::vector<ExpectedDistance> distances;
};

struct SynthOutput {
  std::string parcels_geojson;
  std::string boundary_geojson;
  std::string records_tsv;
  GroundTruth truth;
};

/// Deterministic for a given config. Throws Error for infeasible configs.
SynthOutput generate(const SynthConfig& config);

std::string ground_truth_json(const GroundTruth& truth);
GroundTruth read_ground_truth(const std::filesystem::path& path);

/// Writes parcels.geojson, boundary.geojson, records.tsv, ground_truth.json
/// and run.cfg (a config file for the pipeline CLI) into dir.
void write_synth(const SynthOutput& output, const SynthConfig& config, const std::filesystem::path& dir);

}  // namespace mobmotif
