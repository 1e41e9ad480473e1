#include "mobmotif/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include <json.hpp>

#include "mobmotif/error.hpp"
#include "mobmotif/geojson.hpp"
#include "mobmotif/parallel.hpp"
#include "mobmotif/report.hpp"

namespace mobmotif {

namespace {

namespace fs = std::filesystem;

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw Error(std::string("no ") + what + " file given");
  if (!fs::is_regular_file(path)) throw Error(std::string(what) + " file not found: " + path.string());
}

void require_optional(const fs::path& path, const char* what) {
  if (!path.empty()) require_file(path, what);
}

std::vector<Polygon> read_boundary(const fs::path& path) {
  std::vector<Polygon> out;
  for (auto& f : read_polygon_features(path)) {
    for (auto& p : f.polygons) out.push_back(std::move(p));
  }
  if (out.empty()) throw Error("boundary file holds no polygon: " + path.string());
  return out;
}

struct Writer {
  fs::path dir;
  std::vector<std::string>& artifacts;

  void operator()(const std::string& name, std::string_view content) {
    write_file_atomic(dir / name, content);
    artifacts.push_back(name);
  }
};

struct UserState {
  UserTrack track;
  std::vector<AnnotatedPoint> history;
  bool bot = false;
  HomeAssignment home;
  std::vector<UserDay> days;
  std::vector<MinedDay> mined;
  std::size_t rejected_open = 0;
  std::size_t rejected_no_home = 0;
};

std::string filtered_records_tsv(const std::vector<UserState>& users) {
  std::string out = "user_id\ttimestamp\tlat\tlon\n";
  for (const auto& u : users) {
    for (const auto& p : u.track.points) {
      out += p.user_id + '\t' + format_iso8601(p.timestamp) + '\t' + format_fixed(p.position.lat, 7) + '\t' +
             format_fixed(p.position.lon, 7) + '\n';
    }
  }
  return out;
}

std::string annotations_tsv(const std::vector<UserState>& users) {
  std::string out = "user_id\tlocal_time\tparcel\tactivity\n";
  for (const auto& u : users) {
    if (u.bot) continue;
    for (const auto& p : u.history) {
      out += p.record.user_id + '\t' + format_iso8601(p.local_time, false) + '\t' +
             (p.parcel ? std::to_string(*p.parcel) : std::string()) + '\t' + std::to_string(code(p.activity)) + '\n';
    }
  }
  return out;
}

std::string homes_csv(const std::vector<HomeAssignment>& homes) {
  std::string out = "user_id,home_parcel,rule\n";
  for (const auto& h : homes) {
    out += h.user_id + ',' + (h.home ? std::to_string(*h.home) : std::string()) + ',' + to_string(h.rule) + '\n';
  }
  return out;
}

std::string alignment_csv(const std::map<std::string, std::size_t>& outcomes) {
  std::string out = "outcome,trajectories\n";
  for (const auto& [k, v] : outcomes) out += k + ',' + std::to_string(v) + '\n';
  return out;
}

struct ZoneCount {
  std::string name;
  double population = 0.0;
  std::size_t homes = 0;
};

std::vector<ZoneCount> zone_counts(const RunConfig& cfg, const SpatialIndex& index,
                                   const std::vector<HomeAssignment>& homes) {
  const auto features = read_polygon_features(cfg.zones);
  std::vector<ZoneCount> zones;
  std::vector<std::vector<Polygon>> shapes;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    const auto pop = f.properties.find(cfg.zone_population_attribute);
    if (f.polygons.empty() || pop == f.properties.end()) continue;
    ZoneCount z;
    const auto name = f.properties.find("name");
    z.name = name != f.properties.end() ? name->second : "zone" + std::to_string(i + 1);
    try {
      z.population = std::stod(pop->second);
    } catch (const std::exception&) {
      throw Error("zone '" + z.name + "' has a non-numeric " + cfg.zone_population_attribute);
    }
    zones.push_back(z);
    shapes.push_back(f.polygons);
  }
  for (const auto& h : homes) {
    if (!h.home) continue;
    const auto& b = index.parcel(*h.home).bbox;
    const LatLon center{(b.min_lat + b.max_lat) / 2.0, (b.min_lon + b.max_lon) / 2.0};
    for (std::size_t z = 0; z < zones.size(); ++z) {
      if (any_contains(shapes[z], center)) {
        ++zones[z].homes;
        break;
      }
    }
  }
  return zones;
}

}  // namespace

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::annotate: return "annotate";
    case Stage::mine: return "mine";
    case Stage::shape: return "shape";
    case Stage::all: return "all";
  }
  return "unknown";
}

Stage parse_stage(std::string_view name) {
  for (auto s : {Stage::ingest, Stage::annotate, Stage::mine, Stage::shape, Stage::all}) {
    if (name == to_string(s)) return s;
  }
  throw Error("unknown stage '" + std::string(name) + "'");
}

void RunConfig::validate(Stage stage) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(std::string(name) + " must be positive");
  };
  positive(radius_m, "radius");
  positive(max_speed_mps, "max-speed");
  positive(min_residency_days, "min-days");
  positive(cutoff, "cutoff");
  positive(density_grid.bound, "density bound");
  if (min_slots <= 0 || min_slots > kSlotsPerDay) throw Error("min-slots must be within 1..48");
  if (max_nodes < 1) throw Error("max-nodes must be positive");
  if (density_grid.bins == 0) throw Error("density bins must be positive");
  if (workers == 0) throw Error("workers must be positive");
  if (std::abs(utc_offset_minutes) > 18 * 60) throw Error("utc-offset out of range");

  require_file(records, "records");
  require_optional(boundary, "boundary");
  require_optional(blocklist, "blocklist");
  if (stage != Stage::ingest) {
    require_file(parcels, "parcels");
    require_optional(scheme, "scheme");
  }
  if (stage == Stage::shape || stage == Stage::all) require_optional(zones, "zones");
}

void Manifest::set(std::string key, std::size_t value) {
  for (auto& [k, v] : counts) {
    if (k == key) {
      v = value;
      return;
    }
  }
  counts.emplace_back(std::move(key), value);
}

std::optional<std::size_t> Manifest::get(std::string_view key) const {
  for (const auto& [k, v] : counts) {
    if (k == key) return v;
  }
  return std::nullopt;
}

RunResult run_pipeline(Stage stage, const RunConfig& cfg) {
  cfg.validate(stage);
  fs::create_directories(cfg.output_dir);

  RunResult result;
  Manifest& m = result.manifest;
  Writer write{cfg.output_dir, result.artifacts};
  const auto reached = [stage](Stage s) { return stage == Stage::all || static_cast<int>(stage) >= static_cast<int>(s); };

  // ingest
  const RecordSchema schema = cfg.record_schema.empty() ? RecordSchema{} : RecordSchema::parse(cfg.record_schema);
  auto parsed = parse_records(cfg.records, schema);
  m.set("raw_lines", parsed.report.lines);
  m.set("raw_records", parsed.report.records + parsed.report.geocoded);
  m.set("malformed_lines", parsed.report.malformed);
  m.set("bad_coordinate_lines", parsed.report.bad_coord);
  m.set("geocoded_dropped", parsed.report.geocoded);
  m.set("gps_records", parsed.records.size());
  if (cfg.hash_user_ids) {
    for (auto& r : parsed.records) r.user_id = pseudonymize(r.user_id);
  }

  FilterConfig filter;
  filter.max_speed_mps = cfg.max_speed_mps;
  filter.min_residency_days = cfg.min_residency_days;
  filter.residency_mode = cfg.residency_mode;
  if (!cfg.blocklist.empty()) filter.keyword_blocklist = read_blocklist(cfg.blocklist);

  FilterConfig dedup_only = filter;
  dedup_only.keyword_blocklist.clear();
  auto records = prefilter(std::move(parsed.records), dedup_only);
  m.set("after_dedup", records.size());
  if (!cfg.boundary.empty()) {
    FilterConfig clip = dedup_only;
    clip.boundary = read_boundary(cfg.boundary);
    records = prefilter(std::move(records), clip);
  }
  m.set("after_boundary", records.size());
  FilterConfig keywords = dedup_only;
  keywords.keyword_blocklist = filter.keyword_blocklist;
  records = prefilter(std::move(records), keywords);
  m.set("after_keywords", records.size());

  auto tracks = group_by_user(std::move(records));
  m.set("users", tracks.size());
  std::vector<char> fast(tracks.size());
  std::vector<char> resident(tracks.size());
  parallel_for(tracks.size(), cfg.workers, [&](std::size_t i) {
    fast[i] = !speed_filter(tracks[i], filter).keep;
    resident[i] = !fast[i] && residency_filter(tracks[i], filter);
  });
  std::vector<UserState> users;
  std::size_t after_speed = 0;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    if (fast[i]) continue;
    ++after_speed;
    if (resident[i]) users.push_back({std::move(tracks[i]), {}, false, {}, {}, {}, 0, 0});
  }
  m.set("users_after_speed", after_speed);
  m.set("users_after_residency", users.size());
  std::size_t kept_records = 0;
  for (const auto& u : users) kept_records += u.track.points.size();
  m.set("records_after_user_filters", kept_records);
  write("filtered_records.tsv", filtered_records_tsv(users));

  std::optional<LoadedParcels> loaded;
  if (reached(Stage::annotate)) {
    const auto scheme = cfg.scheme.empty() ? ActivityScheme::defaults() : ActivityScheme::read(cfg.scheme);
    loaded.emplace(load_parcels(cfg.parcels, scheme, ParcelLoadOptions{cfg.category_attribute}));
    const auto& index = loaded->index;
    m.set("parcel_features", loaded->report.features);
    m.set("parcels_loaded", loaded->report.loaded);
    m.set("parcels_invalid", loaded->report.invalid);
    write("parcel_report.csv", parcel_report_csv(loaded->report));

    const std::chrono::minutes offset{cfg.utc_offset_minutes};
    parallel_for(users.size(), cfg.workers, [&](std::size_t i) {
      auto& u = users[i];
      u.history = annotate_history(u.track, index, offset, cfg.radius_m);
      u.bot = !stationary_bot_filter(u.history);
      if (u.bot) return;
      const auto actives = active_locations(u.history);
      u.home = infer_home(u.history, actives);
    });
    std::size_t no_context = 0;
    std::size_t annotated = 0;
    for (const auto& u : users) {
      if (u.bot) continue;
      for (const auto& p : u.history) {
        ++annotated;
        if (!p.parcel) ++no_context;
        else if (p.activity == Activity::others) ++no_context;
      }
    }
    m.set("users_after_bot_filter", static_cast<std::size_t>(
                                        std::count_if(users.begin(), users.end(), [](const auto& u) { return !u.bot; })));
    m.set("annotated_points", annotated);
    m.set("points_without_context", no_context);
    std::size_t night = 0;
    std::size_t top = 0;
    for (const auto& u : users) {
      if (u.bot) continue;
      result.homes.push_back(u.home);
      if (u.home.rule == HomeRule::night_mode) ++night;
      if (u.home.rule == HomeRule::top_residential) ++top;
    }
    m.set("homes_night_rule", night);
    m.set("homes_top_residential_rule", top);
    m.set("users_with_home", night + top);
    write("annotations.tsv", annotations_tsv(users));
    write("homes.csv", homes_csv(result.homes));
  }

  std::vector<MinedDay> mined;
  if (reached(Stage::mine)) {
    DaySelection selection;
    selection.min_slots = cfg.min_slots;
    selection.weekdays_only = cfg.weekdays_only;
    selection.scope = cfg.active_scope;
    std::vector<std::size_t> all_days(users.size());
    parallel_for(users.size(), cfg.workers, [&](std::size_t i) {
      auto& u = users[i];
      if (u.bot || !u.home.home) return;
      auto days = split_days(u.history);
      all_days[i] = days.size();
      u.days = select_active_days(std::move(days), selection);
      for (const auto& d : u.days) {
        auto built = build_daily_network(d, u.home);
        if (!built.network) {
          if (built.rejection == RejectReason::no_home) ++u.rejected_no_home;
          else ++u.rejected_open;
          continue;
        }
        MinedDay md{u.home.user_id, d.local_date, std::move(*built.network), {}};
        md.abm = abm_reduce(md.lbm);
        u.mined.push_back(std::move(md));
      }
    });
    std::size_t day_total = 0, active_users = 0, active_days = 0, open = 0, no_home = 0;
    for (std::size_t i = 0; i < users.size(); ++i) {
      const auto& u = users[i];
      day_total += all_days[i];
      active_days += u.days.size();
      if (!u.days.empty()) ++active_users;
      open += u.rejected_open;
      no_home += u.rejected_no_home;
      for (const auto& md : u.mined) mined.push_back(md);
    }
    m.set("user_days", day_total);
    m.set("active_users", active_users);
    m.set("active_user_days", active_days);
    m.set("rejected_days_open_walk", open);
    m.set("rejected_days_no_home", no_home);

    std::vector<DailyNetwork> lbm, abm;
    lbm.reserve(mined.size());
    abm.reserve(mined.size());
    for (const auto& md : mined) {
      lbm.push_back(md.lbm);
      abm.push_back(md.abm);
    }
    CensusOptions census;
    census.cutoff = cfg.cutoff;
    census.max_nodes = cfg.max_nodes;
    census.pin_home = cfg.pin_home;
    census.workers = cfg.workers;
    result.censuses.push_back(motif_census(lbm, MotifKind::lbm, census));
    result.censuses.push_back(motif_census(abm, MotifKind::abm, census));
    m.set("networks_lbm", result.censuses[0].total);
    m.set("networks_abm", result.censuses[1].total);
    m.set("motifs_lbm", result.censuses[0].motifs.size());
    m.set("motifs_abm", result.censuses[1].motifs.size());
    write("census.csv", census_csv(result.censuses));
    write("size_groups.csv", size_groups_csv(result.censuses));
    write("motif_edges.txt", motif_edges_text(result.censuses));

    result.distances = distance_stats(mined, cfg.max_nodes);
    write("distance_stats.csv", distance_stats_csv(result.distances));
  }

  if (reached(Stage::shape)) {
    std::vector<std::vector<Vec2>> streams(mined.size());
    std::vector<std::optional<AlignFailure>> failures(mined.size());
    std::map<std::string, const UserState*> by_user;
    for (const auto& u : users) by_user[u.home.user_id] = &u;
    // Raw points of each mined day, in day order per user.
    std::vector<std::vector<LatLon>> points(mined.size());
    {
      std::map<std::pair<std::string, std::chrono::sys_days>, std::size_t> slot;
      for (std::size_t i = 0; i < mined.size(); ++i) slot[{mined[i].user_id, mined[i].local_date}] = i;
      for (const auto& u : users) {
        for (const auto& d : u.days) {
          const auto it = slot.find({u.home.user_id, d.local_date});
          if (it == slot.end()) continue;
          for (const auto& p : d.points) points[it->second].push_back(p.record.position);
        }
      }
    }
    parallel_for(mined.size(), cfg.workers, [&](std::size_t i) {
      const auto& net = mined[i].lbm;
      const auto aligned = align_trajectory(points[i], net.nodes[net.home_index].anchor);
      if (aligned.aligned) streams[i] = aligned.aligned->normalized;
      else failures[i] = aligned.failure;
    });
    std::map<std::string, std::size_t> outcomes;
    std::vector<std::vector<Vec2>> good;
    for (std::size_t i = 0; i < mined.size(); ++i) {
      if (failures[i]) ++outcomes[std::string("skipped_") + to_string(*failures[i])];
      else {
        ++outcomes["aligned"];
        good.push_back(std::move(streams[i]));
      }
    }
    m.set("trajectories_aligned", outcomes["aligned"]);
    m.set("trajectories_skipped", mined.size() - outcomes["aligned"]);
    result.density = density_histogram(good, cfg.density_grid, cfg.pooling);
    m.set("density_points_in_range", result.density->in_range_points);
    m.set("density_points_out_of_range", result.density->out_of_range_points);
    write("density.csv", density_csv(*result.density));
    write("alignment.csv", alignment_csv(outcomes));

    if (!cfg.zones.empty()) {
      const auto zones = zone_counts(cfg, loaded->index, result.homes);
      std::string out = "zone,population,homes\n";
      std::vector<double> pops, homes;
      for (const auto& z : zones) {
        out += z.name + ',' + format_fixed(z.population, 0) + ',' + std::to_string(z.homes) + '\n';
        pops.push_back(z.population);
        homes.push_back(static_cast<double>(z.homes));
      }
      try {
        result.correlation = correlate(homes, pops);
        out += "# n,r,p_value\n# " + std::to_string(result.correlation->n) + ',' +
               format_fixed(result.correlation->r, 6) + ',' + format_fixed(result.correlation->p_value, 6) + '\n';
      } catch (const std::domain_error& e) {
        out += std::string("# correlation undefined: ") + e.what() + '\n';
      }
      m.set("zones", zones.size());
      write("correlation.csv", out);
    }
  }

  nlohmann::ordered_json doc;
  doc["stage"] = to_string(stage);
  auto& counts = doc["counts"];
  counts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.counts) counts[k] = v;
  auto artifacts = result.artifacts;
  artifacts.push_back("manifest.json");
  doc["artifacts"] = artifacts;
  write("manifest.json", doc.dump(2) + "\n");
  return result;
}

}  // namespace mobmotif
