#include "mobmotif/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <tuple>

#include <json.hpp>

#include "mobmotif/error.hpp"
#include "mobmotif/geojson.hpp"
#include "mobmotif/report.hpp"
#include "mobmotif/time.hpp"

namespace mobmotif {

namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

enum StreamTag : std::uint64_t { kLandUse = 1, kAssignment, kResident, kTourist, kTeleporter, kBot };

std::mt19937_64 substream(std::uint64_t seed, StreamTag tag, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64((static_cast<std::uint64_t>(tag) << 32) + index)));
}

Activity activity_of(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::H:
    case ActivityLabel::R: return Activity::residential;
    case ActivityLabel::W: return Activity::office;
    case ActivityLabel::S: return Activity::k12_school;
    case ActivityLabel::C: return Activity::university;
    case ActivityLabel::U: return Activity::mixed_use;
    case ActivityLabel::T: return Activity::transportation;
    case ActivityLabel::Sh: return Activity::shopping;
    case ActivityLabel::E: return Activity::recreation;
    case ActivityLabel::Se: return Activity::services;
    case ActivityLabel::Ho: return Activity::hotel;
    case ActivityLabel::O: return Activity::others;
  }
  return Activity::others;
}

// A template resolved into distinct places. Place 0 is home.
struct TemplatePlan {
  std::vector<std::size_t> walk;
  std::vector<ActivityLabel> place_labels;
};

TemplatePlan plan_template(const MotifTemplate& t) {
  TemplatePlan plan;
  std::map<std::string, std::size_t> index;
  std::size_t pos = 0;
  const std::string& w = t.walk;
  while (pos < w.size()) {
    while (pos < w.size() && std::isspace(static_cast<unsigned char>(w[pos]))) ++pos;
    if (pos == w.size()) break;
    std::size_t end = pos;
    while (end < w.size() && !std::isspace(static_cast<unsigned char>(w[end]))) ++end;
    const std::string token = w.substr(pos, end - pos);
    pos = end;

    std::size_t digits = token.size();
    while (digits > 0 && std::isdigit(static_cast<unsigned char>(token[digits - 1]))) --digits;
    const auto label = parse_label(std::string_view(token).substr(0, digits));
    if (!label || digits == 0) throw Error("template '" + w + "': unknown token '" + token + "'");
    if (*label == ActivityLabel::H && token != "H") throw Error("template '" + w + "': home is written as plain H");

    auto [it, fresh] = index.try_emplace(token, plan.place_labels.size());
    if (fresh) plan.place_labels.push_back(*label);
    if (!plan.walk.empty() && plan.walk.back() == it->second) {
      throw Error("template '" + w + "': repeated consecutive place '" + token + "'");
    }
    plan.walk.push_back(it->second);
  }
  if (plan.walk.empty() || plan.place_labels[plan.walk.front()] != ActivityLabel::H ||
      plan.place_labels[plan.walk.back()] != ActivityLabel::H) {
    throw Error("template '" + w + "' must start and end with H");
  }
  return plan;
}

struct Grid {
  LatLon origin;
  std::size_t n;
  double cell_m;
  double dlat;
  double dlon;

  Grid(LatLon o, std::size_t cells, double size_m) : origin(o), n(cells), cell_m(size_m) {
    dlat = size_m / kMetersPerDegree;
    const double mid_lat = o.lat + dlat * static_cast<double>(cells) / 2.0;
    dlon = size_m / (kMetersPerDegree * std::cos(mid_lat * std::numbers::pi / 180.0));
  }

  std::size_t index(std::size_t r, std::size_t c) const { return r * n + c; }
  BBox box(std::size_t cell) const {
    const auto r = static_cast<double>(cell / n);
    const auto c = static_cast<double>(cell % n);
    return {origin.lat + r * dlat, origin.lon + c * dlon, origin.lat + (r + 1) * dlat, origin.lon + (c + 1) * dlon};
  }
  LatLon center(std::size_t cell) const {
    const auto b = box(cell);
    return {(b.min_lat + b.max_lat) / 2.0, (b.min_lon + b.max_lon) / 2.0};
  }
};

struct Placement {
  std::vector<std::size_t> cells;  // per place, place 0 = home
};

struct Record {
  Timestamp utc = 0;
  std::string user;
  LatLon pos;
};

class Planner {
 public:
  Planner(const SynthConfig& cfg, const Grid& grid) : cfg_(cfg), grid_(grid), forced_(grid.n * grid.n) {}

  std::optional<Placement> place(const TemplatePlan& plan, double spacing_km, std::mt19937_64& rng) {
    const double spacing_m = spacing_km * 1000.0;
    const auto margin = static_cast<std::size_t>(std::ceil(spacing_m / grid_.cell_m)) + 1;
    if (2 * margin >= grid_.n) throw Error("grid too small for template spacing");
    std::uniform_int_distribution<std::size_t> pick(margin, grid_.n - 1 - margin);
    std::uniform_int_distribution<int> quarter(0, 3);
    const std::size_t places = plan.place_labels.size() - 1;

    for (int attempt = 0; attempt < 2000; ++attempt) {
      const std::size_t hr = pick(rng);
      const std::size_t hc = pick(rng);
      const double base = quarter(rng) * std::numbers::pi / 2.0;
      Placement p;
      p.cells.push_back(grid_.index(hr, hc));
      for (std::size_t j = 0; j < places; ++j) {
        const double theta = base + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(places);
        const auto dr = std::lround(spacing_m * std::sin(theta) / grid_.cell_m);
        const auto dc = std::lround(spacing_m * std::cos(theta) / grid_.cell_m);
        p.cells.push_back(grid_.index(static_cast<std::size_t>(static_cast<long>(hr) + dr),
                                      static_cast<std::size_t>(static_cast<long>(hc) + dc)));
      }
      if (compatible(plan, p)) {
        for (std::size_t k = 0; k < p.cells.size(); ++k) forced_[p.cells[k]] = activity_of(plan.place_labels[k]);
        return p;
      }
    }
    return std::nullopt;
  }

  const std::vector<std::optional<Activity>>& forced() const { return forced_; }

 private:
  bool compatible(const TemplatePlan& plan, const Placement& p) const {
    std::set<std::size_t> distinct(p.cells.begin(), p.cells.end());
    if (distinct.size() != p.cells.size()) return false;
    for (std::size_t k = 0; k < p.cells.size(); ++k) {
      const auto& f = forced_[p.cells[k]];
      if (f && *f != activity_of(plan.place_labels[k])) return false;
    }
    return true;
  }

  const SynthConfig& cfg_;
  const Grid& grid_;
  std::vector<std::optional<Activity>> forced_;
};

std::vector<std::chrono::sys_days> weekdays_in(std::chrono::sys_days first, std::size_t span_days) {
  std::vector<std::chrono::sys_days> out;
  for (std::size_t d = 0; d < span_days; ++d) {
    const auto day = first + std::chrono::days{static_cast<int>(d)};
    if (is_weekday(day)) out.push_back(day);
  }
  return out;
}

std::vector<std::chrono::sys_days> spread(const std::vector<std::chrono::sys_days>& days, std::size_t count) {
  if (count > days.size()) throw Error("active weekdays exceed weekdays available in the span");
  std::vector<std::chrono::sys_days> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t idx = count == 1 ? 0 : i * (days.size() - 1) / (count - 1);
    out.push_back(days[idx]);
  }
  return out;
}

class Emitter {
 public:
  Emitter(const SynthConfig& cfg, const Grid& grid, std::vector<Record>& out) : cfg_(cfg), grid_(grid), out_(out) {}

  // One day following `walk` over `cells`. Returns the local time of the
  // morning tweet.
  Timestamp day(const std::string& user, std::chrono::sys_days date, const std::vector<std::size_t>& walk,
                const std::vector<std::size_t>& cells, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(cfg_.tweets_min, cfg_.tweets_max);
    const int total = count(rng);
    const int daytime = total - 3;

    std::vector<int> day_slots(28);
    std::iota(day_slots.begin(), day_slots.end(), 14);
    std::shuffle(day_slots.begin(), day_slots.end(), rng);
    day_slots.resize(static_cast<std::size_t>(daytime));
    std::sort(day_slots.begin(), day_slots.end());

    std::vector<int> evening{42, 43, 44, 45, 46, 47};
    std::shuffle(evening.begin(), evening.end(), rng);
    evening.resize(2);
    std::sort(evening.begin(), evening.end());
    const int morning = 10 + std::uniform_int_distribution<int>(0, 1)(rng);

    const std::size_t home_cell = cells[walk.front()];
    std::vector<std::size_t> middle;
    for (std::size_t i = 1; i + 1 < walk.size(); ++i) middle.push_back(cells[walk[i]]);

    // Split the daytime slots into one non-empty run per middle visit.
    std::vector<std::size_t> slot_cell(day_slots.size(), home_cell);
    if (!middle.empty()) {
      std::vector<int> gaps(static_cast<std::size_t>(daytime - 1));
      std::iota(gaps.begin(), gaps.end(), 1);
      std::shuffle(gaps.begin(), gaps.end(), rng);
      gaps.resize(middle.size() - 1);
      std::sort(gaps.begin(), gaps.end());
      std::size_t visit = 0;
      for (int i = 0; i < daytime; ++i) {
        while (visit < gaps.size() && i >= gaps[visit]) ++visit;
        slot_cell[static_cast<std::size_t>(i)] = middle[visit];
      }
    }

    const Timestamp day_start = static_cast<Timestamp>(date.time_since_epoch().count()) * kSecondsPerDay;
    const Timestamp morning_time = tweet(user, day_start, morning, home_cell, rng);
    for (std::size_t i = 0; i < day_slots.size(); ++i) tweet(user, day_start, day_slots[i], slot_cell[i], rng);
    for (int s : evening) tweet(user, day_start, s, home_cell, rng);
    return morning_time;
  }

  void at(const std::string& user, Timestamp local_time, std::size_t cell, std::mt19937_64& rng) {
    out_.push_back({local_time - cfg_.utc_offset_minutes * 60LL, user, position(cell, rng)});
  }

 private:
  Timestamp tweet(const std::string& user, Timestamp day_start, int slot, std::size_t cell, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> within(300, 1499);
    const Timestamp local = day_start + slot * 1800 + within(rng);
    at(user, local, cell, rng);
    return local;
  }

  LatLon position(std::size_t cell, std::mt19937_64& rng) const {
    const auto b = grid_.box(cell);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    const double fy = u(rng);
    const double fx = u(rng);
    return {b.min_lat + fy * (b.max_lat - b.min_lat), b.min_lon + fx * (b.max_lon - b.min_lon)};
  }

  const SynthConfig& cfg_;
  const Grid& grid_;
  std::vector<Record>& out_;
};

void validate(const SynthConfig& cfg, const std::vector<TemplatePlan>& plans) {
  if (cfg.templates.empty()) throw Error("synth config needs at least one template");
  if (cfg.tweets_min < 6) throw Error("tweets_min must be at least 6 to fill six half-hour slots");
  if (cfg.tweets_max < cfg.tweets_min) throw Error("tweets_max must not be below tweets_min");
  if (cfg.tweets_max - 3 > 28) throw Error("tweets_max exceeds the 31 available distinct slots");
  if (cfg.cells_per_side < 4 || !(cfg.cell_m > 0.0)) throw Error("grid needs at least 4 cells per side and cell_m > 0");
  double weights = 0.0;
  for (std::size_t i = 0; i < cfg.templates.size(); ++i) {
    const auto& t = cfg.templates[i];
    if (!(t.spacing_km > 0.0)) throw Error("template '" + t.walk + "': spacing must be positive");
    if (t.weight < 0.0) throw Error("template '" + t.walk + "': negative weight");
    weights += t.weight;
    const auto middle = plans[i].walk.size() >= 2 ? plans[i].walk.size() - 2 : 0;
    if (static_cast<int>(middle) > cfg.tweets_min - 3) {
      throw Error("template '" + t.walk + "' is longer than tweets_per_day allows");
    }
  }
  if (std::abs(weights - 1.0) > 1e-9) throw Error("template weights must sum to 1");
  double mix = std::accumulate(cfg.activity_mix.begin(), cfg.activity_mix.end(), 0.0);
  if (!(mix > 0.0)) throw Error("activity mix must have positive total");
}

// Largest-remainder apportionment of n users over the template weights.
std::vector<std::size_t> apportion(const std::vector<MotifTemplate>& templates, std::size_t n) {
  std::vector<std::size_t> counts(templates.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    const double exact = templates[i].weight * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    assigned += counts[i];
    remainders.emplace_back(-(exact - static_cast<double>(counts[i])), i);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++counts[remainders[k % remainders.size()].second];
  return counts;
}

std::string fixed7(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.7f", v);
  return buf;
}

}  // namespace

MotifTemplate MotifTemplate::parse(std::string_view text) {
  MotifTemplate t;
  const auto a = text.find('|');
  const auto b = a == std::string_view::npos ? a : text.find('|', a + 1);
  if (a == std::string_view::npos || b == std::string_view::npos) {
    throw Error("template must look like 'H W H|weight|spacing_km'");
  }
  t.walk = std::string(text.substr(0, a));
  try {
    t.weight = std::stod(std::string(text.substr(a + 1, b - a - 1)));
    t.spacing_km = std::stod(std::string(text.substr(b + 1)));
  } catch (const std::exception&) {
    throw Error("template '" + std::string(text) + "': bad weight or spacing");
  }
  return t;
}

const char* to_string(SynthRole role) {
  switch (role) {
    case SynthRole::resident: return "resident";
    case SynthRole::tourist: return "tourist";
    case SynthRole::teleporter: return "teleporter";
    case SynthRole::stationary_bot: return "stationary_bot";
  }
  return "unknown";
}

SynthOutput generate(const SynthConfig& cfg) {
  std::vector<TemplatePlan> plans;
  for (const auto& t : cfg.templates) plans.push_back(plan_template(t));
  validate(cfg, plans);

  const Grid grid(cfg.origin, cfg.cells_per_side, cfg.cell_m);
  const std::size_t cells = grid.n * grid.n;

  std::vector<Activity> land_use(cells);
  {
    auto rng = substream(cfg.seed, kLandUse, 0);
    std::discrete_distribution<int> mix(cfg.activity_mix.begin(), cfg.activity_mix.end());
    for (auto& a : land_use) a = static_cast<Activity>(mix(rng) + 1);
  }

  std::vector<std::size_t> assignment;
  {
    const auto counts = apportion(cfg.templates, cfg.num_users);
    for (std::size_t t = 0; t < counts.size(); ++t) assignment.insert(assignment.end(), counts[t], t);
    auto rng = substream(cfg.seed, kAssignment, 0);
    std::shuffle(assignment.begin(), assignment.end(), rng);
  }

  const auto all_weekdays = weekdays_in(cfg.epoch, cfg.span_days);
  const auto active_days = spread(all_weekdays, cfg.active_weekdays);
  std::vector<std::chrono::sys_days> tourist_days;
  for (const auto& d : weekdays_in(cfg.epoch, 14)) {
    if (tourist_days.size() < cfg.active_weekdays) tourist_days.push_back(d);
  }

  Planner planner(cfg, grid);
  GroundTruth truth;
  std::vector<Record> records;
  Emitter emit(cfg, grid, records);

  struct PlannedUser {
    SynthUser user;
    Placement placement;
    std::mt19937_64 rng;
  };
  std::vector<PlannedUser> planned;

  auto plan_user = [&](const std::string& id, SynthRole role, std::size_t tmpl, std::mt19937_64 rng) {
    auto placement = planner.place(plans[tmpl], cfg.templates[tmpl].spacing_km, rng);
    if (!placement) throw Error("could not place user " + id + "; enlarge the grid");
    SynthUser u{id, role, tmpl, static_cast<ParcelId>(placement->cells.front() + 1)};
    planned.push_back({u, std::move(*placement), std::move(rng)});
  };

  char id[32];
  for (std::size_t i = 0; i < cfg.num_users; ++i) {
    std::snprintf(id, sizeof id, "u%05zu", i + 1);
    plan_user(id, SynthRole::resident, assignment[i], substream(cfg.seed, kResident, i));
  }
  for (std::size_t i = 0; i < cfg.tourists; ++i) {
    std::snprintf(id, sizeof id, "t%05zu", i + 1);
    plan_user(id, SynthRole::tourist, i % cfg.templates.size(), substream(cfg.seed, kTourist, i));
  }
  for (std::size_t i = 0; i < cfg.teleporters; ++i) {
    std::snprintf(id, sizeof id, "x%05zu", i + 1);
    plan_user(id, SynthRole::teleporter, i % cfg.templates.size(), substream(cfg.seed, kTeleporter, i));
  }

  const auto& forced = planner.forced();
  for (std::size_t c = 0; c < cells; ++c) {
    if (forced[c]) land_use[c] = *forced[c];
  }

  for (auto& p : planned) {
    const auto& plan = plans[p.user.template_index];
    const auto& days = p.user.role == SynthRole::tourist ? tourist_days : active_days;
    for (std::size_t d = 0; d < days.size(); ++d) {
      const Timestamp morning = emit.day(p.user.user_id, days[d], plan.walk, p.placement.cells, p.rng);
      if (p.user.role == SynthRole::teleporter && d == 0) {
        const std::size_t home = p.placement.cells.front();
        const std::size_t far_r = home / grid.n < grid.n / 2 ? grid.n - 1 : 0;
        const std::size_t far_c = home % grid.n < grid.n / 2 ? grid.n - 1 : 0;
        emit.at(p.user.user_id, morning + 20, grid.index(far_r, far_c), p.rng);
      }
    }
    truth.users.push_back(p.user);
  }

  std::vector<std::size_t> non_residential;
  for (std::size_t c = 0; c < cells; ++c) {
    if (land_use[c] != Activity::residential) non_residential.push_back(c);
  }
  for (std::size_t i = 0; i < cfg.stationary_bots; ++i) {
    if (non_residential.empty()) throw Error("no non-residential parcel for stationary bots");
    auto rng = substream(cfg.seed, kBot, i);
    const std::size_t cell = non_residential[std::uniform_int_distribution<std::size_t>(0, non_residential.size() - 1)(rng)];
    std::snprintf(id, sizeof id, "b%05zu", i + 1);
    const std::vector<std::size_t> walk{0};
    const std::vector<std::size_t> spot{cell};
    for (const auto& day : active_days) emit.day(id, day, walk, spot, rng);
    truth.users.push_back({id, SynthRole::stationary_bot, 0, static_cast<ParcelId>(cell + 1)});
  }

  // Expected census from the plan alone.
  truth.expected_users = cfg.num_users;
  truth.expected_networks = cfg.num_users * active_days.size();
  const auto counts = apportion(cfg.templates, cfg.num_users);
  std::map<std::pair<MotifKind, std::string>, ExpectedClass> classes;
  for (std::size_t t = 0; t < plans.size(); ++t) {
    std::vector<NetworkNode> visits;
    for (auto place : plans[t].walk) {
      visits.push_back({static_cast<LocationKey>(place + 1), plans[t].place_labels[place], {}});
    }
    const auto lbm = network_from_visits(visits);
    const auto abm = abm_reduce(lbm);
    for (const auto& [kind, net] : {std::pair{MotifKind::lbm, &lbm}, std::pair{MotifKind::abm, &abm}}) {
      const auto sig = canonical_signature(*net, kind);
      auto& cls = classes[{kind, sig.code}];
      cls.kind = kind;
      cls.signature = sig.code;
      cls.node_count = sig.node_count;
      cls.percentage += 100.0 * static_cast<double>(counts[t]) / static_cast<double>(cfg.num_users);
    }
  }
  for (auto& [key, cls] : classes) truth.census.push_back(cls);

  // Expected distances from parcel centers.
  struct DistAccum {
    double trip_km = 0.0;
    std::size_t trips = 0;
    std::size_t days = 0;
  };
  std::map<std::pair<MotifKind, std::string>, DistAccum> dist;
  for (const auto& p : planned) {
    if (p.user.role != SynthRole::resident) continue;
    const auto& plan = plans[p.user.template_index];
    double total = 0.0;
    for (std::size_t i = 1; i < plan.walk.size(); ++i) {
      total += haversine_m(grid.center(p.placement.cells[plan.walk[i - 1]]),
                           grid.center(p.placement.cells[plan.walk[i]])) / 1000.0;
    }
    const std::size_t trips = plan.walk.size() - 1;
    std::vector<ActivityLabel> abm_labels;
    std::set<ActivityLabel> distinct_labels;
    for (auto place : plan.walk) {
      const auto l = plan.place_labels[place];
      distinct_labels.insert(l);
      if (abm_labels.empty() || abm_labels.back() != l) abm_labels.push_back(l);
    }
    auto add = [&](MotifKind kind, const std::string& group) {
      auto& a = dist[{kind, group}];
      a.trip_km += total * static_cast<double>(active_days.size());
      a.trips += trips * active_days.size();
      a.days += active_days.size();
    };
    if (plan.place_labels.size() >= 2) add(MotifKind::lbm, size_group_name(plan.place_labels.size(), 6));
    if (distinct_labels.size() >= 2) add(MotifKind::abm, size_group_name(distinct_labels.size(), 6));
    if (distinct_labels.size() == 2) {
      for (auto l : distinct_labels) {
        if (l != ActivityLabel::H) add(MotifKind::abm, "H-" + std::string(to_string(l)));
      }
    }
  }
  for (const auto& [key, a] : dist) {
    truth.distances.push_back({key.first, key.second, a.trip_km / static_cast<double>(a.trips),
                               a.trip_km / static_cast<double>(a.days)});
  }

  SynthOutput out;
  out.truth = std::move(truth);

  std::vector<PolygonFeature> parcels;
  parcels.reserve(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    const auto b = grid.box(c);
    PolygonFeature f;
    f.polygons.push_back({{{b.min_lat, b.min_lon}, {b.min_lat, b.max_lon}, {b.max_lat, b.max_lon},
                           {b.max_lat, b.min_lon}, {b.min_lat, b.min_lon}},
                          {}});
    f.properties["category"] = std::string(activity_name(land_use[c]));
    parcels.push_back(std::move(f));
  }
  out.parcels_geojson = write_polygon_features(parcels);

  {
    const auto lo = grid.box(0);
    const auto hi = grid.box(cells - 1);
    const double min_lat = lo.min_lat - grid.dlat;
    const double min_lon = lo.min_lon - grid.dlon;
    const double max_lat = hi.max_lat + grid.dlat;
    const double max_lon = hi.max_lon + grid.dlon;
    PolygonFeature f;
    f.polygons.push_back({{{min_lat, min_lon}, {min_lat, max_lon}, {max_lat, max_lon}, {max_lat, min_lon},
                           {min_lat, min_lon}},
                          {}});
    f.properties["name"] = "study_region";
    out.boundary_geojson = write_polygon_features({f});
  }

  std::sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    return std::tie(a.utc, a.user, a.pos.lat, a.pos.lon) < std::tie(b.utc, b.user, b.pos.lat, b.pos.lon);
  });
  std::string& tsv = out.records_tsv;
  tsv = "user_id\ttimestamp\tlat\tlon\tsource\ttext\n";
  for (const auto& r : records) {
    tsv += r.user + '\t' + format_iso8601(r.utc) + '\t' + fixed7(r.pos.lat) + '\t' + fixed7(r.pos.lon) + "\tgps\t\n";
  }
  return out;
}

std::string ground_truth_json(const GroundTruth& truth) {
  json doc;
  doc["expected_users"] = truth.expected_users;
  doc["expected_networks"] = truth.expected_networks;
  doc["users"] = json::array();
  for (const auto& u : truth.users) {
    doc["users"].push_back({{"user_id", u.user_id}, {"role", to_string(u.role)}, {"template", u.template_index},
                            {"home_parcel", u.home}});
  }
  doc["census"] = json::array();
  for (const auto& c : truth.census) {
    doc["census"].push_back({{"kind", to_string(c.kind)}, {"signature", c.signature}, {"node_count", c.node_count},
                             {"percentage", c.percentage}});
  }
  doc["distances"] = json::array();
  for (const auto& d : truth.distances) {
    doc["distances"].push_back(
        {{"kind", to_string(d.kind)}, {"group", d.group}, {"d_hat_km", d.d_hat_km}, {"D_hat_km", d.D_hat_km}});
  }
  return doc.dump(2) + "\n";
}

GroundTruth read_ground_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open ground truth " + path.string());
  GroundTruth truth;
  try {
    const json doc = json::parse(in);
    auto kind_of = [](const std::string& s) { return s == "ABM" ? MotifKind::abm : MotifKind::lbm; };
    truth.expected_users = doc.at("expected_users").get<std::size_t>();
    truth.expected_networks = doc.at("expected_networks").get<std::size_t>();
    for (const auto& u : doc.at("users")) {
      SynthUser su;
      su.user_id = u.at("user_id").get<std::string>();
      const auto role = u.at("role").get<std::string>();
      su.role = role == "tourist"          ? SynthRole::tourist
                : role == "teleporter"     ? SynthRole::teleporter
                : role == "stationary_bot" ? SynthRole::stationary_bot
                                           : SynthRole::resident;
      su.template_index = u.at("template").get<std::size_t>();
      su.home = u.at("home_parcel").get<ParcelId>();
      truth.users.push_back(su);
    }
    for (const auto& c : doc.at("census")) {
      truth.census.push_back({kind_of(c.at("kind").get<std::string>()), c.at("signature").get<std::string>(),
                              c.at("node_count").get<std::size_t>(), c.at("percentage").get<double>()});
    }
    for (const auto& d : doc.at("distances")) {
      truth.distances.push_back({kind_of(d.at("kind").get<std::string>()), d.at("group").get<std::string>(),
                                 d.at("d_hat_km").get<double>(), d.at("D_hat_km").get<double>()});
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid ground truth file: ") + e.what());
  }
  return truth;
}

void write_synth(const SynthOutput& output, const SynthConfig& config, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "parcels.geojson", output.parcels_geojson);
  write_file_atomic(dir / "boundary.geojson", output.boundary_geojson);
  write_file_atomic(dir / "records.tsv", output.records_tsv);
  write_file_atomic(dir / "ground_truth.json", ground_truth_json(output.truth));
  std::string cfg = "# pipeline inputs for this synthetic world\n";
  cfg += "data-dir=\"" + std::filesystem::absolute(dir).lexically_normal().string() + "\"\n";
  cfg += "records=\"records.tsv\"\nparcels=\"parcels.geojson\"\nboundary=\"boundary.geojson\"\n";
  cfg += "utc-offset=" + std::to_string(config.utc_offset_minutes) + "\n";
  write_file_atomic(dir / "run.cfg", cfg);
}

}  // namespace mobmotif
