#include "mobmotif/motif.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mobmotif/parallel.hpp"

namespace mobmotif {

namespace {

constexpr std::string_view kLabelNames[kLabelCount] = {"H", "W", "S", "C", "U", "T",
                                                       "R", "Sh", "E", "Se", "Ho", "O"};

constexpr double kCellDegrees = 0.0025;

}  // namespace

std::string_view to_string(ActivityLabel label) { return kLabelNames[static_cast<std::size_t>(label)]; }

std::optional<ActivityLabel> parse_label(std::string_view text) {
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    if (kLabelNames[i] == text) return static_cast<ActivityLabel>(i);
  }
  return std::nullopt;
}

ActivityLabel label_for(Activity activity, bool is_home) {
  switch (activity) {
    case Activity::residential: return is_home ? ActivityLabel::H : ActivityLabel::R;
    case Activity::hotel: return ActivityLabel::Ho;
    case Activity::mixed_use: return ActivityLabel::U;
    case Activity::k12_school: return ActivityLabel::S;
    case Activity::university: return ActivityLabel::C;
    case Activity::office: return ActivityLabel::W;
    case Activity::services:
    case Activity::civic: return ActivityLabel::Se;
    case Activity::shopping: return ActivityLabel::Sh;
    case Activity::recreation: return ActivityLabel::E;
    case Activity::transportation: return ActivityLabel::T;
    case Activity::others: return ActivityLabel::O;
  }
  return ActivityLabel::O;
}

LocationKey location_key(const AnnotatedPoint& p) {
  if (p.parcel) return static_cast<LocationKey>(*p.parcel);
  const auto lat_cell = static_cast<LocationKey>(std::floor((p.record.position.lat + 90.0) / kCellDegrees));
  const auto lon_cell = static_cast<LocationKey>(std::floor((p.record.position.lon + 180.0) / kCellDegrees));
  constexpr LocationKey lon_cells = static_cast<LocationKey>(360.0 / kCellDegrees) + 1;
  return -(1 + lat_cell * lon_cells + lon_cell);
}

std::vector<ActivityLabel> DailyNetwork::labels() const {
  std::vector<ActivityLabel> out;
  out.reserve(nodes.size());
  for (const auto& n : nodes) out.push_back(n.label);
  return out;
}

bool satisfies_closed_walk_constraints(const DailyNetwork& net) {
  if (net.walk.empty() || net.walk.front() != net.home_index || net.walk.back() != net.home_index) return false;
  if (net.node_count() <= 1) return true;
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    if (net.graph.in_degree(v) == 0 || net.graph.out_degree(v) == 0) return false;
  }
  return true;
}

DailyNetwork network_from_visits(std::span<const NetworkNode> visits) {
  if (visits.empty()) throw std::logic_error("empty visit sequence");
  DailyNetwork net;
  std::map<LocationKey, std::size_t> index;
  for (const auto& v : visits) {
    auto [it, fresh] = index.try_emplace(v.location, net.nodes.size());
    if (fresh) net.nodes.push_back(v);
    net.walk.push_back(it->second);
  }
  net.graph = Digraph(net.nodes.size());
  for (std::size_t i = 1; i < net.walk.size(); ++i) {
    if (net.walk[i] == net.walk[i - 1]) throw std::logic_error("visit sequence is not collapsed");
    net.graph.add_edge(net.walk[i - 1], net.walk[i]);
  }
  net.home_index = 0;
  if (!satisfies_closed_walk_constraints(net)) throw std::logic_error("visit sequence is not a closed walk");
  return net;
}

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::open_walk: return "open_walk";
    case RejectReason::no_home: return "no_home";
  }
  return "unknown";
}

const char* to_string(MotifKind kind) { return kind == MotifKind::lbm ? "LBM" : "ABM"; }

NetworkBuild build_daily_network(const UserDay& day, const HomeAssignment& home) {
  if (!home.home) return {std::nullopt, RejectReason::no_home};
  if (day.points.empty()) return {std::nullopt, RejectReason::open_walk};
  const auto home_key = static_cast<LocationKey>(*home.home);

  struct Accum {
    double lat = 0.0;
    double lon = 0.0;
    std::size_t n = 0;
  };
  std::map<LocationKey, Accum> sums;
  std::vector<NetworkNode> visits;
  for (const auto& p : day.points) {
    const auto key = location_key(p);
    auto& acc = sums[key];
    acc.lat += p.record.position.lat;
    acc.lon += p.record.position.lon;
    ++acc.n;
    if (!visits.empty() && visits.back().location == key) continue;
    const ActivityLabel label = key == home_key ? ActivityLabel::H
                                : key > 0       ? label_for(p.activity, false)
                                                : ActivityLabel::O;
    visits.push_back({key, label, {}});
  }
  if (visits.front().location != home_key || visits.back().location != home_key) {
    return {std::nullopt, RejectReason::open_walk};
  }
  for (auto& v : visits) {
    const auto& acc = sums[v.location];
    v.anchor = {acc.lat / static_cast<double>(acc.n), acc.lon / static_cast<double>(acc.n)};
  }
  return {network_from_visits(visits), std::nullopt};
}

DailyNetwork abm_reduce(const DailyNetwork& net) {
  struct Accum {
    double lat = 0.0;
    double lon = 0.0;
    std::size_t n = 0;
  };
  std::map<ActivityLabel, Accum> anchors;
  for (const auto& node : net.nodes) {
    auto& acc = anchors[node.label];
    acc.lat += node.anchor.lat;
    acc.lon += node.anchor.lon;
    ++acc.n;
  }

  // In the activity view a node's location is its label ordinal.
  std::vector<NetworkNode> visits;
  for (auto idx : net.walk) {
    const auto label = net.nodes[idx].label;
    if (!visits.empty() && visits.back().label == label) continue;
    const auto& acc = anchors[label];
    visits.push_back({static_cast<LocationKey>(label), label,
                      {acc.lat / static_cast<double>(acc.n), acc.lon / static_cast<double>(acc.n)}});
  }
  return network_from_visits(visits);
}

std::string size_group_name(std::size_t node_count, std::size_t max_nodes) {
  if (node_count > max_nodes) return std::to_string(max_nodes + 1) + "+";
  return std::to_string(node_count);
}

MotifCensus motif_census(std::span<const DailyNetwork> nets, MotifKind kind, const CensusOptions& options) {
  MotifCensus census;
  census.kind = kind;
  census.total = nets.size();

  const SignatureOptions sig_options{options.pin_home, options.max_nodes};
  std::vector<std::optional<CanonicalForm>> forms(nets.size());
  parallel_for(nets.size(), options.workers, [&](std::size_t i) {
    const auto& net = nets[i];
    if (net.node_count() < 2 || net.node_count() > options.max_nodes) return;
    const auto labels = net.labels();
    forms[i] = canonical_form(net.graph, labels, net.home_index, kind, sig_options);
  });

  std::vector<std::size_t> group_counts(options.max_nodes + 2, 0);
  std::map<std::string, MotifClass> classes;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    const std::size_t n = nets[i].node_count();
    if (n == 0) continue;
    ++group_counts[std::min(n, options.max_nodes + 1)];
    if (n == 1) {
      ++census.one_node_count;
      continue;
    }
    if (!forms[i]) continue;
    auto& cls = classes[forms[i]->signature.code];
    if (cls.count == 0) {
      cls.signature = forms[i]->signature;
      cls.graph = forms[i]->graph;
      cls.labels = forms[i]->labels;
    }
    ++cls.count;
  }

  const auto pct = [&](std::size_t count) {
    return census.total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(census.total);
  };
  const auto above_cutoff = [&](std::size_t count) {
    return census.total > 0 && static_cast<double>(count) / static_cast<double>(census.total) > options.cutoff;
  };

  census.one_node_percentage = pct(census.one_node_count);
  for (auto& [code, cls] : classes) {
    cls.percentage = pct(cls.count);
    census.classes.push_back(std::move(cls));
  }
  std::stable_sort(census.classes.begin(), census.classes.end(), [](const MotifClass& a, const MotifClass& b) {
    return a.count > b.count;
  });
  for (std::size_t i = 0; i < census.classes.size(); ++i) census.classes[i].rank = i + 1;
  for (const auto& cls : census.classes) {
    if (!above_cutoff(cls.count)) break;
    census.motifs.push_back(cls);
    census.motif_coverage_percentage += cls.percentage;
  }
  if (above_cutoff(census.one_node_count)) census.motif_coverage_percentage += census.one_node_percentage;

  for (std::size_t n = 1; n < group_counts.size(); ++n) {
    census.size_groups.push_back({size_group_name(n, options.max_nodes), group_counts[n], pct(group_counts[n])});
  }
  return census;
}

}  // namespace mobmotif
