#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobmotif/annotate.hpp"
#include "mobmotif/digraph.hpp"
#include "mobmotif/geo.hpp"
#include "mobmotif/parcel_index.hpp"

namespace mobmotif {

/// Node alphabet of activity-based networks.
enum class ActivityLabel : std::uint8_t { H, W, S, C, U, T, R, Sh, E, Se, Ho, O };

inline constexpr std::size_t kLabelCount = 12;

std::string_view to_string(ActivityLabel label);
std::optional<ActivityLabel> parse_label(std::string_view text);

/// The home parcel is H; every other residential parcel is R. Services and
/// civic/religious both map to Se.
ActivityLabel label_for(Activity activity, bool is_home);

/// Parcel id when positive; a negative key identifies a context-free location
/// by its ~250 m lat/lon cell.
using LocationKey = std::int64_t;

LocationKey location_key(const AnnotatedPoint& p);

struct NetworkNode {
  LocationKey location = 0;
  ActivityLabel label = ActivityLabel::O;
  /// Centroid of the day's points at this location.
  LatLon anchor;
};

/// Directed network of one user-day. Node 0 is home; `walk` is the visit
/// sequence as node indices and starts and ends at home.
struct DailyNetwork {
  std::vector<NetworkNode> nodes;
  Digraph graph;
  std::vector<std::size_t> walk;
  std::size_t home_index = 0;

  std::size_t node_count() const { return nodes.size(); }
  std::vector<ActivityLabel> labels() const;
};

/// Builds a network from a collapsed visit sequence (consecutive entries must
/// differ in location). Nodes are numbered by first appearance. Throws
/// std::logic_error if the walk is not closed at its first visit, or if a node
/// lacks an incoming or outgoing edge.
DailyNetwork network_from_visits(std::span<const NetworkNode> visits);

/// Asserts the closed-walk constraints: the walk starts and ends at home, and
/// with more than one node every node has in- and out-degree >= 1.
bool satisfies_closed_walk_constraints(const DailyNetwork& net);

enum class RejectReason { open_walk, no_home };

const char* to_string(RejectReason reason);

struct NetworkBuild {
  std::optional<DailyNetwork> network;
  std::optional<RejectReason> rejection;
};

NetworkBuild build_daily_network(const UserDay& day, const HomeAssignment& home);

/// Activity view: the walk is relabeled, consecutive equal labels merge, and
/// nodes become one per distinct label.
DailyNetwork abm_reduce(const DailyNetwork& net);

enum class MotifKind { lbm, abm };

const char* to_string(MotifKind kind);

struct SignatureOptions {
  bool pin_home = true;
  /// Graphs above this size only get a size bucket.
  std::size_t max_nodes = 12;
};

struct CanonicalSignature {
  MotifKind kind = MotifKind::lbm;
  std::size_t node_count = 0;
  /// Empty for oversize graphs.
  std::string code;

  bool oversize() const { return code.empty(); }
  friend bool operator==(const CanonicalSignature&, const CanonicalSignature&) = default;
};

/// Canonical relabeling of a graph: signature plus the graph and labels in
/// canonical node order (home first when pinned).
struct CanonicalForm {
  CanonicalSignature signature;
  Digraph graph;
  std::vector<ActivityLabel> labels;
};

/// Minimal row-major adjacency encoding over node orders that keep home first
/// (when pinned) and sort nodes by (label for ABM, out-degree, in-degree). For
/// ABM the code also carries the label sequence.
CanonicalForm canonical_form(const Digraph& graph, std::span<const ActivityLabel> labels, std::size_t home,
                             MotifKind kind, const SignatureOptions& options = {});

CanonicalSignature canonical_signature(const Digraph& graph, std::span<const ActivityLabel> labels,
                                       std::size_t home, MotifKind kind, const SignatureOptions& options = {});

CanonicalSignature canonical_signature(const DailyNetwork& net, MotifKind kind,
                                       const SignatureOptions& options = {});

/// State-space matcher with feasibility pruning (VF2 family). Home maps to
/// home when pinned; labels must agree for ABM.
bool isomorphic(const Digraph& g1, std::span<const ActivityLabel> labels1, std::size_t home1,
                const Digraph& g2, std::span<const ActivityLabel> labels2, std::size_t home2, MotifKind kind,
                bool pin_home = true);

bool isomorphic(const DailyNetwork& a, const DailyNetwork& b, MotifKind kind, bool pin_home = true);

struct MotifClass {
  CanonicalSignature signature;
  Digraph graph;
  std::vector<ActivityLabel> labels;
  std::size_t count = 0;
  double percentage = 0.0;
  std::size_t rank = 0;
};

struct SizeGroup {
  std::string name;
  std::size_t count = 0;
  double percentage = 0.0;
};

struct CensusOptions {
  /// A class is a motif when count / total strictly exceeds the cutoff.
  double cutoff = 0.005;
  std::size_t max_nodes = 6;
  bool pin_home = true;
  unsigned workers = 1;
};

struct MotifCensus {
  MotifKind kind = MotifKind::lbm;
  std::size_t total = 0;
  std::size_t one_node_count = 0;
  double one_node_percentage = 0.0;
  /// Every class with 2..max_nodes nodes, count descending then code.
  std::vector<MotifClass> classes;
  /// Prefix of `classes` above the cutoff, ranks 1..k.
  std::vector<MotifClass> motifs;
  /// "1", "2", ..., "<max_nodes>", "<max_nodes+1>+".
  std::vector<SizeGroup> size_groups;
  double motif_coverage_percentage = 0.0;
};

MotifCensus motif_census(std::span<const DailyNetwork> nets, MotifKind kind, const CensusOptions& options = {});

std::string size_group_name(std::size_t node_count, std::size_t max_nodes);

/// One mined user-day with both views.
struct MinedDay {
  std::string user_id;
  std::chrono::sys_days local_date;
  DailyNetwork lbm;
  DailyNetwork abm;
};

}  // namespace mobmotif
