#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

#include "mobmotif/motif.hpp"

using namespace mobmotif;

namespace {

using L = ActivityLabel;

std::vector<NetworkNode> visits(std::initializer_list<LocationKey> keys, std::vector<L> labels = {}) {
  std::vector<NetworkNode> out;
  std::size_t i = 0;
  for (auto k : keys) {
    const L l = i < labels.size() ? labels[i] : (k == 1 ? L::H : L::O);
    out.push_back({k, l, {0.0, static_cast<double>(k)}});
    ++i;
  }
  return out;
}

Digraph permuted(const Digraph& g, const std::vector<std::size_t>& perm) {
  Digraph out(g.size());
  for (auto [a, b] : g.edges()) out.add_edge(perm[a], perm[b]);
  return out;
}

AnnotatedPoint point(ParcelId parcel, Activity a, double lat, double lon) {
  AnnotatedPoint p;
  p.parcel = parcel;
  p.activity = a;
  p.record.position = {lat, lon};
  return p;
}

}  // namespace

TEST(Digraph, Basics) {
  Digraph g(3);
  EXPECT_TRUE(g.add_edge(0, 1));
  EXPECT_FALSE(g.add_edge(0, 1));
  g.add_edge(1, 2);
  g.add_edge(2, 0);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.out_degree(0), 1u);
  EXPECT_EQ(g.in_degree(0), 1u);
  EXPECT_THROW(g.add_edge(1, 1), std::invalid_argument);
  EXPECT_THROW(g.add_edge(1, 3), std::invalid_argument);
  EXPECT_EQ(g.edges().front(), (std::pair<std::size_t, std::size_t>{0, 1}));
}

TEST(Labels, MappingAndParsing) {
  EXPECT_EQ(label_for(Activity::residential, true), L::H);
  EXPECT_EQ(label_for(Activity::residential, false), L::R);
  EXPECT_EQ(label_for(Activity::services, false), L::Se);
  EXPECT_EQ(label_for(Activity::civic, false), L::Se);
  EXPECT_EQ(label_for(Activity::shopping, false), L::Sh);
  EXPECT_EQ(label_for(Activity::others, false), L::O);
  EXPECT_EQ(parse_label("Sh"), L::Sh);
  EXPECT_EQ(parse_label("X"), std::nullopt);
  EXPECT_EQ(to_string(L::Ho), "Ho");
}

TEST(LocationKey, ParcelOrCell) {
  EXPECT_EQ(location_key(point(17, Activity::office, 41.8, -87.7)), 17);
  AnnotatedPoint a;
  a.record.position = {41.80001, -87.70001};
  AnnotatedPoint b;
  b.record.position = {41.80002, -87.70002};
  AnnotatedPoint c;
  c.record.position = {41.81, -87.70001};
  EXPECT_LT(location_key(a), 0);
  EXPECT_EQ(location_key(a), location_key(b));
  EXPECT_NE(location_key(a), location_key(c));
}

TEST(Network, FromVisits) {
  const auto net = network_from_visits(visits({1, 2, 1, 3, 1}));
  EXPECT_EQ(net.node_count(), 3u);
  EXPECT_EQ(net.walk, (std::vector<std::size_t>{0, 1, 0, 2, 0}));
  EXPECT_EQ(net.graph.edge_count(), 4u);
  EXPECT_TRUE(satisfies_closed_walk_constraints(net));
  EXPECT_THROW(network_from_visits(visits({1, 2, 3})), std::logic_error);
  EXPECT_THROW(network_from_visits(visits({1, 1, 2, 1})), std::logic_error);
  EXPECT_EQ(network_from_visits(visits({1})).node_count(), 1u);
}

TEST(Network, BuildDailyCollapsesAndAnchors) {
  UserDay day;
  day.points = {point(1, Activity::residential, 0.0, 0.0), point(1, Activity::residential, 0.0, 0.2),
                point(2, Activity::office, 1.0, 1.0), point(1, Activity::residential, 0.0, 0.1)};
  HomeAssignment home{"u", 1, HomeRule::night_mode};
  const auto built = build_daily_network(day, home);
  ASSERT_TRUE(built.network);
  const auto& net = *built.network;
  EXPECT_EQ(net.node_count(), 2u);
  EXPECT_EQ(net.walk.size(), 3u);
  EXPECT_EQ(net.nodes[0].label, L::H);
  EXPECT_EQ(net.nodes[1].label, L::W);
  EXPECT_NEAR(net.nodes[0].anchor.lon, 0.1, 1e-12);
}

TEST(Network, Rejections) {
  UserDay day;
  day.points = {point(1, Activity::residential, 0, 0), point(2, Activity::office, 1, 1)};
  EXPECT_EQ(build_daily_network(day, {"u", 1, HomeRule::night_mode}).rejection, RejectReason::open_walk);
  EXPECT_EQ(build_daily_network(day, {"u", std::nullopt, HomeRule::unknown}).rejection, RejectReason::no_home);
  day.points = {point(2, Activity::office, 1, 1), point(1, Activity::residential, 0, 0)};
  EXPECT_EQ(build_daily_network(day, {"u", 1, HomeRule::night_mode}).rejection, RejectReason::open_walk);
}

TEST(Network, AbmReduceMergesLabels) {
  // H -> W1 -> W2 -> H -> Sh -> H collapses to H -> W -> H -> Sh -> H.
  const auto lbm = network_from_visits(visits({1, 2, 3, 1, 4, 1}, {L::H, L::W, L::W, L::H, L::Sh, L::H}));
  EXPECT_EQ(lbm.node_count(), 4u);
  const auto abm = abm_reduce(lbm);
  EXPECT_EQ(abm.node_count(), 3u);
  EXPECT_EQ(abm.labels(), (std::vector<L>{L::H, L::W, L::Sh}));
  EXPECT_EQ(abm.walk, (std::vector<std::size_t>{0, 1, 0, 2, 0}));
  EXPECT_NEAR(abm.nodes[1].anchor.lon, 2.5, 1e-12);
}

TEST(Canonical, Formats) {
  const auto two = network_from_visits(visits({1, 2, 1}, {L::H, L::W, L::H}));
  EXPECT_EQ(canonical_signature(two, MotifKind::lbm).code, "L2:01.10");
  EXPECT_EQ(canonical_signature(two, MotifKind::abm).code, "A2:H-W:01.10");
  const auto one = network_from_visits(visits({1}));
  EXPECT_EQ(canonical_signature(one, MotifKind::lbm).code, "L1:0");
  SignatureOptions small;
  small.max_nodes = 1;
  const auto big = canonical_signature(two, MotifKind::lbm, small);
  EXPECT_TRUE(big.oversize());
  EXPECT_EQ(big.node_count, 2u);
}

TEST(Canonical, HomePinningDistinguishesStructures) {
  // Chain H <-> A <-> B versus chain A <-> H <-> B.
  Digraph chain(3);
  chain.add_edge(0, 1);
  chain.add_edge(1, 0);
  chain.add_edge(1, 2);
  chain.add_edge(2, 1);
  const std::vector<L> labels(3, L::O);
  const auto end_home = canonical_signature(chain, labels, 0, MotifKind::lbm);
  const auto mid_home = canonical_signature(chain, labels, 1, MotifKind::lbm);
  EXPECT_NE(end_home, mid_home);
  SignatureOptions free;
  free.pin_home = false;
  EXPECT_EQ(canonical_signature(chain, labels, 0, MotifKind::lbm, free),
            canonical_signature(chain, labels, 1, MotifKind::lbm, free));
  EXPECT_FALSE(isomorphic(chain, labels, 0, chain, labels, 1, MotifKind::lbm));
  EXPECT_TRUE(isomorphic(chain, labels, 0, chain, labels, 1, MotifKind::lbm, false));
}

TEST(Canonical, InvariantUnderRelabeling) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 5;
    Digraph g(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (a != b && rng() % 3 == 0) g.add_edge(a, b);
      }
    }
    std::vector<L> labels(n);
    for (auto& l : labels) l = static_cast<L>(rng() % 4);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto h = permuted(g, perm);
    std::vector<L> hl(n);
    for (std::size_t v = 0; v < n; ++v) hl[perm[v]] = labels[v];
    for (auto kind : {MotifKind::lbm, MotifKind::abm}) {
      EXPECT_EQ(canonical_signature(g, labels, 0, kind), canonical_signature(h, hl, perm[0], kind));
      EXPECT_TRUE(isomorphic(g, labels, 0, h, hl, perm[0], kind));
      const auto form = canonical_form(g, labels, 0, kind);
      EXPECT_EQ(canonical_signature(form.graph, kind == MotifKind::abm ? form.labels : labels, 0, kind),
                form.signature);
    }
  }
}

TEST(Canonical, AbmLabelsMatter) {
  const auto hw = network_from_visits(visits({1, 2, 1}, {L::H, L::W, L::H}));
  const auto hs = network_from_visits(visits({1, 2, 1}, {L::H, L::Sh, L::H}));
  EXPECT_EQ(canonical_signature(hw, MotifKind::lbm), canonical_signature(hs, MotifKind::lbm));
  EXPECT_NE(canonical_signature(hw, MotifKind::abm), canonical_signature(hs, MotifKind::abm));
  EXPECT_TRUE(isomorphic(hw, hs, MotifKind::lbm));
  EXPECT_FALSE(isomorphic(hw, hs, MotifKind::abm));
}

TEST(Census, CutoffBoundaryAndOrdering) {
  std::vector<DailyNetwork> nets;
  const auto two = network_from_visits(visits({1, 2, 1}));
  const auto star = network_from_visits(visits({1, 2, 1, 3, 1}));
  const auto cycle = network_from_visits(visits({1, 2, 3, 1}));
  const auto one = network_from_visits(visits({1}));
  for (int i = 0; i < 196; ++i) nets.push_back(two);
  nets.push_back(cycle);  // exactly 0.5%
  nets.push_back(star);
  nets.push_back(star);  // 1%
  nets.push_back(one);
  const auto census = motif_census(nets, MotifKind::lbm);
  EXPECT_EQ(census.total, 200u);
  EXPECT_EQ(census.one_node_count, 1u);
  ASSERT_EQ(census.classes.size(), 3u);
  EXPECT_EQ(census.classes[0].count, 196u);
  EXPECT_EQ(census.classes[1].count, 2u);
  EXPECT_EQ(census.classes[2].count, 1u);
  ASSERT_EQ(census.motifs.size(), 2u);
  EXPECT_DOUBLE_EQ(census.motifs[1].percentage, 1.0);
  EXPECT_NEAR(census.motif_coverage_percentage, 99.0, 1e-9);

  // Dropping the one-node network lifts the cycle to 1/199, above 0.5%.
  nets.pop_back();
  const auto lifted = motif_census(nets, MotifKind::lbm);
  EXPECT_EQ(lifted.motifs.size(), 3u);
}

TEST(Census, SizeGroupsAndWorkers) {
  std::vector<DailyNetwork> nets;
  nets.push_back(network_from_visits(visits({1})));
  nets.push_back(network_from_visits(visits({1, 2, 1})));
  nets.push_back(network_from_visits(visits({1, 2, 3, 4, 5, 6, 7, 1})));
  const auto census = motif_census(nets, MotifKind::lbm);
  ASSERT_EQ(census.size_groups.size(), 7u);
  EXPECT_EQ(census.size_groups[0].name, "1");
  EXPECT_EQ(census.size_groups[6].name, "7+");
  EXPECT_EQ(census.size_groups[6].count, 1u);
  EXPECT_EQ(census.classes.size(), 1u);
  CensusOptions many;
  many.workers = 8;
  const auto parallel = motif_census(nets, MotifKind::lbm, many);
  EXPECT_EQ(parallel.classes.size(), census.classes.size());
  EXPECT_EQ(parallel.classes[0].signature, census.classes[0].signature);
  EXPECT_EQ(size_group_name(9, 6), "7+");
}
