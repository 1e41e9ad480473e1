#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "mobmotif/ingest.hpp"
#include "mobmotif/motif.hpp"
#include "mobmotif/parcel_index.hpp"
#include "mobmotif/synth.hpp"

using namespace mobmotif;

namespace {

Digraph random_closed_walk(std::size_t nodes, std::mt19937_64& rng) {
  std::vector<NetworkNode> visits{{1, ActivityLabel::H, {}}};
  std::uniform_int_distribution<LocationKey> pick(1, static_cast<LocationKey>(nodes));
  for (std::size_t step = 0; step < 2 * nodes; ++step) {
    LocationKey next = pick(rng);
    while (next == visits.back().location) next = pick(rng);
    visits.push_back({next, ActivityLabel::O, {}});
  }
  if (visits.back().location != 1) visits.push_back({1, ActivityLabel::H, {}});
  return network_from_visits(visits).graph;
}

void BM_CanonicalSignature(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::vector<Digraph> graphs;
  for (int i = 0; i < 256; ++i) graphs.push_back(random_closed_walk(n, rng));
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& g = graphs[i++ % graphs.size()];
    const std::vector<ActivityLabel> labels(g.size(), ActivityLabel::O);
    benchmark::DoNotOptimize(canonical_signature(g, labels, 0, MotifKind::lbm));
  }
}
BENCHMARK(BM_CanonicalSignature)->DenseRange(2, 6);

SpatialIndex grid_index(std::size_t side) {
  std::vector<Parcel> parcels;
  const double cell = 0.0009;
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const double lat = 41.8 + static_cast<double>(r) * cell;
      const double lon = -87.7 + static_cast<double>(c) * cell;
      Parcel p;
      p.polygons.push_back({{{lat, lon}, {lat, lon + 0.8 * cell}, {lat + 0.8 * cell, lon + 0.8 * cell},
                             {lat + 0.8 * cell, lon}, {lat, lon}},
                            {}});
      parcels.push_back(std::move(p));
    }
  }
  return SpatialIndex(std::move(parcels));
}

template <bool Linear>
void BM_NearestParcel(benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  const auto index = grid_index(side);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, static_cast<double>(side) * 0.0009);
  std::vector<LatLon> queries;
  for (int i = 0; i < 1024; ++i) queries.push_back({41.8 + u(rng), -87.7 + u(rng)});
  std::size_t i = 0;
  for (auto _ : state) {
    const auto& q = queries[i++ % queries.size()];
    benchmark::DoNotOptimize(Linear ? index.nearest_linear(q) : index.nearest(q));
  }
  state.counters["parcels"] = static_cast<double>(index.size());
}
BENCHMARK(BM_NearestParcel<false>)->Arg(32)->Arg(100)->Arg(300);
BENCHMARK(BM_NearestParcel<true>)->Arg(32)->Arg(100);

void BM_ParseAndPrefilter(benchmark::State& state) {
  SynthConfig cfg;
  cfg.num_users = static_cast<std::size_t>(state.range(0));
  cfg.active_weekdays = 5;
  const auto world = generate(cfg);
  FilterConfig filter;
  for (auto _ : state) {
    std::istringstream in(world.records_tsv);
    auto parsed = parse_records(in);
    benchmark::DoNotOptimize(group_by_user(prefilter(std::move(parsed.records), filter)));
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * world.records_tsv.size()));
}
BENCHMARK(BM_ParseAndPrefilter)->Arg(100)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
