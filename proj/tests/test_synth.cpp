#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mobmotif/annotate.hpp"
#include "mobmotif/error.hpp"
#include "mobmotif/synth.hpp"

using namespace mobmotif;

namespace {

SynthConfig small() {
  SynthConfig cfg;
  cfg.num_users = 1;
  cfg.cells_per_side = 60;
  cfg.templates = {MotifTemplate::parse("H W H|1|2")};
  cfg.active_weekdays = 1;
  return cfg;
}

std::vector<PointRecord> records_of(const SynthOutput& out) {
  std::istringstream in(out.records_tsv);
  return parse_records(in).records;
}

}  // namespace

TEST(Template, Parse) {
  const auto t = MotifTemplate::parse("H W Sh H|0.25|3.5");
  EXPECT_EQ(t.walk, "H W Sh H");
  EXPECT_DOUBLE_EQ(t.weight, 0.25);
  EXPECT_DOUBLE_EQ(t.spacing_km, 3.5);
  EXPECT_THROW(MotifTemplate::parse("H W H"), Error);
  EXPECT_THROW(MotifTemplate::parse("H W H|x|1"), Error);
}

TEST(Generate, MinimalClosedWalk) {
  const auto out = generate(small());
  const auto recs = records_of(out);
  ASSERT_GE(recs.size(), 8u);
  ASSERT_LE(recs.size(), 12u);
  ASSERT_EQ(out.truth.users.size(), 1u);
  const auto& user = out.truth.users[0];
  EXPECT_EQ(user.role, SynthRole::resident);

  std::istringstream parcels(out.parcels_geojson);
  const auto loaded = load_parcels(parcels, ActivityScheme::defaults());
  EXPECT_EQ(loaded.index.size(), 3600u);
  EXPECT_EQ(loaded.index.parcel(user.home).activity, Activity::residential);

  std::vector<ParcelId> walk;
  std::set<std::int64_t> slots;
  for (const auto& r : recs) {
    const auto hit = loaded.index.nearest(r.position);
    ASSERT_TRUE(hit);
    EXPECT_EQ(hit->distance_m, 0.0);
    if (walk.empty() || walk.back() != hit->id) walk.push_back(hit->id);
    slots.insert(seconds_of_day(r.timestamp - 6 * 3600) / 1800);
  }
  ASSERT_EQ(walk.size(), 3u);
  EXPECT_EQ(walk.front(), user.home);
  EXPECT_EQ(walk.back(), user.home);
  EXPECT_EQ(loaded.index.parcel(walk[1]).activity, Activity::office);
  EXPECT_GE(slots.size(), 6u);
  EXPECT_EQ(out.truth.expected_networks, 1u);
}

TEST(Generate, Deterministic) {
  auto cfg = small();
  cfg.num_users = 20;
  cfg.stationary_bots = 2;
  cfg.teleporters = 2;
  cfg.tourists = 2;
  const auto a = generate(cfg);
  const auto b = generate(cfg);
  EXPECT_EQ(a.records_tsv, b.records_tsv);
  EXPECT_EQ(a.parcels_geojson, b.parcels_geojson);
  EXPECT_EQ(ground_truth_json(a.truth), ground_truth_json(b.truth));
  cfg.seed = 43;
  EXPECT_NE(generate(cfg).records_tsv, a.records_tsv);
}

TEST(Generate, AdversariesDoNotPerturbResidents) {
  auto cfg = small();
  cfg.num_users = 10;
  cfg.active_weekdays = 20;
  const auto plain = generate(cfg);
  cfg.stationary_bots = 3;
  cfg.teleporters = 3;
  cfg.tourists = 3;
  const auto noisy = generate(cfg);
  auto residents = [](const std::string& tsv) {
    std::string out;
    std::istringstream in(tsv);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind('u', 0) == 0) out += line + '\n';
    }
    return out;
  };
  EXPECT_EQ(residents(plain.records_tsv), residents(noisy.records_tsv));
  EXPECT_EQ(plain.truth.census.size(), noisy.truth.census.size());
}

TEST(Generate, ExpectedCensusFromPlan) {
  SynthConfig cfg;
  cfg.num_users = 20;
  cfg.templates = {MotifTemplate::parse("H W H|0.5|2"), MotifTemplate::parse("H R1 H R2 H|0.3|2"),
                   MotifTemplate::parse("H|0.2|1")};
  const auto out = generate(cfg);
  std::map<std::string, double> pct;
  for (const auto& c : out.truth.census) pct[c.signature] = c.percentage;
  EXPECT_DOUBLE_EQ(pct.at("L2:01.10"), 50.0);
  EXPECT_DOUBLE_EQ(pct.at("L1:0"), 20.0);
  EXPECT_DOUBLE_EQ(pct.at("A2:H-R:01.10"), 30.0);
  EXPECT_DOUBLE_EQ(pct.at("A2:H-W:01.10"), 50.0);
  EXPECT_EQ(out.truth.expected_networks, 20u * 20u);
}

TEST(Generate, InfeasibleConfigs) {
  auto cfg = small();
  cfg.templates = {MotifTemplate::parse("H W Sh E T R H|1|1")};
  cfg.tweets_min = 6;
  cfg.tweets_max = 8;
  EXPECT_THROW(generate(cfg), Error);

  cfg = small();
  cfg.templates = {MotifTemplate::parse("H W H|0.6|2")};
  EXPECT_THROW(generate(cfg), Error);

  cfg = small();
  cfg.templates = {MotifTemplate::parse("H W H|1|0")};
  EXPECT_THROW(generate(cfg), Error);

  cfg = small();
  cfg.templates = {MotifTemplate::parse("W H W|1|1")};
  EXPECT_THROW(generate(cfg), Error);

  cfg = small();
  cfg.templates = {MotifTemplate::parse("H Q H|1|1")};
  EXPECT_THROW(generate(cfg), Error);

  cfg = small();
  cfg.tweets_min = 5;
  EXPECT_THROW(generate(cfg), Error);

  cfg = small();
  cfg.templates = {MotifTemplate::parse("H W H|1|50")};
  EXPECT_THROW(generate(cfg), Error);
}

TEST(GroundTruth, RoundTripThroughFile) {
  auto cfg = small();
  cfg.num_users = 4;
  cfg.stationary_bots = 1;
  const auto out = generate(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "mobmotif_synth_test";
  std::filesystem::remove_all(dir);
  write_synth(out, cfg, dir);
  for (const char* f : {"parcels.geojson", "boundary.geojson", "records.tsv", "ground_truth.json", "run.cfg"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto back = read_ground_truth(dir / "ground_truth.json");
  EXPECT_EQ(ground_truth_json(back), ground_truth_json(out.truth));
  EXPECT_EQ(back.users.back().role, SynthRole::stationary_bot);
  std::filesystem::remove_all(dir);
}
