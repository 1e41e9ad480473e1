#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mobmotif/error.hpp"
#include "mobmotif/pipeline.hpp"
#include "mobmotif/report.hpp"
#include "mobmotif/synth.hpp"

using namespace mobmotif;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class PipelineTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mobmotif_pipeline_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    synth_.num_users = 30;
    synth_.cells_per_side = 80;
    synth_.templates = {MotifTemplate::parse("H W H|0.6|2"), MotifTemplate::parse("H W Sh H|0.4|1.5")};
    synth_.stationary_bots = 3;
    synth_.teleporters = 2;
    synth_.tourists = 2;
    world_ = generate(synth_);
    write_synth(world_, synth_, dir_ / "world");
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunConfig config(const std::string& out) const {
    RunConfig cfg;
    cfg.records = dir_ / "world" / "records.tsv";
    cfg.parcels = dir_ / "world" / "parcels.geojson";
    cfg.boundary = dir_ / "world" / "boundary.geojson";
    cfg.utc_offset_minutes = synth_.utc_offset_minutes;
    cfg.output_dir = dir_ / out;
    return cfg;
  }

  fs::path dir_;
  SynthConfig synth_;
  SynthOutput world_;
};

}  // namespace

TEST(Stage, Names) {
  EXPECT_EQ(parse_stage("mine"), Stage::mine);
  EXPECT_STREQ(to_string(Stage::all), "all");
  EXPECT_THROW(parse_stage("plot"), Error);
}

TEST(Manifest, SetAndGet) {
  Manifest m;
  m.set("a", 1);
  m.set("b", 2);
  m.set("a", 3);
  EXPECT_EQ(m.counts.size(), 2u);
  EXPECT_EQ(m.get("a"), 3u);
  EXPECT_FALSE(m.get("c"));
}

TEST(Report, AtomicWriteReplaces) {
  const auto p = fs::temp_directory_path() / "mobmotif_atomic.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(slurp(p), "two");
  for (const auto& e : fs::directory_iterator(p.parent_path())) {
    EXPECT_EQ(e.path().filename().string().find("mobmotif_atomic.txt."), std::string::npos);
  }
  fs::remove(p);
  EXPECT_EQ(format_fixed(2.0 / 3.0, 4), "0.6667");
}

TEST_F(PipelineTest, MineRecoversPlantAndCounts) {
  const auto r = run_pipeline(Stage::mine, config("mine"));
  const auto& m = r.manifest;
  EXPECT_EQ(m.get("users"), 30u + 3u + 2u + 2u);
  EXPECT_EQ(m.get("users_after_speed"), 30u + 3u + 2u);
  EXPECT_EQ(m.get("users_after_residency"), 33u);
  EXPECT_EQ(m.get("users_after_bot_filter"), 30u);
  EXPECT_EQ(m.get("users_with_home"), 30u);
  EXPECT_EQ(m.get("active_users"), 30u);
  EXPECT_EQ(m.get("networks_lbm"), 600u);
  EXPECT_EQ(m.get("rejected_days_open_walk"), 0u);

  ASSERT_EQ(r.censuses.size(), 2u);
  for (const auto& expected : world_.truth.census) {
    if (expected.node_count < 2) continue;
    const auto& census = r.censuses[expected.kind == MotifKind::lbm ? 0 : 1];
    bool found = false;
    for (const auto& c : census.classes) {
      if (c.signature.code == expected.signature) {
        EXPECT_NEAR(c.percentage, expected.percentage, 0.1) << expected.signature;
        found = true;
      }
    }
    EXPECT_TRUE(found) << expected.signature;
  }

  // Each stage count is at most the previous one.
  const char* chain[] = {"gps_records", "after_dedup", "after_boundary", "after_keywords"};
  for (int i = 1; i < 4; ++i) EXPECT_LE(*m.get(chain[i]), *m.get(chain[i - 1]));
  const char* users[] = {"users", "users_after_speed", "users_after_residency", "users_after_bot_filter",
                         "users_with_home", "active_users"};
  for (int i = 1; i < 6; ++i) EXPECT_LE(*m.get(users[i]), *m.get(users[i - 1]));

  for (const char* f : {"manifest.json", "census.csv", "size_groups.csv", "motif_edges.txt", "distance_stats.csv",
                        "homes.csv", "annotations.tsv", "filtered_records.tsv", "parcel_report.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "mine" / f)) << f;
  }
  EXPECT_FALSE(fs::exists(dir_ / "mine" / "density.csv"));
  const auto manifest = nlohmann::json::parse(slurp(dir_ / "mine" / "manifest.json"));
  EXPECT_EQ(manifest["stage"], "mine");
  EXPECT_EQ(manifest["counts"]["networks_abm"], 600);
}

TEST_F(PipelineTest, HomesMatchPlan) {
  auto cfg = config("homes");
  cfg.hash_user_ids = false;
  const auto r = run_pipeline(Stage::annotate, cfg);
  std::map<std::string, ParcelId> planned;
  for (const auto& u : world_.truth.users) {
    if (u.role == SynthRole::resident) planned[u.user_id] = u.home;
  }
  ASSERT_EQ(r.homes.size(), planned.size());
  for (const auto& h : r.homes) {
    ASSERT_TRUE(h.home);
    EXPECT_EQ(*h.home, planned.at(h.user_id));
    EXPECT_EQ(h.rule, HomeRule::night_mode);
  }
}

TEST_F(PipelineTest, IngestOnlyAndHashedIds) {
  const auto r = run_pipeline(Stage::ingest, config("ingest"));
  EXPECT_TRUE(fs::exists(dir_ / "ingest" / "filtered_records.tsv"));
  EXPECT_FALSE(fs::exists(dir_ / "ingest" / "homes.csv"));
  EXPECT_FALSE(r.manifest.get("parcels_loaded"));
  const auto text = slurp(dir_ / "ingest" / "filtered_records.tsv");
  EXPECT_EQ(text.find("u00001"), std::string::npos);
  EXPECT_NE(text.find(pseudonymize("u00001")), std::string::npos);
}

TEST_F(PipelineTest, ShapeAndZones) {
  // One zone covering the whole grid, one empty zone elsewhere, one covering nothing useful.
  const std::string zones = R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"name":"west","population":100},
     "geometry":{"type":"Polygon","coordinates":[[[-87.76,41.79],[-87.7,41.79],[-87.7,41.9],[-87.76,41.9],[-87.76,41.79]]]}},
    {"type":"Feature","properties":{"name":"east","population":300},
     "geometry":{"type":"Polygon","coordinates":[[[-87.7,41.79],[-87.6,41.79],[-87.6,41.9],[-87.7,41.9],[-87.7,41.79]]]}},
    {"type":"Feature","properties":{"name":"far","population":5},
     "geometry":{"type":"Polygon","coordinates":[[[-80,30],[-79,30],[-79,31],[-80,31],[-80,30]]]}}]})";
  write_file_atomic(dir_ / "zones.geojson", zones);
  auto cfg = config("shape");
  cfg.zones = dir_ / "zones.geojson";
  const auto r = run_pipeline(Stage::all, cfg);
  ASSERT_TRUE(r.density);
  double total = r.density->out_of_range_mass;
  for (double m : r.density->mass) total += m;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_EQ(r.manifest.get("trajectories_aligned"), 600u);
  ASSERT_TRUE(r.correlation);
  EXPECT_EQ(r.correlation->n, 3u);
  EXPECT_TRUE(fs::exists(dir_ / "shape" / "density.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "shape" / "correlation.csv"));
}

TEST_F(PipelineTest, MissingInputNamesPath) {
  auto cfg = config("missing");
  cfg.parcels = dir_ / "nope.geojson";
  try {
    run_pipeline(Stage::mine, cfg);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("nope.geojson"), std::string::npos);
  }
  EXPECT_FALSE(fs::exists(dir_ / "missing" / "census.csv"));
  // Ingest alone does not need parcels.
  EXPECT_NO_THROW(run_pipeline(Stage::ingest, cfg));
}

TEST_F(PipelineTest, InvalidThresholdsRejected) {
  auto cfg = config("bad");
  cfg.max_speed_mps = 0;
  EXPECT_THROW(run_pipeline(Stage::ingest, cfg), Error);
  cfg = config("bad");
  cfg.min_slots = 0;
  EXPECT_THROW(run_pipeline(Stage::ingest, cfg), Error);
  cfg = config("bad");
  cfg.workers = 0;
  EXPECT_THROW(run_pipeline(Stage::ingest, cfg), Error);
}

TEST_F(PipelineTest, WorkerCountDoesNotChangeOutputs) {
  auto one = config("w1");
  auto eight = config("w8");
  eight.workers = 8;
  const auto a = run_pipeline(Stage::all, one);
  run_pipeline(Stage::all, eight);
  for (const auto& f : a.artifacts) EXPECT_EQ(slurp(dir_ / "w1" / f), slurp(dir_ / "w8" / f)) << f;
  EXPECT_EQ(slurp(dir_ / "w1" / "manifest.json"), slurp(dir_ / "w8" / "manifest.json"));
}
