#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mobmotif/error.hpp"
#include "mobmotif/ingest.hpp"

using namespace mobmotif;

namespace {

PointRecord rec(std::string user, Timestamp t, double lat, double lon, std::string text = "") {
  PointRecord r;
  r.user_id = std::move(user);
  r.timestamp = t;
  r.position = {lat, lon};
  r.text = std::move(text);
  return r;
}

// Moves `meters` due north of (lat, lon) in `seconds`.
UserTrack two_points(double meters, Timestamp seconds) {
  const double dlat = meters / kMetersPerDegree;
  return {"u", {rec("u", 0, 41.8, -87.7), rec("u", seconds, 41.8 + dlat, -87.7)}};
}

}  // namespace

TEST(Parse, DefaultSchemaWithHeader) {
  std::istringstream in(
      "user_id\ttimestamp\tlat\tlon\tsource\ttext\n"
      "a\t2014-03-03T12:00:00Z\t41.8\t-87.7\tgps\thello\n"
      "b\t2014-03-03T12:00:00Z\t41.8\t-87.7\tgeocoded\t\n"
      "c\tnot-a-time\t41.8\t-87.7\tgps\t\n"
      "d\t2014-03-03T12:00:00Z\t95\t-87.7\tgps\t\n"
      "e\t2014-03-03T12:00:00Z\t41.8\n"
      "\n"
      "f\t2014-03-03T12:00:00Z\t41.8\tabc\tgps\t\n");
  const auto parsed = parse_records(in);
  EXPECT_EQ(parsed.report.lines, 6u);
  EXPECT_EQ(parsed.report.records, 1u);
  EXPECT_EQ(parsed.report.geocoded, 1u);
  EXPECT_EQ(parsed.report.bad_coord, 1u);
  EXPECT_EQ(parsed.report.malformed, 3u);
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.records[0].user_id, "a");
  EXPECT_EQ(parsed.records[0].text, "hello");
  EXPECT_EQ(parsed.records[0].timestamp, 1393848000);
}

TEST(Parse, CustomCommaSchema) {
  const auto schema = RecordSchema::parse("delim=comma,user=1,ts=0,lat=3,lon=2,source=-1,text=-1,header=0");
  std::istringstream in("2014-03-03T12:00:00Z,alice,-87.7,41.8\n");
  const auto parsed = parse_records(in, schema);
  ASSERT_EQ(parsed.records.size(), 1u);
  EXPECT_EQ(parsed.records[0].user_id, "alice");
  EXPECT_EQ(parsed.records[0].position, (LatLon{41.8, -87.7}));
}

TEST(Parse, SchemaErrors) {
  EXPECT_THROW(RecordSchema::parse("color=blue"), Error);
  EXPECT_THROW(RecordSchema::parse("user=x"), Error);
  EXPECT_THROW(RecordSchema::parse("delim=pipes"), Error);
}

TEST(Parse, MissingFileThrows) {
  EXPECT_THROW(parse_records(std::filesystem::path("/nonexistent/records.tsv")), Error);
}

TEST(Prefilter, DedupKeepsCrossUserDuplicates) {
  std::vector<PointRecord> in{rec("a", 1, 41.8, -87.7), rec("a", 1, 41.8, -87.7), rec("b", 1, 41.8, -87.7),
                              rec("a", 2, 41.8, -87.7)};
  FilterConfig cfg;
  const auto out = prefilter(in, cfg);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[1].user_id, "b");
}

TEST(Prefilter, KeywordsCaseInsensitiveSubstring) {
  std::vector<PointRecord> in{rec("a", 1, 0, 0, "We're HIRING now"), rec("a", 2, 0, 0, "Heavy Traffic on I-90"),
                              rec("a", 3, 0, 0, "coffee"), rec("a", 4, 0, 0, "Weather Alert: snow")};
  FilterConfig cfg;
  const auto out = prefilter(in, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].text, "coffee");
  cfg.keyword_blocklist = {"coffee"};
  EXPECT_EQ(prefilter(in, cfg).size(), 3u);
}

TEST(Prefilter, BoundaryClip) {
  FilterConfig cfg;
  cfg.boundary.push_back({{{0, 0}, {0, 1}, {1, 1}, {1, 0}, {0, 0}}, {}});
  std::vector<PointRecord> in{rec("a", 1, 0.5, 0.5), rec("a", 2, 1.5, 0.5)};
  const auto out = prefilter(in, cfg);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].timestamp, 1);
}

TEST(Blocklist, ReadsFile) {
  const auto path = std::filesystem::temp_directory_path() / "mobmotif_blocklist.txt";
  std::ofstream(path) << "# comment\nSale\n\n  promo \n";
  const auto words = read_blocklist(path);
  EXPECT_EQ(words, (std::vector<std::string>{"sale", "promo"}));
  std::filesystem::remove(path);
}

TEST(Group, SortsUsersAndTimesStably) {
  std::vector<PointRecord> in{rec("b", 5, 1, 1), rec("a", 3, 1, 1), rec("a", 1, 1, 1), rec("a", 1, 2, 2)};
  const auto tracks = group_by_user(in);
  ASSERT_EQ(tracks.size(), 2u);
  EXPECT_EQ(tracks[0].user_id, "a");
  ASSERT_EQ(tracks[0].points.size(), 3u);
  EXPECT_EQ(tracks[0].points[0].position.lat, 1.0);
  EXPECT_EQ(tracks[0].points[1].position.lat, 2.0);
  EXPECT_EQ(tracks[0].points[2].timestamp, 3);
}

TEST(Speed, ThresholdBoundary) {
  FilterConfig cfg;
  // 238.9 m/s (860 km/h) kept, 277.8 m/s (1000 km/h) dropped.
  EXPECT_TRUE(speed_filter(two_points(238.9 * 100, 100), cfg).keep);
  const auto fast = speed_filter(two_points(277.8 * 100, 100), cfg);
  EXPECT_FALSE(fast.keep);
  EXPECT_EQ(fast.offending_index, 1u);
  EXPECT_NEAR(fast.offending_speed_mps, 277.8, 1e-6);
  EXPECT_TRUE(speed_filter(two_points(240.0 * 100 - 1e-6, 100), cfg).keep);
}

TEST(Speed, ZeroTimeJump) {
  FilterConfig cfg;
  EXPECT_FALSE(speed_filter(two_points(10.0, 0), cfg).keep);
  EXPECT_TRUE(speed_filter(two_points(0.0, 0), cfg).keep);
}

TEST(Residency, SpanStrictlyAbove) {
  FilterConfig cfg;
  auto track = [](Timestamp span) { return UserTrack{"u", {rec("u", 0, 0, 0), rec("u", span, 0, 0)}}; };
  EXPECT_FALSE(residency_filter(track(30 * kSecondsPerDay), cfg));
  EXPECT_TRUE(residency_filter(track(30 * kSecondsPerDay + 1), cfg));
  EXPECT_FALSE(residency_filter(UserTrack{"u", {}}, cfg));
}

TEST(Residency, ActiveDaysMode) {
  FilterConfig cfg;
  cfg.residency_mode = ResidencyMode::active_days;
  cfg.min_residency_days = 2;
  UserTrack t{"u", {rec("u", 0, 0, 0), rec("u", kSecondsPerDay, 0, 0), rec("u", 40 * kSecondsPerDay, 0, 0)}};
  EXPECT_TRUE(residency_filter(t, cfg));
  t.points.pop_back();
  EXPECT_FALSE(residency_filter(t, cfg));
}

TEST(Pseudonymize, StableHex) {
  EXPECT_EQ(pseudonymize(""), "cbf29ce484222325");
  EXPECT_EQ(pseudonymize("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(pseudonymize("alice").size(), 16u);
  EXPECT_NE(pseudonymize("alice"), pseudonymize("bob"));
}
