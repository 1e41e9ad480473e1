#include <gtest/gtest.h>

#include "mobmotif/annotate.hpp"

using namespace mobmotif;
using namespace std::chrono;

namespace {

constexpr Timestamp kMonday = 1393804800;  // 2014-03-03T00:00:00Z

AnnotatedPoint pt(std::optional<ParcelId> parcel, Activity a, Timestamp local, std::string user = "u") {
  AnnotatedPoint p;
  p.record.user_id = std::move(user);
  p.record.timestamp = local;
  p.local_time = local;
  p.parcel = parcel;
  p.activity = parcel ? a : Activity::others;
  return p;
}

Timestamp at(int day, int hour, int minute = 0) { return kMonday + day * kSecondsPerDay + hour * 3600 + minute * 60; }

SpatialIndex two_parcels() {
  std::vector<Parcel> parcels(2);
  parcels[0].polygons.push_back({{{0, 0}, {0, 0.001}, {0.001, 0.001}, {0.001, 0}, {0, 0}}, {}});
  parcels[0].activity = Activity::residential;
  parcels[1].polygons.push_back({{{0, 0.002}, {0, 0.003}, {0.001, 0.003}, {0.001, 0.002}, {0, 0.002}}, {}});
  parcels[1].activity = Activity::office;
  return SpatialIndex(std::move(parcels));
}

}  // namespace

TEST(Annotate, ParcelsOffsetsAndFallback) {
  const auto index = two_parcels();
  UserTrack track{"u", {}};
  PointRecord r;
  r.user_id = "u";
  r.timestamp = 1000000;
  r.position = {0.0005, 0.0025};
  track.points.push_back(r);
  r.position = {0.0005, 0.02};  // about 1.9 km east of the office
  track.points.push_back(r);
  const auto out = annotate_history(track, index, minutes{-360});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].parcel, 2u);
  EXPECT_EQ(out[0].activity, Activity::office);
  EXPECT_EQ(out[0].local_time, 1000000 - 6 * 3600);
  EXPECT_FALSE(out[1].parcel);
  EXPECT_EQ(out[1].activity, Activity::others);
  // A generous radius reaches the office.
  EXPECT_EQ(annotate_history(track, index, minutes{0}, 2000.0)[1].parcel, 2u);
}

TEST(BotFilter, StationaryNonResidential) {
  std::vector<AnnotatedPoint> h{pt(5, Activity::shopping, 1), pt(5, Activity::shopping, 2)};
  EXPECT_FALSE(stationary_bot_filter(h));
  h.push_back(pt(6, Activity::shopping, 3));
  EXPECT_TRUE(stationary_bot_filter(h));
  std::vector<AnnotatedPoint> home{pt(1, Activity::residential, 1), pt(1, Activity::residential, 2)};
  EXPECT_TRUE(stationary_bot_filter(home));
}

TEST(ActiveLocations, StrictlyAboveMean) {
  std::vector<AnnotatedPoint> h;
  for (int i = 0; i < 4; ++i) h.push_back(pt(1, Activity::residential, i));
  for (int i = 0; i < 2; ++i) h.push_back(pt(2, Activity::office, i));
  for (int i = 0; i < 2; ++i) h.push_back(pt(3, Activity::shopping, i));
  h.push_back(pt(std::nullopt, Activity::others, 0));
  h.push_back(pt(9, Activity::others, 0));
  // Mean is 8 / 3; only parcel 1 exceeds it.
  auto act = active_locations(h);
  ASSERT_EQ(act.size(), 1u);
  EXPECT_EQ(act[0].parcel, 1u);
  EXPECT_EQ(act[0].rank, 1u);

  // Mean exactly 3: a count of 3 is not active.
  std::vector<AnnotatedPoint> even;
  for (int i = 0; i < 4; ++i) even.push_back(pt(1, Activity::residential, i));
  for (int i = 0; i < 3; ++i) even.push_back(pt(2, Activity::office, i));
  for (int i = 0; i < 2; ++i) even.push_back(pt(3, Activity::office, i));
  act = active_locations(even);
  ASSERT_EQ(act.size(), 1u);
  EXPECT_EQ(act[0].tweet_count, 4u);
}

TEST(ActiveLocations, RankTiesByParcelId) {
  std::vector<AnnotatedPoint> h;
  for (int i = 0; i < 3; ++i) h.push_back(pt(7, Activity::office, i));
  for (int i = 0; i < 3; ++i) h.push_back(pt(4, Activity::residential, i));
  h.push_back(pt(9, Activity::shopping, 0));
  const auto act = active_locations(h);
  ASSERT_EQ(act.size(), 2u);
  EXPECT_EQ(act[0].parcel, 4u);
  EXPECT_EQ(act[1].parcel, 7u);
  EXPECT_EQ(act[1].rank, 2u);
}

TEST(NightWindow, WrapsMidnight) {
  const NightWindow w;
  EXPECT_TRUE(w.contains(at(0, 21)));
  EXPECT_TRUE(w.contains(at(0, 23, 59)));
  EXPECT_TRUE(w.contains(at(0, 0)));
  EXPECT_TRUE(w.contains(at(0, 5, 59)));
  EXPECT_FALSE(w.contains(at(0, 6)));
  EXPECT_FALSE(w.contains(at(0, 20, 59)));
}

TEST(Home, NightRuleWithTies) {
  std::vector<AnnotatedPoint> h{pt(3, Activity::residential, at(0, 22)), pt(2, Activity::residential, at(0, 23)),
                                pt(2, Activity::residential, at(0, 12)), pt(8, Activity::office, at(0, 23)),
                                pt(8, Activity::office, at(1, 23))};
  const auto home = infer_home(h, active_locations(h));
  EXPECT_EQ(home.home, 2u);
  EXPECT_EQ(home.rule, HomeRule::night_mode);
  EXPECT_EQ(home.user_id, "u");

  std::vector<AnnotatedPoint> even{pt(3, Activity::residential, at(0, 22)), pt(2, Activity::residential, at(0, 23))};
  EXPECT_EQ(infer_home(even, {}).home, 2u);
}

TEST(Home, FallsBackToTopResidentialThenUnknown) {
  std::vector<AnnotatedPoint> h;
  for (int i = 0; i < 5; ++i) h.push_back(pt(4, Activity::office, at(0, 10 + i)));
  for (int i = 0; i < 4; ++i) h.push_back(pt(6, Activity::residential, at(0, 10 + i)));
  h.push_back(pt(7, Activity::residential, at(0, 15)));
  const auto actives = active_locations(h);
  const auto home = infer_home(h, actives);
  EXPECT_EQ(home.home, 6u);
  EXPECT_EQ(home.rule, HomeRule::top_residential);

  std::vector<AnnotatedPoint> none{pt(4, Activity::office, at(0, 10)), pt(4, Activity::office, at(0, 11))};
  const auto unknown = infer_home(none, active_locations(none));
  EXPECT_FALSE(unknown.home);
  EXPECT_EQ(unknown.rule, HomeRule::unknown);
}

TEST(Days, SplitAndSlotCount) {
  std::vector<AnnotatedPoint> h{pt(1, Activity::residential, at(0, 8, 0)), pt(1, Activity::residential, at(0, 8, 29)),
                                pt(1, Activity::residential, at(0, 8, 30)), pt(1, Activity::residential, at(0, 23, 59)),
                                pt(1, Activity::residential, at(1, 0, 0))};
  const auto days = split_days(h);
  ASSERT_EQ(days.size(), 2u);
  EXPECT_EQ(days[0].points.size(), 4u);
  EXPECT_EQ(days[0].slot_count, 3);
  EXPECT_EQ(days[1].slot_count, 1);
  EXPECT_EQ(days[1].local_date, sys_days{year{2014} / 3 / 4});
}

TEST(Days, SlotThresholdBoundary) {
  auto day_with_slots = [](int day, int slots) {
    std::vector<AnnotatedPoint> h;
    for (int s = 0; s < slots; ++s) h.push_back(pt(1, Activity::residential, at(day, 8 + s)));
    return split_days(h);
  };
  EXPECT_EQ(select_active_days(day_with_slots(0, 6)).size(), 1u);
  EXPECT_EQ(select_active_days(day_with_slots(0, 5)).size(), 0u);
  // Saturday.
  EXPECT_EQ(select_active_days(day_with_slots(5, 10)).size(), 0u);
  DaySelection all;
  all.weekdays_only = false;
  EXPECT_EQ(select_active_days(day_with_slots(5, 10), all).size(), 1u);
}

TEST(Days, UserScope) {
  std::vector<AnnotatedPoint> h;
  for (int s = 0; s < 6; ++s) h.push_back(pt(1, Activity::residential, at(0, 8 + s)));
  for (int s = 0; s < 2; ++s) h.push_back(pt(1, Activity::residential, at(1, 8 + s)));
  DaySelection user;
  user.scope = ActiveScope::user;
  EXPECT_EQ(select_active_days(split_days(h)).size(), 1u);
  EXPECT_EQ(select_active_days(split_days(h), user).size(), 2u);
}
