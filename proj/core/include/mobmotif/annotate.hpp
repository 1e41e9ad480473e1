#pragma once

#include <chrono>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobmotif/ingest.hpp"
#include "mobmotif/parcel_index.hpp"
#include "mobmotif/time.hpp"

namespace mobmotif {

/// A point record anchored to its land-use context.
struct AnnotatedPoint {
  PointRecord record;
  /// Absent when no parcel lies within the search radius.
  std::optional<ParcelId> parcel;
  /// Activity::others whenever `parcel` is absent.
  Activity activity = Activity::others;
  /// record.timestamp shifted by the dataset's fixed UTC offset.
  Timestamp local_time = 0;
};

std::vector<AnnotatedPoint> annotate_history(const UserTrack& track, const SpatialIndex& index,
                                             std::chrono::minutes utc_offset,
                                             double radius_m = kDefaultSearchRadiusM);

/// False (drop) when every point sits on one and the same non-residential parcel.
bool stationary_bot_filter(std::span<const AnnotatedPoint> history);

struct ActiveLocation {
  ParcelId parcel = 0;
  Activity activity = Activity::others;
  std::size_t tweet_count = 0;
  /// 1-based; count descending, then parcel id ascending.
  std::size_t rank = 0;

  friend bool operator==(const ActiveLocation&, const ActiveLocation&) = default;
};

/// Parcels whose point count strictly exceeds the user's mean count per
/// distinct parcel. Points without context (code 12) are not counted.
std::vector<ActiveLocation> active_locations(std::span<const AnnotatedPoint> history);

/// Local-time window [start, end) that may wrap past midnight.
struct NightWindow {
  int start_minute = 21 * 60;
  int end_minute = 6 * 60;

  bool contains(Timestamp local_time) const;
};

enum class HomeRule { night_mode, top_residential, unknown };

const char* to_string(HomeRule rule);

struct HomeAssignment {
  std::string user_id;
  std::optional<ParcelId> home;
  HomeRule rule = HomeRule::unknown;
};

/// Rule 1: the residential parcel with the most night-window points (ties by
/// total points, then id). Rule 2: the best-ranked residential active location.
/// Otherwise unknown.
HomeAssignment infer_home(std::span<const AnnotatedPoint> history, std::span<const ActiveLocation> actives,
                          const NightWindow& night = {});

inline constexpr int kSlotsPerDay = 48;

struct UserDay {
  std::string user_id;
  std::chrono::sys_days local_date;
  std::vector<AnnotatedPoint> points;
  /// Distinct half-hour slots holding at least one point.
  int slot_count = 0;
};

/// Partitions a chronological history at local midnight.
std::vector<UserDay> split_days(std::span<const AnnotatedPoint> history);

enum class ActiveScope { day, user };

struct DaySelection {
  int min_slots = 6;
  bool weekdays_only = true;
  /// `user`: keep every (weekday-filtered) day of a user with at least one
  /// qualifying day.
  ActiveScope scope = ActiveScope::day;
};

std::vector<UserDay> select_active_days(std::vector<UserDay> days, const DaySelection& selection = {});

}  // namespace mobmotif
