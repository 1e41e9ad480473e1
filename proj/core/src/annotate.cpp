#include "mobmotif/annotate.hpp"

#include <algorithm>
#include <bitset>
#include <map>

namespace mobmotif {

std::vector<AnnotatedPoint> annotate_history(const UserTrack& track, const SpatialIndex& index,
                                             std::chrono::minutes utc_offset, double radius_m) {
  std::vector<AnnotatedPoint> out;
  out.reserve(track.points.size());
  const auto offset_s = std::chrono::duration_cast<std::chrono::seconds>(utc_offset).count();
  for (const auto& rec : track.points) {
    AnnotatedPoint ap;
    ap.record = rec;
    ap.local_time = rec.timestamp + offset_s;
    if (const auto hit = index.nearest(rec.position, radius_m)) {
      ap.parcel = hit->id;
      ap.activity = hit->activity;
    }
    out.push_back(std::move(ap));
  }
  return out;
}

bool stationary_bot_filter(std::span<const AnnotatedPoint> history) {
  if (history.empty() || !history.front().parcel) return true;
  const auto first = *history.front().parcel;
  const bool single = std::all_of(history.begin(), history.end(),
                                  [&](const AnnotatedPoint& p) { return p.parcel == first; });
  return !single || history.front().activity == Activity::residential;
}

std::vector<ActiveLocation> active_locations(std::span<const AnnotatedPoint> history) {
  std::map<ParcelId, ActiveLocation> counts;
  std::size_t total = 0;
  for (const auto& p : history) {
    if (!p.parcel || p.activity == Activity::others) continue;
    auto& loc = counts[*p.parcel];
    loc.parcel = *p.parcel;
    loc.activity = p.activity;
    ++loc.tweet_count;
    ++total;
  }

  std::vector<ActiveLocation> active;
  // count > total / distinct, kept in integers.
  for (const auto& [id, loc] : counts) {
    if (loc.tweet_count * counts.size() > total) active.push_back(loc);
  }
  std::sort(active.begin(), active.end(), [](const ActiveLocation& a, const ActiveLocation& b) {
    return a.tweet_count != b.tweet_count ? a.tweet_count > b.tweet_count : a.parcel < b.parcel;
  });
  for (std::size_t i = 0; i < active.size(); ++i) active[i].rank = i + 1;
  return active;
}

bool NightWindow::contains(Timestamp local_time) const {
  const auto minute = static_cast<int>(seconds_of_day(local_time) / 60);
  if (start_minute <= end_minute) return minute >= start_minute && minute < end_minute;
  return minute >= start_minute || minute < end_minute;
}

const char* to_string(HomeRule rule) {
  switch (rule) {
    case HomeRule::night_mode: return "night_mode";
    case HomeRule::top_residential: return "top_residential";
    case HomeRule::unknown: return "unknown";
  }
  return "unknown";
}

HomeAssignment infer_home(std::span<const AnnotatedPoint> history, std::span<const ActiveLocation> actives,
                          const NightWindow& night) {
  HomeAssignment result;
  if (!history.empty()) result.user_id = history.front().record.user_id;

  struct Tally {
    std::size_t night = 0;
    std::size_t total = 0;
  };
  std::map<ParcelId, Tally> residential;
  for (const auto& p : history) {
    if (!p.parcel || p.activity != Activity::residential) continue;
    auto& t = residential[*p.parcel];
    ++t.total;
    if (night.contains(p.local_time)) ++t.night;
  }

  std::optional<ParcelId> best;
  Tally best_tally;
  for (const auto& [id, t] : residential) {
    if (t.night == 0) continue;
    // Map iteration is id-ascending, so strict comparisons keep the smaller id on ties.
    if (!best || t.night > best_tally.night || (t.night == best_tally.night && t.total > best_tally.total)) {
      best = id;
      best_tally = t;
    }
  }
  if (best) {
    result.home = best;
    result.rule = HomeRule::night_mode;
    return result;
  }

  const ActiveLocation* top = nullptr;
  for (const auto& a : actives) {
    if (a.activity == Activity::residential && (!top || a.rank < top->rank)) top = &a;
  }
  if (top) {
    result.home = top->parcel;
    result.rule = HomeRule::top_residential;
  }
  return result;
}

std::vector<UserDay> split_days(std::span<const AnnotatedPoint> history) {
  std::vector<UserDay> days;
  for (const auto& p : history) {
    const auto date = day_of(p.local_time);
    if (days.empty() || days.back().local_date != date) {
      days.push_back({p.record.user_id, date, {}, 0});
    }
    days.back().points.push_back(p);
  }
  for (auto& day : days) {
    std::bitset<kSlotsPerDay> slots;
    for (const auto& p : day.points) slots.set(static_cast<std::size_t>(seconds_of_day(p.local_time) / 1800));
    day.slot_count = static_cast<int>(slots.count());
  }
  return days;
}

std::vector<UserDay> select_active_days(std::vector<UserDay> days, const DaySelection& selection) {
  auto weekday_ok = [&](const UserDay& d) { return !selection.weekdays_only || is_weekday(d.local_date); };
  auto qualifies = [&](const UserDay& d) { return weekday_ok(d) && d.slot_count >= selection.min_slots; };

  std::vector<UserDay> out;
  if (selection.scope == ActiveScope::day) {
    for (auto& d : days) {
      if (qualifies(d)) out.push_back(std::move(d));
    }
    return out;
  }

  std::map<std::string, bool> active_user;
  for (const auto& d : days) active_user[d.user_id] = active_user[d.user_id] || qualifies(d);
  for (auto& d : days) {
    if (active_user[d.user_id] && weekday_ok(d)) out.push_back(std::move(d));
  }
  return out;
}

}  // namespace mobmotif
