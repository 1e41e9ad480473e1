#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mobmotif/geo.hpp"
#include "mobmotif/time.hpp"

namespace mobmotif {

enum class LocationSource { gps, geocoded };

/// One timestamped geo-located observation of one user.
struct PointRecord {
  std::string user_id;
  Timestamp timestamp = 0;
  LatLon position;
  std::string text;
  LocationSource source = LocationSource::gps;

  friend bool operator==(const PointRecord&, const PointRecord&) = default;
};

/// Chronological observations of a single user.
struct UserTrack {
  std::string user_id;
  std::vector<PointRecord> points;
};

/// Column layout of the newline-delimited record stream.
struct RecordSchema {
  char delimiter = '\t';
  int user_column = 0;
  int timestamp_column = 1;
  int lat_column = 2;
  int lon_column = 3;
  /// `gps` or `geocoded`; an empty field or a negative column means gps.
  int source_column = 4;
  /// Negative when the stream carries no message text.
  int text_column = 5;
  /// Skip the first line when it names the columns.
  bool header = true;

  /// Parses `delim=tab,user=0,ts=1,lat=2,lon=3,source=4,text=5,header=1`.
  /// Unknown keys throw Error; missing keys keep their defaults.
  static RecordSchema parse(std::string_view spec);
};

struct ParseReport {
  std::size_t lines = 0;
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t bad_coord = 0;
  std::size_t geocoded = 0;
};

struct ParsedRecords {
  std::vector<PointRecord> records;
  ParseReport report;
};

/// Malformed lines are skipped and counted, never fatal. Geocoded records are
/// dropped and counted.
ParsedRecords parse_records(std::istream& in, const RecordSchema& schema = {});

/// Throws Error if the file cannot be opened.
ParsedRecords parse_records(const std::filesystem::path& path, const RecordSchema& schema = {});

enum class ResidencyMode { span, active_days };

struct FilterConfig {
  /// Study region; empty means no clipping.
  std::vector<Polygon> boundary;
  /// Lowercase substrings; a record whose lowercased text contains any is removed.
  std::vector<std::string> keyword_blocklist = default_blocklist();
  double max_speed_mps = 240.0;
  double min_residency_days = 30.0;
  ResidencyMode residency_mode = ResidencyMode::span;

  static std::vector<std::string> default_blocklist();
};

/// Reads one keyword per line; blank lines and `#` comments are ignored.
std::vector<std::string> read_blocklist(const std::filesystem::path& path);

/// Removes exact (user, time, lat, lon) duplicates keeping the first, records
/// outside the boundary, and blocklisted texts. Order is preserved.
std::vector<PointRecord> prefilter(std::vector<PointRecord> records, const FilterConfig& cfg);

/// Groups by user (sorted by id) with a stable chronological sort per user.
std::vector<UserTrack> group_by_user(std::vector<PointRecord> records);

struct SpeedDecision {
  bool keep = true;
  /// Index i such that points[i-1] -> points[i] was the first violation.
  std::optional<std::size_t> offending_index;
  double offending_speed_mps = 0.0;
};

/// The whole user is rejected when any consecutive pair moves faster than
/// max_speed_mps, or jumps position with zero elapsed time.
SpeedDecision speed_filter(const UserTrack& track, const FilterConfig& cfg);

/// True when the user stayed more than min_residency_days: observation span
/// in span mode, distinct UTC dates in active_days mode.
bool residency_filter(const UserTrack& track, const FilterConfig& cfg);

/// Stable 64-bit FNV-1a digest rendered as 16 hex digits.
std::string pseudonymize(std::string_view user_id);

}  // namespace mobmotif
