#include "mobmotif/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>

#include "mobmotif/error.hpp"

namespace mobmotif {

namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

int to_column(std::string_view key, std::string_view value) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error("record schema: bad column index for '" + std::string(key) + "'");
  }
  return v;
}

using DedupKey = std::tuple<std::string, Timestamp, double, double>;

struct DedupHash {
  std::size_t operator()(const DedupKey& k) const {
    std::size_t h = std::hash<std::string>{}(std::get<0>(k));
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(std::hash<Timestamp>{}(std::get<1>(k)));
    mix(std::hash<double>{}(std::get<2>(k)));
    mix(std::hash<double>{}(std::get<3>(k)));
    return h;
  }
};

}  // namespace

RecordSchema RecordSchema::parse(std::string_view spec) {
  RecordSchema schema;
  for (auto item : split(spec, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error("record schema: expected key=value, got '" + std::string(item) + "'");
    const auto key = trim(item.substr(0, eq));
    const auto value = trim(item.substr(eq + 1));
    if (key == "delim") {
      if (value == "tab" || value == "\\t") {
        schema.delimiter = '\t';
      } else if (value == "comma" || value == ",") {
        schema.delimiter = ',';
      } else if (value.size() == 1) {
        schema.delimiter = value[0];
      } else {
        throw Error("record schema: unsupported delimiter '" + std::string(value) + "'");
      }
    } else if (key == "user") {
      schema.user_column = to_column(key, value);
    } else if (key == "ts") {
      schema.timestamp_column = to_column(key, value);
    } else if (key == "lat") {
      schema.lat_column = to_column(key, value);
    } else if (key == "lon") {
      schema.lon_column = to_column(key, value);
    } else if (key == "source") {
      schema.source_column = to_column(key, value);
    } else if (key == "text") {
      schema.text_column = to_column(key, value);
    } else if (key == "header") {
      schema.header = value == "1" || value == "true" || value == "yes";
    } else {
      throw Error("record schema: unknown key '" + std::string(key) + "'");
    }
  }
  return schema;
}

ParsedRecords parse_records(std::istream& in, const RecordSchema& schema) {
  ParsedRecords out;
  auto& report = out.report;
  if (std::min({schema.user_column, schema.timestamp_column, schema.lat_column, schema.lon_column}) < 0) {
    throw Error("record schema: user, ts, lat and lon columns are required");
  }
  const int required = std::max({schema.user_column, schema.timestamp_column, schema.lat_column,
                                 schema.lon_column, schema.source_column});

  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool skip_header = first && schema.header;
    first = false;
    if (skip_header || trim(line).empty()) continue;
    ++report.lines;

    const auto fields = split(line, schema.delimiter);
    if (static_cast<int>(fields.size()) <= required) {
      ++report.malformed;
      continue;
    }

    PointRecord rec;
    rec.user_id = std::string(trim(fields[schema.user_column]));
    const auto ts = parse_iso8601(trim(fields[schema.timestamp_column]));
    const auto lat = to_double(fields[schema.lat_column]);
    const auto lon = to_double(fields[schema.lon_column]);
    auto source = schema.source_column >= 0 ? lowercase(trim(fields[schema.source_column])) : std::string();
    if (source.empty()) source = "gps";
    if (rec.user_id.empty() || !ts || !lat || !lon || (source != "gps" && source != "geocoded")) {
      ++report.malformed;
      continue;
    }
    rec.timestamp = *ts;
    rec.position = {*lat, *lon};
    if (!valid_coordinate(rec.position)) {
      ++report.bad_coord;
      continue;
    }
    if (source == "geocoded") {
      ++report.geocoded;
      continue;
    }
    rec.source = LocationSource::gps;
    if (schema.text_column >= 0 && schema.text_column < static_cast<int>(fields.size())) {
      rec.text = std::string(fields[schema.text_column]);
    }
    out.records.push_back(std::move(rec));
    ++report.records;
  }
  if (in.bad()) throw Error("read failure on record stream");
  return out;
}

ParsedRecords parse_records(const std::filesystem::path& path, const RecordSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open record file " + path.string());
  return parse_records(in, schema);
}

std::vector<std::string> FilterConfig::default_blocklist() {
  return {"job", "jobs", "hiring", "recruiting", "traffic", "weather alert"};
}

std::vector<std::string> read_blocklist(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open blocklist " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = trim(line);
    if (word.empty() || word.front() == '#') continue;
    words.push_back(lowercase(word));
  }
  return words;
}

std::vector<PointRecord> prefilter(std::vector<PointRecord> records, const FilterConfig& cfg) {
  std::unordered_set<DedupKey, DedupHash> seen;
  seen.reserve(records.size());
  std::vector<PointRecord> out;
  out.reserve(records.size());
  for (auto& rec : records) {
    if (!seen.emplace(rec.user_id, rec.timestamp, rec.position.lat, rec.position.lon).second) continue;
    if (!cfg.boundary.empty() && !any_contains(cfg.boundary, rec.position)) continue;
    if (!cfg.keyword_blocklist.empty() && !rec.text.empty()) {
      const auto text = lowercase(rec.text);
      const bool blocked = std::any_of(cfg.keyword_blocklist.begin(), cfg.keyword_blocklist.end(),
                                       [&](const std::string& w) { return !w.empty() && text.find(w) != std::string::npos; });
      if (blocked) continue;
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<UserTrack> group_by_user(std::vector<PointRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const PointRecord& a, const PointRecord& b) {
    return std::tie(a.user_id, a.timestamp) < std::tie(b.user_id, b.timestamp);
  });
  std::vector<UserTrack> tracks;
  for (auto& rec : records) {
    if (tracks.empty() || tracks.back().user_id != rec.user_id) tracks.push_back({rec.user_id, {}});
    tracks.back().points.push_back(std::move(rec));
  }
  return tracks;
}

SpeedDecision speed_filter(const UserTrack& track, const FilterConfig& cfg) {
  const auto& pts = track.points;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double dist = haversine_m(pts[i - 1].position, pts[i].position);
    const auto dt = pts[i].timestamp - pts[i - 1].timestamp;
    if (dt <= 0) {
      if (dist > 0.0) return {false, i, std::numeric_limits<double>::infinity()};
      continue;
    }
    const double speed = dist / static_cast<double>(dt);
    if (speed > cfg.max_speed_mps) return {false, i, speed};
  }
  return {};
}

bool residency_filter(const UserTrack& track, const FilterConfig& cfg) {
  if (track.points.empty()) return false;
  if (cfg.residency_mode == ResidencyMode::active_days) {
    std::set<std::chrono::sys_days> days;
    for (const auto& p : track.points) days.insert(day_of(p.timestamp));
    return static_cast<double>(days.size()) > cfg.min_residency_days;
  }
  const auto span = track.points.back().timestamp - track.points.front().timestamp;
  return static_cast<double>(span) > cfg.min_residency_days * static_cast<double>(kSecondsPerDay);
}

std::string pseudonymize(std::string_view user_id) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : user_id) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mobmotif
