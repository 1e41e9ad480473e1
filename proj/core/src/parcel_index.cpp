#include "mobmotif/parcel_index.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <stdexcept>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "mobmotif/error.hpp"
#include "mobmotif/geojson.hpp"

namespace mobmotif {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BoostPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using BoostBox = bg::model::box<BoostPoint>;
using TreeValue = std::pair<BoostBox, std::size_t>;

constexpr std::array<std::string_view, kActivityCount> kActivityNames = {
    "Residential",     "Hotel/Resort",     "Mixed-Use",       "K-12 Schools",
    "University/College", "Office/Workplace", "Services",     "Civic/Religious",
    "Shopping/Retail", "Recreation/Entertainment", "Transportation", "Others",
};

std::string normalize(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  std::string out;
  out.reserve(s.size());
  bool space = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(c));
  }
  return out;
}

BoostBox to_box(const BBox& b) { return {{b.min_lon, b.min_lat}, {b.max_lon, b.max_lat}}; }

// Lat/lon window guaranteed to hold every point within radius_m of p.
BBox search_window(LatLon p, double radius_m) {
  const double angle = radius_m / kEarthRadiusM;
  const double dlat = angle * 180.0 / std::numbers::pi * (1.0 + 1e-9);
  BBox box{p.lat - dlat, -180.0, p.lat + dlat, 180.0};
  const double max_abs_lat = std::abs(p.lat) + dlat;
  if (max_abs_lat < 90.0) {
    constexpr double deg = std::numbers::pi / 180.0;
    const double cos_product = std::cos(p.lat * deg) * std::cos(max_abs_lat * deg);
    const double s = std::sin(angle / 2) / std::sqrt(cos_product);
    if (s < 1.0) {
      const double dlon = 2.0 * std::asin(s) / deg * (1.0 + 1e-9);
      box.min_lon = p.lon - dlon;
      box.max_lon = p.lon + dlon;
    }
  }
  return box;
}

bool better(const ParcelHit& a, const std::optional<ParcelHit>& best) {
  return !best || a.distance_m < best->distance_m ||
         (a.distance_m == best->distance_m && a.id < best->id);
}

}  // namespace

std::optional<Activity> activity_from_code(int c) {
  if (c < 1 || c > kActivityCount) return std::nullopt;
  return static_cast<Activity>(c);
}

std::string_view activity_name(Activity a) { return kActivityNames[code(a) - 1]; }

ActivityScheme ActivityScheme::defaults() {
  ActivityScheme s;
  for (int c = 1; c <= kActivityCount; ++c) s.add(kActivityNames[c - 1], static_cast<Activity>(c));
  const std::pair<std::string_view, Activity> aliases[] = {
      {"hotel", Activity::hotel},
      {"resort", Activity::hotel},
      {"mixed use", Activity::mixed_use},
      {"urban mix", Activity::mixed_use},
      {"k-12 school", Activity::k12_school},
      {"school", Activity::k12_school},
      {"university", Activity::university},
      {"college", Activity::university},
      {"office", Activity::office},
      {"workplace", Activity::office},
      {"service", Activity::services},
      {"civic", Activity::civic},
      {"religious", Activity::civic},
      {"shopping", Activity::shopping},
      {"retail", Activity::shopping},
      {"recreation", Activity::recreation},
      {"entertainment", Activity::recreation},
      {"other", Activity::others},
  };
  for (const auto& [name, activity] : aliases) s.add(name, activity);
  return s;
}

ActivityScheme ActivityScheme::read(std::istream& in) {
  ActivityScheme s;
  std::array<bool, kActivityCount> seen{};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto sep = line.find_last_of("\t,");
    if (sep == std::string::npos) throw Error("scheme line " + std::to_string(lineno) + ": expected category and code");
    auto code_text = std::string_view(line).substr(sep + 1);
    while (!code_text.empty() && std::isspace(static_cast<unsigned char>(code_text.front()))) code_text.remove_prefix(1);
    while (!code_text.empty() && std::isspace(static_cast<unsigned char>(code_text.back()))) code_text.remove_suffix(1);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(code_text.data(), code_text.data() + code_text.size(), value);
    const auto activity = activity_from_code(value);
    if (ec != std::errc{} || ptr != code_text.data() + code_text.size() || !activity) {
      throw Error("scheme line " + std::to_string(lineno) + ": code must be an integer in 1..12");
    }
    s.add(std::string_view(line).substr(0, sep), *activity);
    seen[value - 1] = true;
  }
  for (int c = 1; c < kActivityCount; ++c) {
    if (!seen[c - 1]) throw Error("scheme does not map any category to code " + std::to_string(c));
  }
  return s;
}

ActivityScheme ActivityScheme::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scheme file " + path.string());
  return read(in);
}

void ActivityScheme::add(std::string_view category, Activity activity) {
  categories_[normalize(category)] = activity;
}

Activity ActivityScheme::lookup(std::string_view category) const {
  const auto it = categories_.find(normalize(category));
  return it == categories_.end() ? Activity::others : it->second;
}

struct SpatialIndex::Tree {
  bgi::rtree<TreeValue, bgi::rstar<16>> rtree;
};

SpatialIndex::SpatialIndex(std::vector<Parcel> parcels) : parcels_(std::move(parcels)) {
  std::vector<TreeValue> values;
  values.reserve(parcels_.size());
  for (std::size_t i = 0; i < parcels_.size(); ++i) {
    parcels_[i].id = static_cast<ParcelId>(i + 1);
    parcels_[i].bbox = bounding_box(parcels_[i].polygons);
    values.emplace_back(to_box(parcels_[i].bbox), i);
  }
  tree_ = std::make_unique<Tree>(Tree{{values.begin(), values.end()}});
}

SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex&&) noexcept = default;
SpatialIndex& SpatialIndex::operator=(SpatialIndex&&) noexcept = default;

std::optional<ParcelHit> SpatialIndex::nearest(LatLon p, double radius_m) const {
  if (!(radius_m > 0.0)) throw std::invalid_argument("search radius must be positive");
  std::optional<ParcelHit> best;
  const BoostBox window = to_box(search_window(p, radius_m));
  for (auto it = tree_->rtree.qbegin(bgi::intersects(window)); it != tree_->rtree.qend(); ++it) {
    const Parcel& parcel = parcels_[it->second];
    const double d = distance_to_polygons_m(parcel.polygons, p);
    if (d > radius_m) continue;
    const ParcelHit hit{parcel.id, parcel.activity, d};
    if (better(hit, best)) best = hit;
  }
  return best;
}

std::optional<ParcelHit> SpatialIndex::nearest_linear(LatLon p, double radius_m) const {
  if (!(radius_m > 0.0)) throw std::invalid_argument("search radius must be positive");
  std::optional<ParcelHit> best;
  for (const auto& parcel : parcels_) {
    const double d = distance_to_polygons_m(parcel.polygons, p);
    if (d > radius_m) continue;
    const ParcelHit hit{parcel.id, parcel.activity, d};
    if (better(hit, best)) best = hit;
  }
  return best;
}

std::optional<ParcelHit> nearest_parcel(LatLon p, const SpatialIndex& index, double radius_m) {
  return index.nearest(p, radius_m);
}

LoadedParcels load_parcels(std::istream& in, const ActivityScheme& scheme, const ParcelLoadOptions& options) {
  auto features = read_polygon_features(in);
  ParcelLoadReport report;
  report.features = features.size();

  std::vector<Parcel> parcels;
  parcels.reserve(features.size());
  for (auto& feature : features) {
    std::string reason;
    if (feature.unsupported_geometry || feature.polygons.empty()) {
      reason = "unsupported_geometry";
    } else {
      for (const auto& poly : feature.polygons) {
        auto defect = validate_ring(poly.outer);
        for (const auto& hole : poly.holes) {
          if (defect != RingDefect::none) break;
          defect = validate_ring(hole);
        }
        if (defect != RingDefect::none) {
          reason = to_string(defect);
          break;
        }
      }
    }
    const auto cat = feature.properties.find(options.category_attribute);
    if (reason.empty() && cat == feature.properties.end()) reason = "missing_category";
    if (!reason.empty()) {
      ++report.invalid;
      ++report.invalid_reasons[reason];
      continue;
    }

    Parcel parcel;
    parcel.polygons = std::move(feature.polygons);
    parcel.category = cat->second;
    parcel.activity = scheme.lookup(parcel.category);
    ++report.per_activity[code(parcel.activity) - 1];
    parcels.push_back(std::move(parcel));
  }
  report.loaded = parcels.size();
  if (parcels.empty()) throw Error("no valid parcels in input");
  return {SpatialIndex(std::move(parcels)), std::move(report)};
}

LoadedParcels load_parcels(const std::filesystem::path& path, const ActivityScheme& scheme,
                           const ParcelLoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open parcel file " + path.string());
  return load_parcels(in, scheme, options);
}

}  // namespace mobmotif
