#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobmotif/geo.hpp"

namespace mobmotif {

/// Twelve-code land-use activity scheme.
enum class Activity : std::uint8_t {
  residential = 1,
  hotel = 2,
  mixed_use = 3,
  k12_school = 4,
  university = 5,
  office = 6,
  services = 7,
  civic = 8,
  shopping = 9,
  recreation = 10,
  transportation = 11,
  others = 12,
};

inline constexpr int kActivityCount = 12;

inline int code(Activity a) { return static_cast<int>(a); }
std::optional<Activity> activity_from_code(int code);
/// Display name, e.g. "Office/Workplace".
std::string_view activity_name(Activity a);

/// Maps land-use category names (case- and whitespace-insensitive) to codes.
/// Unknown categories fall back to Activity::others.
class ActivityScheme {
 public:
  /// The twelve display names plus common aliases ("urban mix" -> 3, ...).
  static ActivityScheme defaults();

  /// Two columns per line, `category<TAB or ,>code`. Lines starting with `#`
  /// are comments. Every code 1..11 must be reachable; 12 always is.
  static ActivityScheme read(std::istream& in);
  static ActivityScheme read(const std::filesystem::path& path);

  void add(std::string_view category, Activity activity);
  Activity lookup(std::string_view category) const;

 private:
  std::map<std::string, Activity, std::less<>> categories_;
};

/// Sequential, 1-based, assigned in input order at load.
using ParcelId = std::uint32_t;

struct Parcel {
  ParcelId id = 0;
  std::vector<Polygon> polygons;
  std::string category;
  Activity activity = Activity::others;
  BBox bbox;
};

struct ParcelHit {
  ParcelId id = 0;
  Activity activity = Activity::others;
  double distance_m = 0.0;

  friend bool operator==(const ParcelHit&, const ParcelHit&) = default;
};

inline constexpr double kDefaultSearchRadiusM = 250.0;

/// Immutable bulk-loaded R-tree over parcel bounding boxes. Safe for
/// concurrent queries.
class SpatialIndex {
 public:
  explicit SpatialIndex(std::vector<Parcel> parcels);
  ~SpatialIndex();
  SpatialIndex(SpatialIndex&&) noexcept;
  SpatialIndex& operator=(SpatialIndex&&) noexcept;

  std::span<const Parcel> parcels() const { return parcels_; }
  const Parcel& parcel(ParcelId id) const { return parcels_.at(id - 1); }
  std::size_t size() const { return parcels_.size(); }

  /// Containing parcel at distance 0, else the parcel with the nearest
  /// boundary point within radius_m. Ties go to the smaller id.
  std::optional<ParcelHit> nearest(LatLon p, double radius_m = kDefaultSearchRadiusM) const;

  /// Same contract as nearest(), by scanning every parcel.
  std::optional<ParcelHit> nearest_linear(LatLon p, double radius_m = kDefaultSearchRadiusM) const;

 private:
  struct Tree;
  std::vector<Parcel> parcels_;
  std::unique_ptr<Tree> tree_;
};

struct ParcelLoadReport {
  std::size_t features = 0;
  std::size_t loaded = 0;
  std::size_t invalid = 0;
  std::map<std::string, std::size_t> invalid_reasons;
  std::array<std::size_t, kActivityCount> per_activity{};
};

struct ParcelLoadOptions {
  std::string category_attribute = "category";
};

struct LoadedParcels {
  SpatialIndex index;
  ParcelLoadReport report;
};

/// Invalid geometries are skipped and counted. Throws Error when no valid
/// parcel remains.
LoadedParcels load_parcels(std::istream& in, const ActivityScheme& scheme,
                           const ParcelLoadOptions& options = {});
LoadedParcels load_parcels(const std::filesystem::path& path, const ActivityScheme& scheme,
                           const ParcelLoadOptions& options = {});

/// Throws std::invalid_argument when radius_m is not positive.
std::optional<ParcelHit> nearest_parcel(LatLon p, const SpatialIndex& index,
                                        double radius_m = kDefaultSearchRadiusM);

}  // namespace mobmotif
