#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace mobmotif {

/// Mean Earth radius used for every great-circle computation in the library.
inline constexpr double kEarthRadiusM = 6'371'000.0;

/// Length of one degree of arc on the mean sphere (about 111,195 m).
inline constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

struct LatLon {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const LatLon&, const LatLon&) = default;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

bool valid_coordinate(LatLon p);

/// Great-circle distance in meters on a sphere of radius kEarthRadiusM.
double haversine_m(LatLon a, LatLon b);

/// Arithmetic mean of the coordinates. Requires a non-empty input.
LatLon centroid(std::span<const LatLon> points);

/// Equirectangular projection about a fixed origin. x points east, y north,
/// both in meters. Adequate at city scale only.
class LocalFrame {
 public:
  explicit LocalFrame(LatLon origin);

  Vec2 to_local(LatLon p) const;
  LatLon to_geo(Vec2 v) const;
  LatLon origin() const { return origin_; }

 private:
  LatLon origin_;
  double meters_per_deg_lon_;
};

using Ring = std::vector<LatLon>;

/// Exterior ring plus holes. Rings are closed (first == last).
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct BBox {
  double min_lat = 0.0;
  double min_lon = 0.0;
  double max_lat = 0.0;
  double max_lon = 0.0;

  bool contains(LatLon p) const {
    return p.lat >= min_lat && p.lat <= max_lat && p.lon >= min_lon && p.lon <= max_lon;
  }
};

BBox bounding_box(std::span<const Polygon> polygons);

enum class RingDefect { none, too_few_points, not_closed, bad_coordinate, zero_area, self_intersecting };

const char* to_string(RingDefect d);

RingDefect validate_ring(const Ring& ring);

/// Even-odd test in the lon/lat plane.
bool ring_contains(const Ring& ring, LatLon p);

/// Inside the exterior and outside every hole.
bool polygon_contains(const Polygon& polygon, LatLon p);

bool any_contains(std::span<const Polygon> polygons, LatLon p);

/// Great-circle meters from p to the nearest point of the polygon set; 0 when
/// p is contained. The nearest boundary point is located in a local planar
/// frame centered on p.
double distance_to_polygons_m(std::span<const Polygon> polygons, LatLon p);

}  // namespace mobmotif
