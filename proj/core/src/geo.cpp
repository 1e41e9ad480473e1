#include "mobmotif/geo.hpp"

#include <algorithm>
#include <limits>

namespace mobmotif {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

Vec2 planar(LatLon p) { return {p.lon, p.lat}; }

int orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(Vec2 a, Vec2 b, Vec2 c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= c.y &&
         c.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) {
  const int o1 = orientation(p1, p2, q1);
  const int o2 = orientation(p1, p2, q2);
  const int o3 = orientation(q1, q2, p1);
  const int o4 = orientation(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

// Closest point of segment [a, b] to the origin.
Vec2 closest_to_origin(Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return a;
  const double t = std::clamp(-dot(a, d) / len2, 0.0, 1.0);
  return a + t * d;
}

}  // namespace

bool valid_coordinate(LatLon p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

double haversine_m(LatLon a, LatLon b) {
  const double phi1 = a.lat * kDegToRad;
  const double phi2 = b.lat * kDegToRad;
  const double dphi = (b.lat - a.lat) * kDegToRad;
  const double dlambda = (b.lon - a.lon) * kDegToRad;
  const double s1 = std::sin(dphi / 2);
  const double s2 = std::sin(dlambda / 2);
  const double h = std::min(1.0, s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

LatLon centroid(std::span<const LatLon> points) {
  double lat = 0.0;
  double lon = 0.0;
  for (const auto& p : points) {
    lat += p.lat;
    lon += p.lon;
  }
  const auto n = static_cast<double>(points.size());
  return {lat / n, lon / n};
}

LocalFrame::LocalFrame(LatLon origin)
    : origin_(origin), meters_per_deg_lon_(kMetersPerDegree * std::cos(origin.lat * kDegToRad)) {}

Vec2 LocalFrame::to_local(LatLon p) const {
  return {(p.lon - origin_.lon) * meters_per_deg_lon_, (p.lat - origin_.lat) * kMetersPerDegree};
}

LatLon LocalFrame::to_geo(Vec2 v) const {
  return {origin_.lat + v.y / kMetersPerDegree, origin_.lon + v.x / meters_per_deg_lon_};
}

BBox bounding_box(std::span<const Polygon> polygons) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  BBox box{inf, inf, -inf, -inf};
  for (const auto& poly : polygons) {
    for (const auto& p : poly.outer) {
      box.min_lat = std::min(box.min_lat, p.lat);
      box.max_lat = std::max(box.max_lat, p.lat);
      box.min_lon = std::min(box.min_lon, p.lon);
      box.max_lon = std::max(box.max_lon, p.lon);
    }
  }
  return box;
}

const char* to_string(RingDefect d) {
  switch (d) {
    case RingDefect::none: return "none";
    case RingDefect::too_few_points: return "too_few_points";
    case RingDefect::not_closed: return "not_closed";
    case RingDefect::bad_coordinate: return "bad_coordinate";
    case RingDefect::zero_area: return "zero_area";
    case RingDefect::self_intersecting: return "self_intersecting";
  }
  return "unknown";
}

RingDefect validate_ring(const Ring& ring) {
  if (ring.size() < 4) return RingDefect::too_few_points;
  if (ring.front() != ring.back()) return RingDefect::not_closed;
  for (const auto& p : ring) {
    if (!valid_coordinate(p)) return RingDefect::bad_coordinate;
  }

  double area2 = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    area2 += cross(planar(ring[i]), planar(ring[i + 1]));
  }
  if (area2 == 0.0) return RingDefect::zero_area;

  // Every pair of non-adjacent edges must be disjoint.
  const std::size_t edges = ring.size() - 1;
  for (std::size_t i = 0; i < edges; ++i) {
    for (std::size_t j = i + 1; j < edges; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == edges - 1);
      const Vec2 a1 = planar(ring[i]);
      const Vec2 a2 = planar(ring[i + 1]);
      const Vec2 b1 = planar(ring[j]);
      const Vec2 b2 = planar(ring[j + 1]);
      if (adjacent) {
        // Adjacent edges may only share their common vertex: reject folds back
        // along the same line.
        const Vec2 shared = (j == i + 1) ? a2 : a1;
        const Vec2 other_a = (j == i + 1) ? a1 : a2;
        const Vec2 other_b = (j == i + 1) ? b2 : b1;
        if (orientation(shared, other_a, other_b) == 0 && dot(other_a - shared, other_b - shared) > 0) {
          return RingDefect::self_intersecting;
        }
        continue;
      }
      if (segments_intersect(a1, a2, b1, b2)) return RingDefect::self_intersecting;
    }
  }
  return RingDefect::none;
}

bool ring_contains(const Ring& ring, LatLon p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LatLon& a = ring[i];
    const LatLon& b = ring[j];
    if ((a.lat > p.lat) != (b.lat > p.lat)) {
      const double lon_at = (b.lon - a.lon) * (p.lat - a.lat) / (b.lat - a.lat) + a.lon;
      if (p.lon < lon_at) inside = !inside;
    }
  }
  return inside;
}

bool polygon_contains(const Polygon& polygon, LatLon p) {
  if (!ring_contains(polygon.outer, p)) return false;
  return std::none_of(polygon.holes.begin(), polygon.holes.end(),
                      [&](const Ring& hole) { return ring_contains(hole, p); });
}

bool any_contains(std::span<const Polygon> polygons, LatLon p) {
  return std::any_of(polygons.begin(), polygons.end(),
                     [&](const Polygon& poly) { return polygon_contains(poly, p); });
}

double distance_to_polygons_m(std::span<const Polygon> polygons, LatLon p) {
  if (any_contains(polygons, p)) return 0.0;

  const LocalFrame frame(p);
  double best = std::numeric_limits<double>::infinity();
  Vec2 best_point;
  auto scan = [&](const Ring& ring) {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      const Vec2 q = closest_to_origin(frame.to_local(ring[i]), frame.to_local(ring[i + 1]));
      const double d = norm(q);
      if (d < best) {
        best = d;
        best_point = q;
      }
    }
  };
  for (const auto& poly : polygons) {
    scan(poly.outer);
    for (const auto& hole : poly.holes) scan(hole);
  }
  if (!std::isfinite(best)) return best;
  return haversine_m(p, frame.to_geo(best_point));
}

}  // namespace mobmotif
