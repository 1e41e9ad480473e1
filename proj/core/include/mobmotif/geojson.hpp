#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mobmotif/geo.hpp"

namespace mobmotif {

/// One polygonal feature. Scalar properties are kept as text; numbers keep
/// their JSON spelling.
struct PolygonFeature {
  std::vector<Polygon> polygons;
  std::map<std::string, std::string> properties;
  /// Set when the geometry is missing or not (Multi)Polygon.
  bool unsupported_geometry = false;
};

/// Reads a FeatureCollection, a single Feature, or a bare Polygon /
/// MultiPolygon geometry. Throws Error on malformed JSON.
std::vector<PolygonFeature> read_polygon_features(std::istream& in);
std::vector<PolygonFeature> read_polygon_features(const std::filesystem::path& path);

/// Serializes rectangles-or-polygons back to GeoJSON text with fixed
/// coordinate precision, so identical inputs produce identical bytes.
std::string write_polygon_features(const std::vector<PolygonFeature>& features);

}  // namespace mobmotif
