#include "mobmotif/geojson.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mobmotif/error.hpp"

namespace mobmotif {

namespace {

using nlohmann::json;

Ring parse_ring(const json& coords) {
  Ring ring;
  ring.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number()) {
      throw Error("GeoJSON position must be [lon, lat]");
    }
    ring.push_back({pos[1].get<double>(), pos[0].get<double>()});
  }
  return ring;
}

Polygon parse_polygon(const json& coords) {
  if (!coords.is_array() || coords.empty()) throw Error("GeoJSON polygon without rings");
  Polygon poly;
  poly.outer = parse_ring(coords[0]);
  for (std::size_t i = 1; i < coords.size(); ++i) poly.holes.push_back(parse_ring(coords[i]));
  return poly;
}

PolygonFeature parse_geometry(const json& geometry) {
  PolygonFeature feature;
  if (!geometry.is_object() || !geometry.contains("type") || !geometry.contains("coordinates")) {
    feature.unsupported_geometry = true;
    return feature;
  }
  const auto type = geometry["type"].get<std::string>();
  const auto& coords = geometry["coordinates"];
  if (type == "Polygon") {
    feature.polygons.push_back(parse_polygon(coords));
  } else if (type == "MultiPolygon") {
    for (const auto& part : coords) feature.polygons.push_back(parse_polygon(part));
  } else {
    feature.unsupported_geometry = true;
  }
  return feature;
}

PolygonFeature parse_feature(const json& f) {
  PolygonFeature feature =
      f.contains("geometry") ? parse_geometry(f["geometry"]) : PolygonFeature{{}, {}, true};
  if (f.contains("properties") && f["properties"].is_object()) {
    for (const auto& [key, value] : f["properties"].items()) {
      if (value.is_string()) {
        feature.properties[key] = value.get<std::string>();
      } else if (value.is_number() || value.is_boolean()) {
        feature.properties[key] = value.dump();
      }
    }
  }
  return feature;
}

void append_ring(std::string& out, const Ring& ring) {
  out += '[';
  char buf[64];
  for (std::size_t i = 0; i < ring.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s[%.7f,%.7f]", i ? "," : "", ring[i].lon, ring[i].lat);
    out += buf;
  }
  out += ']';
}

}  // namespace

std::vector<PolygonFeature> read_polygon_features(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid GeoJSON: ") + e.what());
  }

  std::vector<PolygonFeature> features;
  try {
    const auto type = doc.value("type", std::string{});
    if (type == "FeatureCollection") {
      for (const auto& f : doc.at("features")) features.push_back(parse_feature(f));
    } else if (type == "Feature") {
      features.push_back(parse_feature(doc));
    } else if (type == "Polygon" || type == "MultiPolygon") {
      features.push_back(parse_geometry(doc));
    } else {
      throw Error("unsupported GeoJSON document type '" + type + "'");
    }
  } catch (const json::exception& e) {
    throw Error(std::string("invalid GeoJSON: ") + e.what());
  }
  return features;
}

std::vector<PolygonFeature> read_polygon_features(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_polygon_features(in);
}

std::string write_polygon_features(const std::vector<PolygonFeature>& features) {
  std::string out = "{\"type\":\"FeatureCollection\",\"features\":[\n";
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    json props = json::object();
    for (const auto& [k, v] : f.properties) props[k] = v;
    out += "{\"type\":\"Feature\",\"properties\":" + props.dump() + ",\"geometry\":";
    if (f.polygons.size() == 1) {
      out += "{\"type\":\"Polygon\",\"coordinates\":[";
    } else {
      out += "{\"type\":\"MultiPolygon\",\"coordinates\":[";
    }
    for (std::size_t p = 0; p < f.polygons.size(); ++p) {
      const auto& poly = f.polygons[p];
      if (p) out += ',';
      if (f.polygons.size() != 1) out += '[';
      append_ring(out, poly.outer);
      for (const auto& hole : poly.holes) {
        out += ',';
        append_ring(out, hole);
      }
      if (f.polygons.size() != 1) out += ']';
    }
    out += "]}}";
    out += (i + 1 < features.size()) ? ",\n" : "\n";
  }
  out += "]}\n";
  return out;
}

}  // namespace mobmotif
