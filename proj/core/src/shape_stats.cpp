#include "mobmotif/shape_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace mobmotif {

GyrationTensor gyration_tensor(std::span<const Vec2> centered) {
  GyrationTensor t;
  for (const auto& p : centered) {
    t.xx += p.x * p.x;
    t.xy += p.x * p.y;
    t.yy += p.y * p.y;
  }
  const auto n = static_cast<double>(centered.size());
  t.xx /= n;
  t.xy /= n;
  t.yy /= n;
  return t;
}

SymmetricEigen2 symmetric_eigen(double a, double b, double c) {
  const double half_trace = 0.5 * (a + c);
  const double disc = std::hypot(0.5 * (a - c), b);
  SymmetricEigen2 e;
  e.major = half_trace + disc;
  e.minor = half_trace - disc;
  if (b == 0.0) {
    e.major_axis = a >= c ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
    return e;
  }
  const Vec2 v = a >= c ? Vec2{e.major - c, b} : Vec2{b, e.major - a};
  e.major_axis = (1.0 / norm(v)) * v;
  return e;
}

const char* to_string(AlignFailure f) {
  switch (f) {
    case AlignFailure::too_few_points: return "too_few_points";
    case AlignFailure::all_identical: return "all_identical";
    case AlignFailure::collinear: return "collinear";
  }
  return "unknown";
}

AlignResult align_planar(std::span<const Vec2> points, std::optional<Vec2> home) {
  if (points.size() < 3) return {std::nullopt, AlignFailure::too_few_points};

  Vec2 center;
  for (const auto& p : points) center = center + p;
  center = (1.0 / static_cast<double>(points.size())) * center;
  std::vector<Vec2> centered;
  centered.reserve(points.size());
  for (const auto& p : points) centered.push_back(p - center);

  const auto tensor = gyration_tensor(centered);
  const auto eigen = symmetric_eigen(tensor.xx, tensor.xy, tensor.yy);
  if (!(eigen.major > 0.0)) return {std::nullopt, AlignFailure::all_identical};

  Vec2 axis = eigen.major_axis;
  double max_pos = 0.0;
  double max_neg = 0.0;
  for (const auto& p : centered) {
    const double s = dot(p, axis);
    max_pos = std::max(max_pos, s);
    max_neg = std::max(max_neg, -s);
  }
  const double extent = std::max(max_pos, max_neg);
  const bool tie = std::abs(max_pos - max_neg) <= 1e-12 * extent;
  if (tie) {
    if (home && dot(*home - center, axis) > 0.0) axis = -1.0 * axis;
  } else if (max_pos > max_neg) {
    axis = -1.0 * axis;
  }
  const Vec2 across{-axis.y, axis.x};

  AlignedTrajectory out;
  out.principal_axis = axis;
  out.eigen = eigen;
  out.normalized.reserve(centered.size());
  double sxx = 0.0;
  double syy = 0.0;
  for (const auto& p : centered) {
    const Vec2 r{dot(p, axis), dot(p, across)};
    sxx += r.x * r.x;
    syy += r.y * r.y;
    out.normalized.push_back(r);
  }
  const auto dof = static_cast<double>(centered.size() - 1);
  out.sigma_x = std::sqrt(sxx / dof);
  out.sigma_y = std::sqrt(syy / dof);
  if (out.sigma_y <= 1e-9 * out.sigma_x) return {std::nullopt, AlignFailure::collinear};
  for (auto& r : out.normalized) r = {r.x / out.sigma_x, r.y / out.sigma_y};
  return {std::move(out), std::nullopt};
}

AlignResult align_trajectory(std::span<const LatLon> points, std::optional<LatLon> home) {
  if (points.size() < 3) return {std::nullopt, AlignFailure::too_few_points};
  const LocalFrame frame(centroid(points));
  std::vector<Vec2> local;
  local.reserve(points.size());
  for (const auto& p : points) local.push_back(frame.to_local(p));
  std::optional<Vec2> home_local;
  if (home) home_local = frame.to_local(*home);
  return align_planar(local, home_local);
}

ReferenceFrameDensity density_histogram(std::span<const std::vector<Vec2>> streams, const DensityGrid& grid,
                                        Pooling pooling) {
  if (grid.bins == 0 || !(grid.bound > 0.0)) throw std::invalid_argument("density grid needs bins > 0 and bound > 0");
  ReferenceFrameDensity density;
  density.grid = grid;
  density.mass.assign(grid.bins * grid.bins, 0.0);

  const double width = grid.cell_width();
  auto cell = [&](double v) {
    const auto i = static_cast<std::size_t>(std::floor((v + grid.bound) / width));
    return std::min(i, grid.bins - 1);
  };

  double total = 0.0;
  double out = 0.0;
  for (const auto& stream : streams) {
    if (stream.empty()) continue;
    const double w = pooling == Pooling::per_point ? 1.0 : 1.0 / static_cast<double>(stream.size());
    for (const auto& p : stream) {
      total += w;
      if (p.x >= -grid.bound && p.x < grid.bound && p.y >= -grid.bound && p.y < grid.bound) {
        density.mass[cell(p.y) * grid.bins + cell(p.x)] += w;
        ++density.in_range_points;
      } else {
        out += w;
        ++density.out_of_range_points;
      }
    }
  }
  if (total > 0.0) {
    for (auto& m : density.mass) m /= total;
    density.out_of_range_mass = out / total;
  }
  return density;
}

double gyradius_from_home_km(std::span<const LatLon> visited, LatLon home) {
  if (visited.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& p : visited) {
    const double d = haversine_m(p, home) / 1000.0;
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(visited.size()));
}

double gyradius_from_home_km(const DailyNetwork& net) {
  std::vector<LatLon> anchors;
  anchors.reserve(net.nodes.size());
  for (const auto& n : net.nodes) anchors.push_back(n.anchor);
  return gyradius_from_home_km(anchors, net.nodes.at(net.home_index).anchor);
}

std::vector<DistanceStats> distance_stats(std::span<const MinedDay> days, std::size_t max_nodes) {
  struct Accum {
    std::size_t days = 0;
    std::size_t trips = 0;
    double trip_km = 0.0;
    double daily_km = 0.0;
    double gyradius_km = 0.0;
  };
  std::map<std::string, Accum> lbm;
  std::map<std::string, Accum> abm_size;
  std::map<std::string, Accum> abm_class;
  Accum all;

  for (const auto& day : days) {
    const auto& net = day.lbm;
    std::size_t trips = 0;
    double total_km = 0.0;
    for (std::size_t i = 1; i < net.walk.size(); ++i) {
      total_km += haversine_m(net.nodes[net.walk[i - 1]].anchor, net.nodes[net.walk[i]].anchor) / 1000.0;
      ++trips;
    }
    const double gyr = gyradius_from_home_km(net);
    auto add = [&](Accum& a) {
      ++a.days;
      a.trips += trips;
      a.trip_km += total_km;
      a.daily_km += total_km;
      a.gyradius_km += gyr;
    };
    add(all);
    if (net.node_count() >= 2) add(lbm[size_group_name(net.node_count(), max_nodes)]);
    const auto abm_nodes = day.abm.node_count();
    if (abm_nodes >= 2) add(abm_size[size_group_name(abm_nodes, max_nodes)]);
    if (abm_nodes == 2) {
      const auto& other = day.abm.nodes[day.abm.home_index == 0 ? 1 : 0];
      add(abm_class["H-" + std::string(to_string(other.label))]);
    }
  }

  std::vector<DistanceStats> out;
  auto emit = [&](MotifKind kind, const std::string& group, const Accum& a) {
    if (a.days == 0) return;
    DistanceStats s;
    s.kind = kind;
    s.group = group;
    s.days = a.days;
    s.trips = a.trips;
    s.d_hat_km = a.trips ? a.trip_km / static_cast<double>(a.trips) : 0.0;
    s.D_hat_km = a.daily_km / static_cast<double>(a.days);
    s.gyradius_home_km = a.gyradius_km / static_cast<double>(a.days);
    out.push_back(std::move(s));
  };
  auto emit_sizes = [&](MotifKind kind, const std::map<std::string, Accum>& groups) {
    for (std::size_t n = 2; n <= max_nodes + 1; ++n) {
      const auto name = size_group_name(n, max_nodes);
      if (const auto it = groups.find(name); it != groups.end()) emit(kind, name, it->second);
    }
  };
  emit(MotifKind::lbm, "all", all);
  emit_sizes(MotifKind::lbm, lbm);
  emit_sizes(MotifKind::abm, abm_size);
  for (const auto& [name, acc] : abm_class) emit(MotifKind::abm, name, acc);
  return out;
}

double pearson_r(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::domain_error("pearson_r: length mismatch");
  if (xs.size() < 2) throw std::domain_error("pearson_r: need at least two samples");
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("pearson_r: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

Correlation correlate(std::span<const double> xs, std::span<const double> ys) {
  Correlation c;
  c.n = xs.size();
  c.r = pearson_r(xs, ys);
  if (c.n <= 2) {
    c.p_value = std::numeric_limits<double>::quiet_NaN();
  } else if (std::abs(c.r) == 1.0) {
    c.p_value = 0.0;
  } else {
    const double dof = static_cast<double>(c.n - 2);
    const double t = c.r * std::sqrt(dof / (1.0 - c.r * c.r));
    const boost::math::students_t_distribution<double> dist(dof);
    c.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  }
  return c;
}

}  // namespace mobmotif
