#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mobmotif/geo.hpp"
#include "mobmotif/motif.hpp"

namespace mobmotif {

/// Second moments of centered coordinates, divided by n.
struct GyrationTensor {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

GyrationTensor gyration_tensor(std::span<const Vec2> centered);

struct SymmetricEigen2 {
  double major = 0.0;
  double minor = 0.0;
  /// Unit eigenvector of `major`; sign unspecified.
  Vec2 major_axis{1.0, 0.0};
};

/// Closed-form eigen decomposition of [[a, b], [b, c]].
SymmetricEigen2 symmetric_eigen(double a, double b, double c);

enum class AlignFailure { too_few_points, all_identical, collinear };

const char* to_string(AlignFailure f);

struct AlignedTrajectory {
  /// (x / sigma_x, y / sigma_y) in the intrinsic frame; the principal axis
  /// runs along x and the farthest point lies at negative x (west).
  std::vector<Vec2> normalized;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  /// Principal axis in the input planar frame, oriented toward the west side.
  Vec2 principal_axis;
  SymmetricEigen2 eigen;
};

struct AlignResult {
  std::optional<AlignedTrajectory> aligned;
  std::optional<AlignFailure> failure;
};

/// Planar input in meters. `home`, when given, breaks orientation ties by
/// projecting negative. Sigmas are sample standard deviations.
AlignResult align_planar(std::span<const Vec2> points, std::optional<Vec2> home = std::nullopt);

/// Projects lat/lon to local meters about the center of mass, then aligns.
AlignResult align_trajectory(std::span<const LatLon> points, std::optional<LatLon> home = std::nullopt);

struct DensityGrid {
  double bound = 4.0;
  std::size_t bins = 80;

  double cell_width() const { return 2.0 * bound / static_cast<double>(bins); }
  double cell_center(std::size_t i) const { return -bound + (static_cast<double>(i) + 0.5) * cell_width(); }
};

enum class Pooling { per_point, per_user };

/// Pooled 2-D histogram over [-bound, bound)^2 with lower-inclusive cells.
struct ReferenceFrameDensity {
  DensityGrid grid;
  /// Row-major by y then x: mass[iy * bins + ix].
  std::vector<double> mass;
  double out_of_range_mass = 0.0;
  std::size_t in_range_points = 0;
  std::size_t out_of_range_points = 0;

  double at(std::size_t ix, std::size_t iy) const { return mass[iy * grid.bins + ix]; }
};

/// Masses are normalized by total weight, so in-range plus out-of-range mass
/// is one. An empty input yields an all-zero grid.
ReferenceFrameDensity density_histogram(std::span<const std::vector<Vec2>> streams, const DensityGrid& grid = {},
                                        Pooling pooling = Pooling::per_point);

/// RMS great-circle distance in km of the visited locations from home.
double gyradius_from_home_km(std::span<const LatLon> visited, LatLon home);

/// Uses the distinct nodes of the network and its home anchor.
double gyradius_from_home_km(const DailyNetwork& net);

struct DistanceStats {
  MotifKind kind = MotifKind::lbm;
  /// Node-size group ("2".."6", "7+"), a two-node activity class ("H-W"),
  /// or "all".
  std::string group;
  std::size_t days = 0;
  std::size_t trips = 0;
  /// Mean trip length.
  double d_hat_km = 0.0;
  /// Mean total daily distance.
  double D_hat_km = 0.0;
  double gyradius_home_km = 0.0;
};

/// Trips are consecutive visits of the location walk, measured between the
/// day's per-location anchors. Activity groups reuse those physical trips.
/// Groups without days are omitted.
std::vector<DistanceStats> distance_stats(std::span<const MinedDay> days, std::size_t max_nodes = 6);

/// Throws std::domain_error on length mismatch, fewer than two samples, or
/// zero variance.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

struct Correlation {
  std::size_t n = 0;
  double r = 0.0;
  /// Two-sided, Student t with n - 2 degrees of freedom. NaN when n == 2.
  double p_value = 0.0;
};

Correlation correlate(std::span<const double> xs, std::span<const double> ys);

}  // namespace mobmotif
