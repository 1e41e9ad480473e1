#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>

#include "mobmotif/motif.hpp"
#include "mobmotif/parcel_index.hpp"
#include "mobmotif/shape_stats.hpp"

namespace mobmotif {

/// Writes to a sibling temporary file and renames it into place, so readers
/// never observe a truncated file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string format_fixed(double value, int decimals);

/// kind,rank,signature,node_count,count,percentage: the motifs of each census.
std::string census_csv(std::span<const MotifCensus> censuses);

/// kind,group,count,percentage.
std::string size_groups_csv(std::span<const MotifCensus> censuses);

/// One block per motif: a `# kind rank signature labels` line followed by
/// `from to` edge lines.
std::string motif_edges_text(std::span<const MotifCensus> censuses);

/// kind,group,days,trips,d_hat_km,D_hat_km,gyradius_home_km.
std::string distance_stats_csv(std::span<const DistanceStats> stats);

/// bin_x_center,bin_y_center,mass.
std::string density_csv(const ReferenceFrameDensity& density);

/// code,name,parcels,percentage.
std::string parcel_report_csv(const ParcelLoadReport& report);

}  // namespace mobmotif
