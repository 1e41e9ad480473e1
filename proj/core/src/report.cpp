#include "mobmotif/report.hpp"

#include <cstdio>
#include <fstream>

#include "mobmotif/error.hpp"

namespace mobmotif {

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw Error("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error("cannot move " + tmp.string() + " into place");
  }
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

namespace {

std::string join_labels(const std::vector<ActivityLabel>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += '-';
    out += to_string(labels[i]);
  }
  return out;
}

}  // namespace

std::string census_csv(std::span<const MotifCensus> censuses) {
  std::string out = "kind,rank,signature,node_count,count,percentage\n";
  for (const auto& c : censuses) {
    for (const auto& m : c.motifs) {
      out += to_string(c.kind);
      out += ',' + std::to_string(m.rank) + ',' + m.signature.code + ',' + std::to_string(m.signature.node_count) +
             ',' + std::to_string(m.count) + ',' + format_fixed(m.percentage, 4) + '\n';
    }
  }
  return out;
}

std::string size_groups_csv(std::span<const MotifCensus> censuses) {
  std::string out = "kind,group,count,percentage\n";
  for (const auto& c : censuses) {
    for (const auto& g : c.size_groups) {
      out += std::string(to_string(c.kind)) + ',' + g.name + ',' + std::to_string(g.count) + ',' +
             format_fixed(g.percentage, 4) + '\n';
    }
  }
  return out;
}

std::string motif_edges_text(std::span<const MotifCensus> censuses) {
  std::string out;
  for (const auto& c : censuses) {
    for (const auto& m : c.motifs) {
      out += "# " + std::string(to_string(c.kind)) + ' ' + std::to_string(m.rank) + ' ' + m.signature.code;
      if (!m.labels.empty()) out += ' ' + join_labels(m.labels);
      out += '\n';
      for (const auto& [from, to] : m.graph.edges()) out += std::to_string(from) + ' ' + std::to_string(to) + '\n';
      out += '\n';
    }
  }
  return out;
}

std::string distance_stats_csv(std::span<const DistanceStats> stats) {
  std::string out = "kind,group,days,trips,d_hat_km,D_hat_km,gyradius_home_km\n";
  for (const auto& s : stats) {
    out += std::string(to_string(s.kind)) + ',' + s.group + ',' + std::to_string(s.days) + ',' +
           std::to_string(s.trips) + ',' + format_fixed(s.d_hat_km, 4) + ',' + format_fixed(s.D_hat_km, 4) + ',' +
           format_fixed(s.gyradius_home_km, 4) + '\n';
  }
  return out;
}

std::string density_csv(const ReferenceFrameDensity& density) {
  std::string out = "bin_x_center,bin_y_center,mass\n";
  const auto bins = density.grid.bins;
  for (std::size_t iy = 0; iy < bins; ++iy) {
    for (std::size_t ix = 0; ix < bins; ++ix) {
      out += format_fixed(density.grid.cell_center(ix), 4) + ',' + format_fixed(density.grid.cell_center(iy), 4) +
             ',' + format_fixed(density.at(ix, iy), 10) + '\n';
    }
  }
  return out;
}

std::string parcel_report_csv(const ParcelLoadReport& report) {
  std::string out = "code,name,parcels,percentage\n";
  for (int c = 1; c <= kActivityCount; ++c) {
    const auto count = report.per_activity[c - 1];
    const double pct = report.loaded ? 100.0 * static_cast<double>(count) / static_cast<double>(report.loaded) : 0.0;
    out += std::to_string(c) + ',' + std::string(activity_name(static_cast<Activity>(c))) + ',' +
           std::to_string(count) + ',' + format_fixed(pct, 2) + '\n';
  }
  return out;
}

}  // namespace mobmotif
