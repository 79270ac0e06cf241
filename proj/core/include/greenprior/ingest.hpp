#pragma once

// Readers and writers for every file the pipeline consumes or produces.
// Readers reject malformed records instead of skipping them.
//
// Formats:
//   point cloud   CSV "x,y,z,class", class 0=ground 1=building 2=vegetation
//                 3=other, optional header line "x,y,z,class"
//   samples       CSV "x,y,value" with exactly one header line
//   footprints    GeoJSON FeatureCollection of Polygon features with
//                 properties id, age_years, category (private|public|misc)
//   roads         GeoJSON FeatureCollection of LineString features with
//                 property class (main|minor)
//   rasters       ESRI ASCII grid, top row first
//   reports       CSV + GeoJSON, numbers with 6 decimals

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "greenprior/geocore.hpp"
#include "greenprior/records.hpp"

namespace greenprior {

PointCloud read_point_cloud(const std::filesystem::path& path);
void write_point_cloud(const PointCloud& pc, const std::filesystem::path& path);

std::vector<BuildingAttributes> read_footprints(const std::filesystem::path& path);
void write_footprints(std::span<const BuildingAttributes> buildings,
                      const std::filesystem::path& path);

std::vector<Polyline> read_roads(const std::filesystem::path& path);
void write_roads(std::span<const Polyline> roads, const std::filesystem::path& path);

std::vector<StationSample> read_samples(const std::filesystem::path& path);
void write_samples(std::span<const StationSample> samples, const std::filesystem::path& path);

RasterGrid read_raster_asc(const std::filesystem::path& path);
/// Values are written in shortest round-trip form, so read(write(g)) == g.
void write_raster_asc(const RasterGrid& grid, const std::filesystem::path& path);

/// Column order of the building report CSV. Empty fields mark values that
/// do not apply (indicators, priority and rank of non-potential buildings).
inline constexpr std::string_view building_report_header =
    "id,potential,roof_area_m2,greenable_area_m2,slope_deg,height_m,"
    "I_g,I_d,I_c,I_i,I_t,I_p,priority,rank";

/// Writes the CSV and a GeoJSON carrying the same properties on each
/// building footprint. Every row id must have a footprint.
void write_building_report(std::span<const BuildingReportRow> rows,
                           std::span<const BuildingAttributes> footprints,
                           const std::filesystem::path& csv_path,
                           const std::filesystem::path& geojson_path);
void write_building_report_csv(std::span<const BuildingReportRow> rows,
                               const std::filesystem::path& csv_path);
std::vector<BuildingReportRow> read_building_report_csv(const std::filesystem::path& path);

/// Fixed-point formatting used by every report ("%.6f" by default).
std::string format_fixed(double v, int decimals = 6);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_roundtrip(double v);

/// Strict decimal parse of a whole field (surrounding blanks allowed).
std::optional<double> parse_double(std::string_view field) noexcept;

std::vector<std::string_view> split_csv_line(std::string_view line);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

} // namespace greenprior
