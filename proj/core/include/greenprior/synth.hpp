#pragma once

// Seeded synthetic city used by the tests and the demo: a lot grid of
// flat, mono-pitch and gabled buildings with walls, ground, vegetation
// patches, parks, roads, sample files, seasonal temperature rasters with
// gaps, and the ground truth the roof extraction must recover.
//
// Geometry is chosen so the truth is exactly recoverable on a 1 m grid:
// footprints are integer-aligned rectangles, roof points sit at 1 m cell
// centers, gabled ridges run through a row of cell centers and wall points
// sit strictly inside roof-edge cells below the roof. A ridge on a cell
// boundary would give the two ridge-side cell rows equal maxima, i.e. a
// spurious flat strip.

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "greenprior/geocore.hpp"
#include "greenprior/records.hpp"

namespace greenprior {

struct SyntheticCitySpec {
    std::uint64_t seed = 42;
    std::size_t buildings = 60;
    double lot_pitch_m = 40.0;
    int min_side_m = 8;
    int max_side_m = 24;
    double old_share = 0.2;        // buildings older than 60 years
    double ground_spacing_m = 2.0;
    double vegetation_spacing_m = 1.5;
    std::size_t precipitation_stations = 24;
    std::size_t income_points = 60;
    double population_spacing_m = 50.0;
    double temperature_cell_m = 30.0;
};

enum class RoofType { flat, shed, gabled, small };

std::string_view to_string(RoofType t) noexcept;

struct GroundTruthRow {
    std::string id;
    RoofType roof_type = RoofType::flat;
    double pitch_deg = 0.0;
    double footprint_area_m2 = 0.0;
    double greenable_area_m2 = 0.0;
    int age_years = 0;
    BuildingCategory category = BuildingCategory::private_owned;
    bool potential = false;
};

struct SyntheticCity {
    PointCloud points;
    std::vector<BuildingAttributes> buildings;
    std::vector<Polyline> roads;
    std::vector<StationSample> precipitation; // mm
    std::vector<StationSample> income;        // HK$ per month
    std::vector<StationSample> population;    // persons per point
    std::array<RasterGrid, 4> temperature;    // spring, summer, autumn, winter; deg C
    std::vector<GroundTruthRow> truth;        // same order as buildings
};

/// Identical specs give identical cities.
SyntheticCity generate_city(const SyntheticCitySpec& spec);

/// Name of the config file written next to the dataset.
inline constexpr std::string_view synthetic_config_name = "greenprior.cfg";

/// Writes every input file, ground_truth.csv and a config referencing them.
void write_city(const SyntheticCity& city, const std::filesystem::path& dir);

std::vector<GroundTruthRow> read_ground_truth(const std::filesystem::path& path);

} // namespace greenprior
