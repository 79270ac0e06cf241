#pragma once

// Pipeline configuration: a flat "key = value" text file. Blank lines and
// lines starting with '#' are ignored. Relative paths resolve against the
// directory holding the file. Unknown keys are rejected.
//
// Keys (defaults in parentheses):
//   points, footprints, roads              input files (required)
//   precipitation, income, population      "x,y,value" sample files (required)
//   temp_spring, temp_summer,
//   temp_autumn, temp_winter               seasonal surface temperature .asc (required)
//   out                                    output directory (out)
//   dsm_cell (1), wall_threshold_m (1), normal_tol_deg (10), residual_tol_m (0.2)
//   slope_deg (15), area_m2 (10), age_yr (60), ground_search_m (10)
//   road_cap_m (500), gc_cell (5), gc_radius (500), surface_cell (30)
//   idw_power (2), idw_k (12), kriging_k (16), variogram (spherical)
//   season_spring (3,4,5), season_summer (6,7,8), season_autumn (9,10,11),
//   season_winter (12,1,2)
//   dT_sunny (0.15), dT_cloudy (0.1), dT_rainy (0), c_air (1004), d_air (1.29),
//   season_days (180), rainy_days (30), sunny_parts (1), cloudy_parts (1),
//   hours_per_day (24)
//   q_co2 (1.46), k_conv (0.785), tariff (1.29), carbon_price (65),
//   city_emissions_t (34700000)
//   scheme (equal)
//   override_greenable_area_m2, override_energy_kwh   replace the computed
//                                          aggregates in the benefit chain

#include <filesystem>
#include <optional>
#include <string>

#include "greenprior/benefits.hpp"
#include "greenprior/indicators.hpp"
#include "greenprior/interp.hpp"
#include "greenprior/priority.hpp"
#include "greenprior/roofs.hpp"

namespace greenprior {

struct InputPaths {
    std::filesystem::path points;
    std::filesystem::path footprints;
    std::filesystem::path roads;
    std::filesystem::path precipitation;
    std::filesystem::path income;
    std::filesystem::path population;
    std::filesystem::path temp_spring;
    std::filesystem::path temp_summer;
    std::filesystem::path temp_autumn;
    std::filesystem::path temp_winter;
};

struct PipelineConfig {
    InputPaths inputs;
    std::filesystem::path out_dir = "out";

    RoofParams roofs;
    double road_cap_m = 500.0;
    double gc_cell = 5.0;
    double gc_radius = 500.0;
    double surface_cell = 30.0;
    double idw_power = 2.0;
    std::size_t idw_k = 12;
    std::size_t kriging_k = 16;
    VariogramKind variogram = VariogramKind::spherical;
    SeasonCalendar seasons = SeasonCalendar::standard();

    CoolingParams cooling;
    EconParams econ;
    double city_emissions_t = 34.7e6;
    WeightingScheme scheme = WeightingScheme::equal;

    std::optional<double> override_greenable_area_m2;
    std::optional<double> override_energy_kwh;

    /// Throws ValidationError for out-of-range parameters.
    void validate_parameters() const;
    /// Throws IoError naming the first input file that does not exist.
    void validate_inputs() const;
};

/// Parses config text; relative paths resolve against `base_dir`.
/// Throws ParseError for malformed lines, ValidationError for unknown keys,
/// duplicate keys, bad values or missing required inputs.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);

/// Reads, parses and validates parameters (inputs are checked separately
/// so command-line overrides can be applied first).
PipelineConfig load_config(const std::filesystem::path& path);

} // namespace greenprior
