#pragma once

// Plain records exchanged between the pipeline stages and the file layer.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "greenprior/geocore.hpp"

namespace greenprior {

/// One scattered observation: a weather station, an income point or a
/// population point. Units depend on the sample set.
struct StationSample {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;

    friend bool operator==(const StationSample&, const StationSample&) = default;
};

enum class BuildingCategory : std::uint8_t { private_owned, public_owned, miscellaneous };

/// Accepts the file labels "private", "public" and "misc".
std::optional<BuildingCategory> building_category_from_string(std::string_view s) noexcept;
std::string_view to_string(BuildingCategory c) noexcept;

struct BuildingAttributes {
    std::string id;
    int age_years = 0;
    BuildingCategory category = BuildingCategory::private_owned;
    Polygon footprint;
};

/// The six nondimensionalized greening indicators of one building, each in
/// [0, 1]. Larger values mean higher greening demand.
struct IndicatorVector {
    double greenspace = 0.0;    // I_g
    double road = 0.0;          // I_d
    double category = 0.0;      // I_c
    double income = 0.0;        // I_i
    double temperature = 0.0;   // I_t
    double precipitation = 0.0; // I_p

    static constexpr std::size_t size = 6;
    static constexpr std::array<std::string_view, size> names = {"I_g", "I_d", "I_c",
                                                                  "I_i", "I_t", "I_p"};

    std::array<double, size> as_array() const noexcept {
        return {greenspace, road, category, income, temperature, precipitation};
    }
    static IndicatorVector from_array(const std::array<double, size>& a) noexcept {
        return {a[0], a[1], a[2], a[3], a[4], a[5]};
    }
    friend bool operator==(const IndicatorVector&, const IndicatorVector&) = default;
};

/// One row of the per-building report. Indicator and priority fields are
/// only present for buildings with greening potential.
struct BuildingReportRow {
    std::string id;
    bool potential = false;
    double roof_area_m2 = 0.0;
    double greenable_area_m2 = 0.0;
    double slope_deg = 0.0;
    double height_m = 0.0;
    std::optional<IndicatorVector> indicators;
    std::optional<double> priority;
    std::optional<std::int64_t> rank;

    friend bool operator==(const BuildingReportRow&, const BuildingReportRow&) = default;
};

} // namespace greenprior
