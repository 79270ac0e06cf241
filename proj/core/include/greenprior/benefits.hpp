#pragma once

// City-level benefit accounting for greened roofs: greenspace exposure,
// direct and indirect carbon offsets, cooling energy and monetary value.

#include <span>

#include "greenprior/geocore.hpp"
#include "greenprior/indicators.hpp"
#include "greenprior/stats.hpp"

namespace greenprior {

struct CoolingParams {
    double dT_sunny = 0.15;   // deg C per hour
    double dT_cloudy = 0.10;  // deg C per hour
    double dT_rainy = 0.0;    // deg C per hour
    double c_air = 1004.0;    // J / (kg deg C)
    double d_air = 1.29;      // kg / m^3
    double season_days = 180.0;
    double rainy_days = 30.0;
    double sunny_parts = 1.0; // sunny:cloudy split of the non-rainy days
    double cloudy_parts = 1.0;
    double hours_per_day = 24.0;

    /// Throws ValidationError on negative fields, rainy_days > season_days
    /// or an all-zero split.
    void validate() const;
    double sunny_days() const noexcept;
    double cloudy_days() const noexcept;
    /// Seasonal temperature reduction integrated over cooling hours, deg C h.
    double degree_hours() const noexcept;
};

struct EconParams {
    double q_co2 = 1.46;        // kg CO2 per m^2 per year
    double k_conv = 0.785;      // kg CO2 per kWh
    double tariff = 1.29;       // HK$ per kWh
    double carbon_price = 65.0; // HK$ per tonne

    /// Throws ValidationError unless every field is positive.
    void validate() const;
};

inline constexpr double joules_per_kwh = 3.6e6;

/// Weighted mean of `values` with non-negative `weights`. Throws
/// ZeroPopulationError when the weights sum to zero.
double population_weighted_mean(std::span<const double> weights, std::span<const double> values);

/// Population-weighted mean greenspace coverage over populated cells, with
/// coverage evaluated at each cell center. Nodata cells are unpopulated.
double greenspace_exposure(const GreenspaceMask& mask, const RasterGrid& population,
                           double radius = 500.0);

/// C_v = q_co2 * area, kg CO2 per year.
double carbon_sequestration(double greenable_area_m2, double q_co2 = 1.46);

struct BuildingVolume {
    double area_m2 = 0.0;
    double height_m = 0.0;
};

struct EnergySavings {
    double joules = 0.0;
    double kwh = 0.0;
};

/// Cooling energy saved in one season: degree hours times the volumetric
/// heat capacity of air times the summed building volume.
EnergySavings energy_savings(std::span<const BuildingVolume> buildings,
                             const CoolingParams& p = {});
EnergySavings energy_savings_for_volume(double volume_m3, const CoolingParams& p = {});

/// C_e = kwh * k_conv, kg CO2 per year.
double indirect_carbon(double kwh, double k_conv = 0.785);

struct EconomicValue {
    double energy = 0.0; // HK$ per year
    double carbon = 0.0; // HK$ per year
    double total = 0.0;
};

EconomicValue economic_value(double kwh, double c_total_kg, const EconParams& econ = {});

struct BenefitReport {
    double greenable_area_m2 = 0.0;
    double exposure_baseline = 0.0;
    double exposure_greened = 0.0;
    double c_v_kg = 0.0;
    double e_kwh = 0.0;
    double c_e_kg = 0.0;
    double c_total_kg = 0.0;
    double city_emissions_t = 34.7e6;
    double share_of_city = 0.0; // fraction
    double value_energy = 0.0;
    double value_carbon = 0.0;
    double value_total = 0.0;
};

/// Carbon and value chain from greenable area and saved energy.
BenefitReport benefit_chain(double greenable_area_m2, double e_kwh, const EconParams& econ = {},
                            double city_emissions_t = 34.7e6);

/// Least-squares fit of greenspace coverage against income.
LinearFit income_greenspace_regression(std::span<const double> income,
                                       std::span<const double> coverage);

} // namespace greenprior
