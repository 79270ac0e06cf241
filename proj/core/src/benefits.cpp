#include "greenprior/benefits.hpp"

#include <cmath>
#include <vector>

#include "greenprior/errors.hpp"
#include "parallel.hpp"

namespace greenprior {

namespace {

void require_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be a non-negative finite number");
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be a positive finite number");
}

} // namespace

void CoolingParams::validate() const {
    require_non_negative(dT_sunny, "dT_sunny");
    require_non_negative(dT_cloudy, "dT_cloudy");
    require_non_negative(dT_rainy, "dT_rainy");
    require_non_negative(c_air, "c_air");
    require_non_negative(d_air, "d_air");
    require_non_negative(season_days, "season_days");
    require_non_negative(rainy_days, "rainy_days");
    require_non_negative(sunny_parts, "sunny_parts");
    require_non_negative(cloudy_parts, "cloudy_parts");
    require_non_negative(hours_per_day, "hours_per_day");
    if (rainy_days > season_days) throw ValidationError("rainy_days exceeds season_days");
    if (!(sunny_parts + cloudy_parts > 0.0))
        throw ValidationError("sunny:cloudy split must not be 0:0");
    if (hours_per_day > 24.0) throw ValidationError("hours_per_day exceeds 24");
}

double CoolingParams::sunny_days() const noexcept {
    return (season_days - rainy_days) * sunny_parts / (sunny_parts + cloudy_parts);
}

double CoolingParams::cloudy_days() const noexcept {
    return (season_days - rainy_days) * cloudy_parts / (sunny_parts + cloudy_parts);
}

double CoolingParams::degree_hours() const noexcept {
    return (dT_sunny * sunny_days() + dT_cloudy * cloudy_days() + dT_rainy * rainy_days) *
           hours_per_day;
}

void EconParams::validate() const {
    require_positive(q_co2, "q_co2");
    require_positive(k_conv, "k_conv");
    require_positive(tariff, "tariff");
    require_positive(carbon_price, "carbon_price");
}

double population_weighted_mean(std::span<const double> weights, std::span<const double> values) {
    if (weights.size() != values.size())
        throw ValidationError("weighted mean needs one value per weight");
    double wsum = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        require_non_negative(weights[i], "population");
        wsum += weights[i];
        acc += weights[i] * values[i];
    }
    if (!(wsum > 0.0)) throw ZeroPopulationError();
    return acc / wsum;
}

double greenspace_exposure(const GreenspaceMask& mask, const RasterGrid& population,
                           double radius) {
    std::vector<Point2> centers;
    std::vector<double> weights;
    for (std::int64_t r = 0; r < population.nrows(); ++r)
        for (std::int64_t c = 0; c < population.ncols(); ++c) {
            if (population.is_nodata(r, c)) continue;
            const double pop = population.at(r, c);
            require_non_negative(pop, "population");
            if (pop == 0.0) continue;
            centers.push_back(cell_center(population, r, c));
            weights.push_back(pop);
        }
    if (weights.empty()) throw ZeroPopulationError();
    std::vector<double> gc(centers.size());
    detail::parallel_for(centers.size(), [&](std::size_t i) {
        gc[i] = greenspace_coverage(mask, centers[i].x, centers[i].y, radius);
    });
    return population_weighted_mean(weights, gc);
}

double carbon_sequestration(double greenable_area_m2, double q_co2) {
    require_non_negative(greenable_area_m2, "greenable area");
    require_positive(q_co2, "q_co2");
    return q_co2 * greenable_area_m2;
}

EnergySavings energy_savings_for_volume(double volume_m3, const CoolingParams& p) {
    require_non_negative(volume_m3, "building volume");
    p.validate();
    EnergySavings e;
    e.joules = p.degree_hours() * p.c_air * p.d_air * volume_m3;
    e.kwh = e.joules / joules_per_kwh;
    return e;
}

EnergySavings energy_savings(std::span<const BuildingVolume> buildings, const CoolingParams& p) {
    double volume = 0.0;
    for (const auto& b : buildings) {
        require_non_negative(b.area_m2, "building area");
        require_non_negative(b.height_m, "building height");
        volume += b.area_m2 * b.height_m;
    }
    return energy_savings_for_volume(volume, p);
}

double indirect_carbon(double kwh, double k_conv) {
    require_non_negative(kwh, "energy");
    require_positive(k_conv, "k_conv");
    return kwh * k_conv;
}

EconomicValue economic_value(double kwh, double c_total_kg, const EconParams& econ) {
    require_non_negative(kwh, "energy");
    require_non_negative(c_total_kg, "carbon");
    econ.validate();
    EconomicValue v;
    v.energy = kwh * econ.tariff;
    v.carbon = c_total_kg / 1000.0 * econ.carbon_price;
    v.total = v.energy + v.carbon;
    return v;
}

BenefitReport benefit_chain(double greenable_area_m2, double e_kwh, const EconParams& econ,
                            double city_emissions_t) {
    econ.validate();
    require_positive(city_emissions_t, "city emissions");
    BenefitReport b;
    b.greenable_area_m2 = greenable_area_m2;
    b.e_kwh = e_kwh;
    b.city_emissions_t = city_emissions_t;
    b.c_v_kg = carbon_sequestration(greenable_area_m2, econ.q_co2);
    b.c_e_kg = indirect_carbon(e_kwh, econ.k_conv);
    b.c_total_kg = b.c_v_kg + b.c_e_kg;
    b.share_of_city = b.c_total_kg / 1000.0 / city_emissions_t;
    const EconomicValue v = economic_value(e_kwh, b.c_total_kg, econ);
    b.value_energy = v.energy;
    b.value_carbon = v.carbon;
    b.value_total = v.total;
    return b;
}

LinearFit income_greenspace_regression(std::span<const double> income,
                                       std::span<const double> coverage) {
    return linear_regression(income, coverage);
}

} // namespace greenprior
