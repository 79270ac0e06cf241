#include "greenprior/config.hpp"

#include <charconv>
#include <functional>
#include <map>
#include <set>

#include "greenprior/errors.hpp"
#include "greenprior/ingest.hpp"

namespace greenprior {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double number(std::string_view key, std::string_view value) {
    const auto v = parse_double(value);
    if (!v) throw ValidationError("config key '" + std::string(key) + "' expects a number, got '" +
                                  std::string(value) + "'");
    return *v;
}

std::size_t count(std::string_view key, std::string_view value) {
    const double v = number(key, value);
    if (v < 0.0 || v != std::floor(v))
        throw ValidationError("config key '" + std::string(key) +
                              "' expects a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::vector<int> month_list(std::string_view key, std::string_view value) {
    std::vector<int> months;
    for (auto field : split_csv_line(value)) {
        const double m = number(key, trim(field));
        if (m != std::floor(m)) throw ValidationError("config key '" + std::string(key) +
                                                      "' expects integer months");
        months.push_back(static_cast<int>(m));
    }
    return months;
}

void require_positive(double v, const char* key) {
    if (!(v > 0.0)) throw ValidationError(std::string("config key '") + key + "' must be positive");
}

} // namespace

void PipelineConfig::validate_parameters() const {
    require_positive(roofs.dsm_cell, "dsm_cell");
    require_positive(roofs.wall_threshold_m, "wall_threshold_m");
    require_positive(roofs.grow.normal_tol_deg, "normal_tol_deg");
    require_positive(roofs.grow.residual_tol_m, "residual_tol_m");
    require_positive(roofs.thresholds.max_slope_deg, "slope_deg");
    require_positive(roofs.thresholds.min_area_m2, "area_m2");
    if (roofs.thresholds.max_age_years <= 0)
        throw ValidationError("config key 'age_yr' must be positive");
    if (roofs.thresholds.max_slope_deg >= 90.0)
        throw ValidationError("config key 'slope_deg' must be below 90");
    require_positive(roofs.ground_search_m, "ground_search_m");
    require_positive(road_cap_m, "road_cap_m");
    require_positive(gc_cell, "gc_cell");
    require_positive(gc_radius, "gc_radius");
    require_positive(surface_cell, "surface_cell");
    require_positive(idw_power, "idw_power");
    if (idw_k == 0) throw ValidationError("config key 'idw_k' must be positive");
    if (kriging_k == 0) throw ValidationError("config key 'kriging_k' must be positive");
    require_positive(city_emissions_t, "city_emissions_t");
    if (override_greenable_area_m2 && !(*override_greenable_area_m2 >= 0.0))
        throw ValidationError("config key 'override_greenable_area_m2' must be non-negative");
    if (override_energy_kwh && !(*override_energy_kwh >= 0.0))
        throw ValidationError("config key 'override_energy_kwh' must be non-negative");
    seasons.validate();
    cooling.validate();
    econ.validate();
}

void PipelineConfig::validate_inputs() const {
    const std::pair<const char*, const std::filesystem::path*> files[] = {
        {"points", &inputs.points},           {"footprints", &inputs.footprints},
        {"roads", &inputs.roads},             {"precipitation", &inputs.precipitation},
        {"income", &inputs.income},           {"population", &inputs.population},
        {"temp_spring", &inputs.temp_spring}, {"temp_summer", &inputs.temp_summer},
        {"temp_autumn", &inputs.temp_autumn}, {"temp_winter", &inputs.temp_winter},
    };
    for (const auto& [key, path] : files)
        if (!std::filesystem::is_regular_file(*path))
            throw IoError(std::string("input '") + key + "' not found: " + path->string());
}

PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir) {
    PipelineConfig cfg;
    auto path_setter = [&](std::filesystem::path& target) {
        return [&target, &base_dir](std::string_view, std::string_view v) {
            std::filesystem::path p{std::string(v)};
            target = p.is_absolute() ? p : base_dir / p;
        };
    };
    auto num = [](double& target) {
        return [&target](std::string_view k, std::string_view v) { target = number(k, v); };
    };
    auto cnt = [](std::size_t& target) {
        return [&target](std::string_view k, std::string_view v) { target = count(k, v); };
    };
    auto season = [&](std::size_t s) {
        return [&cfg, s](std::string_view k, std::string_view v) {
            cfg.seasons.months[s] = month_list(k, v);
        };
    };
    auto opt = [](std::optional<double>& target) {
        return [&target](std::string_view k, std::string_view v) { target = number(k, v); };
    };

    using Setter = std::function<void(std::string_view, std::string_view)>;
    const std::map<std::string, Setter, std::less<>> setters = {
        {"points", path_setter(cfg.inputs.points)},
        {"footprints", path_setter(cfg.inputs.footprints)},
        {"roads", path_setter(cfg.inputs.roads)},
        {"precipitation", path_setter(cfg.inputs.precipitation)},
        {"income", path_setter(cfg.inputs.income)},
        {"population", path_setter(cfg.inputs.population)},
        {"temp_spring", path_setter(cfg.inputs.temp_spring)},
        {"temp_summer", path_setter(cfg.inputs.temp_summer)},
        {"temp_autumn", path_setter(cfg.inputs.temp_autumn)},
        {"temp_winter", path_setter(cfg.inputs.temp_winter)},
        {"out", path_setter(cfg.out_dir)},
        {"dsm_cell", num(cfg.roofs.dsm_cell)},
        {"wall_threshold_m", num(cfg.roofs.wall_threshold_m)},
        {"normal_tol_deg", num(cfg.roofs.grow.normal_tol_deg)},
        {"residual_tol_m", num(cfg.roofs.grow.residual_tol_m)},
        {"slope_deg", num(cfg.roofs.thresholds.max_slope_deg)},
        {"area_m2", num(cfg.roofs.thresholds.min_area_m2)},
        {"age_yr",
         [&cfg](std::string_view k, std::string_view v) {
             cfg.roofs.thresholds.max_age_years = static_cast<int>(count(k, v));
         }},
        {"ground_search_m", num(cfg.roofs.ground_search_m)},
        {"road_cap_m", num(cfg.road_cap_m)},
        {"gc_cell", num(cfg.gc_cell)},
        {"gc_radius", num(cfg.gc_radius)},
        {"surface_cell", num(cfg.surface_cell)},
        {"idw_power", num(cfg.idw_power)},
        {"idw_k", cnt(cfg.idw_k)},
        {"kriging_k", cnt(cfg.kriging_k)},
        {"variogram",
         [&cfg](std::string_view k, std::string_view v) {
             const auto kind = variogram_kind_from_string(v);
             if (!kind) throw ValidationError("config key '" + std::string(k) +
                                              "' must be spherical or exponential");
             cfg.variogram = *kind;
         }},
        {"season_spring", season(0)},
        {"season_summer", season(1)},
        {"season_autumn", season(2)},
        {"season_winter", season(3)},
        {"dT_sunny", num(cfg.cooling.dT_sunny)},
        {"dT_cloudy", num(cfg.cooling.dT_cloudy)},
        {"dT_rainy", num(cfg.cooling.dT_rainy)},
        {"c_air", num(cfg.cooling.c_air)},
        {"d_air", num(cfg.cooling.d_air)},
        {"season_days", num(cfg.cooling.season_days)},
        {"rainy_days", num(cfg.cooling.rainy_days)},
        {"sunny_parts", num(cfg.cooling.sunny_parts)},
        {"cloudy_parts", num(cfg.cooling.cloudy_parts)},
        {"hours_per_day", num(cfg.cooling.hours_per_day)},
        {"q_co2", num(cfg.econ.q_co2)},
        {"k_conv", num(cfg.econ.k_conv)},
        {"tariff", num(cfg.econ.tariff)},
        {"carbon_price", num(cfg.econ.carbon_price)},
        {"city_emissions_t", num(cfg.city_emissions_t)},
        {"scheme",
         [&cfg](std::string_view k, std::string_view v) {
             const auto s = weighting_scheme_from_string(v);
             if (!s) throw ValidationError("config key '" + std::string(k) +
                                           "' must be equal, entropy, cv or critic");
             cfg.scheme = *s;
         }},
        {"override_greenable_area_m2", opt(cfg.override_greenable_area_m2)},
        {"override_energy_kwh", opt(cfg.override_energy_kwh)},
    };

    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (value.empty()) throw ParseError(line_no, "empty value for '" + std::string(key) + "'");
        const auto it = setters.find(key);
        if (it == setters.end())
            throw ParseError(line_no, "unknown config key '" + std::string(key) + "'");
        if (!seen.emplace(key).second)
            throw ParseError(line_no, "duplicate config key '" + std::string(key) + "'");
        it->second(key, value);
    }

    for (const char* required : {"points", "footprints", "roads", "precipitation", "income",
                                 "population", "temp_spring", "temp_summer", "temp_autumn",
                                 "temp_winter"})
        if (!seen.contains(std::string_view(required)))
            throw ValidationError(std::string("config key '") + required + "' is required");
    if (!seen.contains(std::string_view("out"))) cfg.out_dir = base_dir / "out";
    return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
    const std::string text = read_text_file(path);
    const auto base = std::filesystem::absolute(path).parent_path();
    PipelineConfig cfg = parse_config(text, base);
    cfg.validate_parameters();
    return cfg;
}

} // namespace greenprior
