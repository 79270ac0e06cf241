#include "greenprior/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "greenprior/errors.hpp"

namespace greenprior {

GreenspaceMask::GreenspaceMask(RasterGrid grid) : grid_(std::move(grid)) {
    const std::int64_t nr = grid_.nrows();
    const std::int64_t nc = grid_.ncols();
    prefix_.assign(static_cast<std::size_t>(nr * (nc + 1)), 0);
    for (std::int64_t r = 0; r < nr; ++r) {
        std::int64_t run = 0;
        for (std::int64_t c = 0; c < nc; ++c) {
            const double v = grid_.at(r, c);
            if (v != 0.0 && v != 1.0) throw ValidationError("greenspace mask must be binary");
            run += v == 1.0 ? 1 : 0;
            prefix_[static_cast<std::size_t>(r * (nc + 1) + c + 1)] = run;
        }
    }
}

std::int64_t GreenspaceMask::green_pixels() const noexcept {
    std::int64_t total = 0;
    const std::int64_t nc = grid_.ncols();
    for (std::int64_t r = 0; r < grid_.nrows(); ++r)
        total += prefix_[static_cast<std::size_t>(r * (nc + 1) + nc)];
    return total;
}

std::int64_t GreenspaceMask::count_in_row(std::int64_t row, std::int64_t c0,
                                          std::int64_t c1) const noexcept {
    if (row < 0 || row >= grid_.nrows()) return 0;
    c0 = std::max<std::int64_t>(c0, 0);
    c1 = std::min<std::int64_t>(c1, grid_.ncols() - 1);
    if (c0 > c1) return 0;
    const std::size_t base = static_cast<std::size_t>(row * (grid_.ncols() + 1));
    return prefix_[base + static_cast<std::size_t>(c1 + 1)] - prefix_[base + static_cast<std::size_t>(c0)];
}

RasterGrid mask_frame(const PointCloud& pc, std::span<const Point2> extra_points, double cell) {
    if (!(cell > 0.0)) throw ValidationError("mask cell size must be positive");
    if (pc.empty() && extra_points.empty()) throw ValidationError("mask needs at least one point");
    double min_x = std::numeric_limits<double>::infinity(), min_y = min_x;
    double max_x = -min_x, max_y = -min_x;
    auto grow = [&](double x, double y) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
    };
    for (const auto& p : pc) grow(p.x, p.y);
    for (const auto& p : extra_points) grow(p.x, p.y);
    const double ox = std::floor(min_x / cell) * cell;
    const double oy = std::floor(min_y / cell) * cell;
    const auto ncols = static_cast<std::int64_t>(std::floor((max_x - ox) / cell)) + 1;
    const auto nrows = static_cast<std::int64_t>(std::floor((max_y - oy) / cell)) + 1;
    return RasterGrid(ox, oy, cell, nrows, ncols, 0.0);
}

GreenspaceMask build_greenspace_mask(const PointCloud& pc,
                                     std::span<const Point2> potential_roof_cells, MaskMode mode,
                                     const RasterGrid& frame) {
    RasterGrid g = frame.like(0.0);
    for (const auto& p : pc) {
        if (p.cls != PointClass::vegetation) continue;
        if (const auto idx = world_to_cell(g, p.x, p.y)) g.set(idx->row, idx->col, 1.0);
    }
    if (mode == MaskMode::greened)
        for (const auto& p : potential_roof_cells)
            if (const auto idx = world_to_cell(g, p.x, p.y)) g.set(idx->row, idx->col, 1.0);
    return GreenspaceMask(std::move(g));
}

GreenspaceMask build_greenspace_mask(const PointCloud& pc,
                                     std::span<const Point2> potential_roof_cells, MaskMode mode,
                                     double cell) {
    return build_greenspace_mask(pc, potential_roof_cells, mode,
                                 mask_frame(pc, potential_roof_cells, cell));
}

double greenspace_coverage(const GreenspaceMask& mask, double x, double y, double radius) {
    const RasterGrid& g = mask.grid();
    const double cell = g.cell();
    const double r2 = radius * radius;
    auto dy_of = [&](std::int64_t row) { return cell_center(g, row, 0).y - y; };
    auto dx_of = [&](std::int64_t col) { return cell_center(g, 0, col).x - x; };
    auto in_disk = [&](double dx, double dy) { return dx * dx + dy * dy <= r2; };

    // Candidate rows from the analytic bound, then exact edges by the same
    // center test a pixel-by-pixel scan would use.
    std::int64_t r_lo = static_cast<std::int64_t>(std::ceil((y - radius - g.origin_y()) / cell - 0.5));
    std::int64_t r_hi = static_cast<std::int64_t>(std::floor((y + radius - g.origin_y()) / cell - 0.5));
    r_lo = std::max<std::int64_t>(r_lo - 1, 0);
    r_hi = std::min<std::int64_t>(r_hi + 1, g.nrows() - 1);

    std::int64_t count = 0;
    for (std::int64_t row = r_lo; row <= r_hi; ++row) {
        const double dy = dy_of(row);
        if (!in_disk(0.0, dy)) continue;
        const double half = std::sqrt(std::max(0.0, r2 - dy * dy));
        std::int64_t c_lo = static_cast<std::int64_t>(std::ceil((x - half - g.origin_x()) / cell - 0.5));
        std::int64_t c_hi = static_cast<std::int64_t>(std::floor((x + half - g.origin_x()) / cell - 0.5));
        while (in_disk(dx_of(c_lo - 1), dy)) --c_lo;
        while (c_lo <= c_hi && !in_disk(dx_of(c_lo), dy)) ++c_lo;
        while (in_disk(dx_of(c_hi + 1), dy)) ++c_hi;
        while (c_hi >= c_lo && !in_disk(dx_of(c_hi), dy)) --c_hi;
        count += mask.count_in_row(row, c_lo, c_hi);
    }
    const double rate =
        static_cast<double>(count) * cell * cell / (std::numbers::pi * radius * radius);
    return std::min(1.0, rate);
}

double roof_coverage_rate(std::span<const Point2> roof_cells, const GreenspaceMask& mask,
                          double radius) {
    if (roof_cells.empty()) throw ValidationError("roof has no cells");
    double sum = 0.0;
    for (const auto& p : roof_cells) sum += greenspace_coverage(mask, p.x, p.y, radius);
    return sum / static_cast<double>(roof_cells.size());
}

double distance_indicator(double distance_m, double cap_m) {
    if (!(distance_m >= 0.0)) throw ValidationError("road distance must be non-negative");
    if (!(cap_m > 0.0)) throw ValidationError("road distance cap must be positive");
    return std::max(0.0, 1.0 - distance_m / cap_m);
}

double category_indicator(BuildingCategory category) noexcept {
    switch (category) {
    case BuildingCategory::private_owned: return 0.5;
    case BuildingCategory::public_owned: return 1.0;
    case BuildingCategory::miscellaneous: return 0.75;
    }
    return 0.75;
}

double sample_surface_at_building(const RasterGrid& surface, const Polygon& footprint) {
    const Point2 centroid = footprint.centroid();
    const auto centroid_cell = world_to_cell(surface, centroid.x, centroid.y);
    if (!centroid_cell) throw ComputationError("footprint centroid lies outside the surface");

    const BoundingBox& bb = footprint.bbox();
    const CellIndex lo = world_to_cell(surface.origin_x(), surface.origin_y(), surface.cell(),
                                       bb.min_x, bb.min_y);
    const CellIndex hi = world_to_cell(surface.origin_x(), surface.origin_y(), surface.cell(),
                                       bb.max_x, bb.max_y);
    double sum = 0.0;
    std::size_t n = 0;
    for (std::int64_t r = std::max<std::int64_t>(lo.row, 0);
         r <= std::min<std::int64_t>(hi.row, surface.nrows() - 1); ++r)
        for (std::int64_t c = std::max<std::int64_t>(lo.col, 0);
             c <= std::min<std::int64_t>(hi.col, surface.ncols() - 1); ++c) {
            if (surface.is_nodata(r, c)) continue;
            if (!point_in_polygon(cell_center(surface, r, c), footprint)) continue;
            sum += surface.at(r, c);
            ++n;
        }
    if (n > 0) return sum / static_cast<double>(n);
    if (surface.is_nodata(centroid_cell->row, centroid_cell->col))
        throw ComputationError("surface has no data under the footprint");
    return surface.at(centroid_cell->row, centroid_cell->col);
}

double combine_seasonal_temperature(const SeasonalTemps& t) noexcept {
    return (t.spring + 4.0 * t.summer + 4.0 * t.autumn + t.winter) / 10.0;
}

SeasonCalendar SeasonCalendar::standard() {
    return {{{{3, 4, 5}, {6, 7, 8}, {9, 10, 11}, {12, 1, 2}}}};
}

void SeasonCalendar::validate() const {
    std::array<int, 13> seen{};
    for (const auto& season : months) {
        if (season.empty()) throw ValidationError("every season needs at least one month");
        for (int m : season) {
            if (m < 1 || m > 12) throw ValidationError("month out of range: " + std::to_string(m));
            if (seen[static_cast<std::size_t>(m)]++)
                throw ValidationError("month assigned twice: " + std::to_string(m));
        }
    }
    for (int m = 1; m <= 12; ++m)
        if (!seen[static_cast<std::size_t>(m)])
            throw ValidationError("month not assigned to a season: " + std::to_string(m));
}

int SeasonCalendar::season_of(int month) const {
    for (std::size_t s = 0; s < months.size(); ++s)
        if (std::find(months[s].begin(), months[s].end(), month) != months[s].end())
            return static_cast<int>(s);
    throw ValidationError("month not assigned to a season: " + std::to_string(month));
}

std::vector<double> min_max_normalize(std::span<const double> raw, Direction dir) {
    std::vector<double> out(raw.size(), 0.5);
    if (raw.empty()) return out;
    const auto [mn, mx] = std::minmax_element(raw.begin(), raw.end());
    const double lo = *mn, hi = *mx;
    if (!(hi > lo)) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = dir == Direction::positive ? (raw[i] - lo) / (hi - lo)
                                                    : (hi - raw[i]) / (hi - lo);
        out[i] = std::clamp(v, 0.0, 1.0);
    }
    return out;
}

std::vector<IndicatorVector> normalize_indicators(std::span<const RawIndicators> raw) {
    const std::size_t n = raw.size();
    auto column = [&](auto get) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = get(raw[i]);
        return v;
    };
    const auto g = min_max_normalize(column([](const RawIndicators& r) { return r.greenspace_rate; }),
                                     Direction::negative);
    const auto inc = min_max_normalize(column([](const RawIndicators& r) { return r.income; }),
                                       Direction::negative);
    const auto p = min_max_normalize(column([](const RawIndicators& r) { return r.precipitation; }),
                                     Direction::positive);
    const auto t1 = min_max_normalize(column([](const RawIndicators& r) { return r.temperature.spring; }),
                                      Direction::positive);
    const auto t2 = min_max_normalize(column([](const RawIndicators& r) { return r.temperature.summer; }),
                                      Direction::positive);
    const auto t3 = min_max_normalize(column([](const RawIndicators& r) { return r.temperature.autumn; }),
                                      Direction::positive);
    const auto t4 = min_max_normalize(column([](const RawIndicators& r) { return r.temperature.winter; }),
                                      Direction::positive);

    std::vector<IndicatorVector> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i].greenspace = g[i];
        out[i].road = std::clamp(raw[i].road, 0.0, 1.0);
        out[i].category = std::clamp(raw[i].category, 0.0, 1.0);
        out[i].income = inc[i];
        out[i].temperature = combine_seasonal_temperature({t1[i], t2[i], t3[i], t4[i]});
        out[i].precipitation = p[i];
    }
    return out;
}

} // namespace greenprior
