#pragma once

// The six per-building greening indicators and their nondimensionalization.

#include <array>
#include <span>
#include <vector>

#include "greenprior/geocore.hpp"
#include "greenprior/records.hpp"

namespace greenprior {

enum class MaskMode {
    baseline, // vegetation only
    greened,  // vegetation plus potential roofs
};

/// Binary raster (0/1) of greenspace pixels with per-row prefix counts for
/// fast disk queries.
class GreenspaceMask {
public:
    /// Throws ValidationError when a cell is neither 0 nor 1.
    explicit GreenspaceMask(RasterGrid grid);

    const RasterGrid& grid() const noexcept { return grid_; }
    std::int64_t green_pixels() const noexcept;

    /// Number of green pixels in columns [c0, c1] of `row` (clamped).
    std::int64_t count_in_row(std::int64_t row, std::int64_t c0, std::int64_t c1) const noexcept;

private:
    RasterGrid grid_;
    std::vector<std::int64_t> prefix_; // nrows * (ncols + 1)
};

/// Mask frame covering the bounding box of the cloud (and roof cells),
/// snapped outward to multiples of `cell`.
RasterGrid mask_frame(const PointCloud& pc, std::span<const Point2> extra_points, double cell);

/// Pixel = 1 iff it holds a vegetation point or, in greened mode, the
/// center of a potential-roof cell.
GreenspaceMask build_greenspace_mask(const PointCloud& pc,
                                     std::span<const Point2> potential_roof_cells, MaskMode mode,
                                     const RasterGrid& frame);
GreenspaceMask build_greenspace_mask(const PointCloud& pc,
                                     std::span<const Point2> potential_roof_cells, MaskMode mode,
                                     double cell = 5.0);

/// Green pixel area whose pixel centers lie within `radius` of (x, y),
/// divided by the disk area and capped at 1. Pixels outside the mask
/// extent count as not green.
double greenspace_coverage(const GreenspaceMask& mask, double x, double y, double radius = 500.0);

/// Mean coverage over the given roof-cell centers.
double roof_coverage_rate(std::span<const Point2> roof_cells, const GreenspaceMask& mask,
                          double radius = 500.0);

/// max(0, 1 - d/cap): linear decay from 1 at the road to 0 at `cap`.
double distance_indicator(double distance_m, double cap_m = 500.0);

/// private 0.5, misc 0.75, public 1.0.
double category_indicator(BuildingCategory category) noexcept;

/// Mean of the valid surface cells whose centers fall inside the footprint,
/// falling back to the cell under the footprint centroid. Throws
/// ComputationError when the centroid is outside the surface or the
/// fallback cell is nodata.
double sample_surface_at_building(const RasterGrid& surface, const Polygon& footprint);

struct SeasonalTemps {
    double spring = 0.0; // T_1, March-May
    double summer = 0.0; // T_2, June-August
    double autumn = 0.0; // T_3, September-November
    double winter = 0.0; // T_4, December-February
};

/// (T_1 + 4 T_2 + 4 T_3 + T_4) / 10: the cooling seasons weigh 0.4 each.
double combine_seasonal_temperature(const SeasonalTemps& t) noexcept;

/// Month-to-season assignment; every month belongs to exactly one season.
struct SeasonCalendar {
    // spring, summer, autumn, winter
    std::array<std::vector<int>, 4> months;

    static SeasonCalendar standard();
    /// Throws ValidationError unless the lists partition months 1..12.
    void validate() const;
    /// 0 spring, 1 summer, 2 autumn, 3 winter.
    int season_of(int month) const;
};

enum class Direction {
    positive, // larger raw value, higher demand
    negative, // smaller raw value, higher demand
};

/// Min-max scaling to [0, 1]; a constant column maps to 0.5.
std::vector<double> min_max_normalize(std::span<const double> raw, Direction dir);

/// Raw per-building values before nondimensionalization.
struct RawIndicators {
    double greenspace_rate = 0.0; // mean GC over the roof, negative
    double road = 0.0;            // distance_indicator output, used as is
    double category = 0.0;        // category_indicator output, used as is
    double income = 0.0;          // HK$, negative
    SeasonalTemps temperature;    // deg C per season, each positive
    double precipitation = 0.0;   // mm, positive
};

/// Scales each indicator over the given building population. Temperature
/// seasons are scaled separately and then combined.
std::vector<IndicatorVector> normalize_indicators(std::span<const RawIndicators> raw);

} // namespace greenprior
