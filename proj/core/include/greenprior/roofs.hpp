#pragma once

// Roof extraction from a classified point cloud: candidate roof cells
// (highest building point per cell), wall/edge filtering, 8-connected
// component labeling, plane-based region growing, and the per-building
// greening potential decision.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenprior/geocore.hpp"
#include "greenprior/records.hpp"

namespace greenprior {

struct RoofCell {
    std::int64_t row = 0;
    std::int64_t col = 0;
    double z = 0.0; // highest building-point elevation in the cell

    CellIndex index() const noexcept { return {row, col}; }
    friend bool operator==(const RoofCell&, const RoofCell&) = default;
};

/// Sparse set of roof cells on one grid frame, sorted by (row, col) with
/// at most one cell per index.
class RoofCellSet {
public:
    RoofCellSet() = default;
    /// Sorts the cells; throws ValidationError on duplicate indices or
    /// non-finite elevations.
    RoofCellSet(GridFrame frame, std::vector<RoofCell> cells);

    const GridFrame& frame() const noexcept { return frame_; }
    std::span<const RoofCell> cells() const noexcept { return cells_; }
    std::size_t size() const noexcept { return cells_.size(); }
    bool empty() const noexcept { return cells_.empty(); }

    const RoofCell* find(std::int64_t row, std::int64_t col) const noexcept;
    Point2 center(const RoofCell& c) const noexcept { return frame_.center(c.index()); }

    friend bool operator==(const RoofCellSet&, const RoofCellSet&) = default;

private:
    GridFrame frame_;
    std::vector<RoofCell> cells_;
};

/// One 8-connected cluster of roof cells, sorted by (row, col).
using CellCluster = std::vector<RoofCell>;

/// z = a*x + b*y + c in world meters.
struct Plane {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double at(double x, double y) const noexcept { return a * x + b * y + c; }
    /// Angle between the plane normal and the vertical, degrees in [0, 90).
    double slope_deg() const noexcept;
};

struct RoofSegment {
    std::vector<RoofCell> cells; // sorted by (row, col)
    Plane plane;
    double slope_deg = 0.0;
    double area_m2 = 0.0;
    std::optional<std::string> building_id;
};

struct GrowParams {
    double normal_tol_deg = 10.0;
    double residual_tol_m = 0.2;
};

struct PotentialThresholds {
    double max_slope_deg = 15.0; // qualifying segments are strictly flatter
    double min_area_m2 = 10.0;   // and strictly larger
    int max_age_years = 60;      // buildings older than this cannot be greened
};

struct PotentialReasons {
    bool slope = false;
    bool area = false;
    bool age = false;

    bool empty() const noexcept { return !slope && !area && !age; }
    friend bool operator==(const PotentialReasons&, const PotentialReasons&) = default;
};

struct PotentialDecision {
    std::string building_id;
    bool potential = false;
    PotentialReasons reasons;
    double greenable_area_m2 = 0.0; // sum of qualifying segment areas
};

/// One cell per grid cell holding at least one building point, with the
/// maximum building-point z of that cell. Other classes are ignored.
/// Throws NoBuildingPointsError when the cloud has no building points.
RoofCellSet candidate_roof_points(const PointCloud& pc, double cell,
                                  Point2 origin = {0.0, 0.0});

/// Keeps a cell iff every present 4-neighbour differs in z by less than
/// `threshold`. Cells without any present 4-neighbour are kept.
RoofCellSet filter_wall_edges(const RoofCellSet& cells, double threshold = 1.0);

/// Maximal 8-connected components, ordered by their smallest (row, col).
std::vector<CellCluster> label_components(const RoofCellSet& cells);

/// Least-squares plane through cell centers. nullopt for fewer than three
/// cells or collinear cells.
std::optional<Plane> fit_plane(std::span<const RoofCell> cells, const GridFrame& frame);

/// Region growing over one component. Seeds are taken in order of lowest
/// local curvature (ties by row, col); a neighbour joins a segment when its
/// local normal is within `normal_tol_deg` of the seed normal and its
/// distance to the segment plane is within `residual_tol_m`. The result is
/// a disjoint cover of the component.
std::vector<RoofSegment> grow_segments(const CellCluster& component, const GridFrame& frame,
                                       const GrowParams& params = {});

struct SlopeArea {
    double slope_deg = 0.0;
    double area_m2 = 0.0;
};

/// Slope from the fitted plane (or from the cell-local gradient for
/// segments that cannot be fitted); horizontal-projected area.
SlopeArea segment_slope_area(std::span<const RoofCell> cells, const GridFrame& frame);

/// Assigns each segment to the first building whose footprint contains the
/// center of the segment's centroid cell. Unassigned segments keep nullopt.
void assign_segments(std::span<RoofSegment> segments,
                     std::span<const BuildingAttributes> buildings, const GridFrame& frame);

PotentialDecision decide_potential(const BuildingAttributes& building,
                                   std::span<const RoofSegment> segments,
                                   const PotentialThresholds& thresholds = {});

/// Minimum ground-class z within `search_radius` of the footprint, or 0
/// when no ground point is that close.
double ground_elevation(const Polygon& footprint, std::span<const Point3> ground_points,
                        double search_radius = 10.0);

/// Median z of the cells whose centers lie inside the footprint, minus the
/// ground elevation, clamped at zero. Throws ComputationError when no cell
/// lies inside.
double building_height(const Polygon& footprint, const RoofCellSet& cells, double ground_z);

struct RoofParams {
    double dsm_cell = 1.0;
    double wall_threshold_m = 1.0;
    GrowParams grow;
    PotentialThresholds thresholds;
    double ground_search_m = 10.0;
};

struct BuildingRoofs {
    PotentialDecision decision;
    double roof_area_m2 = 0.0;  // all assigned segments
    double slope_deg = 0.0;     // slope of the largest assigned segment
    double height_m = 0.0;
    std::vector<std::size_t> segment_indices; // into RoofExtraction::segments
};

struct RoofExtraction {
    RoofCellSet candidates;
    RoofCellSet filtered;
    std::vector<RoofSegment> segments;  // every segment, assigned or not
    std::vector<BuildingRoofs> buildings; // same order as the input buildings
};

/// Runs candidate cells, wall filter, labeling, region growing,
/// assignment, potential decision and height for every building.
RoofExtraction extract_roofs(const PointCloud& pc, std::span<const BuildingAttributes> buildings,
                             const RoofParams& params = {});

} // namespace greenprior
