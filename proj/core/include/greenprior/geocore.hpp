#pragma once

// Planar geometry and raster primitives shared by every stage of the
// pipeline. All coordinates are meters in a projected CRS.

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace greenprior {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

enum class PointClass : std::uint8_t { ground = 0, building = 1, vegetation = 2, other = 3 };

std::optional<PointClass> point_class_from_code(int code) noexcept;
std::string_view to_string(PointClass cls) noexcept;

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    PointClass cls = PointClass::other;

    Point2 xy() const noexcept { return {x, y}; }
    friend bool operator==(const Point3&, const Point3&) = default;
};

using PointCloud = std::vector<Point3>;

struct CellIndex {
    std::int64_t row = 0;
    std::int64_t col = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Axis-aligned grid. Row 0 is the southernmost row; row i covers
/// y in [origin_y + i*cell, origin_y + (i+1)*cell). Nodata cells hold NaN
/// in memory and are written with `nodata_value` on disk.
class RasterGrid {
public:
    static constexpr double default_nodata = -9999.0;

    RasterGrid() = default;
    RasterGrid(double origin_x, double origin_y, double cell, std::int64_t nrows,
               std::int64_t ncols, double fill = 0.0, double nodata_value = default_nodata);

    double origin_x() const noexcept { return origin_x_; }
    double origin_y() const noexcept { return origin_y_; }
    double cell() const noexcept { return cell_; }
    std::int64_t nrows() const noexcept { return nrows_; }
    std::int64_t ncols() const noexcept { return ncols_; }
    std::size_t size() const noexcept { return values_.size(); }
    double nodata_value() const noexcept { return nodata_value_; }
    void set_nodata_value(double v) noexcept { nodata_value_ = v; }

    bool contains(std::int64_t row, std::int64_t col) const noexcept {
        return row >= 0 && row < nrows_ && col >= 0 && col < ncols_;
    }

    double at(std::int64_t row, std::int64_t col) const { return values_[index(row, col)]; }
    void set(std::int64_t row, std::int64_t col, double v) { values_[index(row, col)] = v; }
    void set_nodata(std::int64_t row, std::int64_t col) { set(row, col, std::nan("")); }
    bool is_nodata(std::int64_t row, std::int64_t col) const { return std::isnan(at(row, col)); }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Grid with the same frame, every cell set to `fill`.
    RasterGrid like(double fill) const;

    bool same_frame(const RasterGrid& other) const noexcept;

    friend bool operator==(const RasterGrid& a, const RasterGrid& b);

private:
    std::size_t index(std::int64_t row, std::int64_t col) const noexcept {
        return static_cast<std::size_t>(row * ncols_ + col);
    }

    double origin_x_ = 0.0;
    double origin_y_ = 0.0;
    double cell_ = 1.0;
    std::int64_t nrows_ = 0;
    std::int64_t ncols_ = 0;
    double nodata_value_ = default_nodata;
    std::vector<double> values_;
};

/// Cell containing (x, y) under half-open intervals; a point on a cell
/// boundary belongs to the higher cell. nullopt when outside the grid.
std::optional<CellIndex> world_to_cell(const RasterGrid& grid, double x, double y) noexcept;

/// Unbounded variant used when the frame is implicit (origin + cell only).
CellIndex world_to_cell(double origin_x, double origin_y, double cell, double x,
                        double y) noexcept;

Point2 cell_center(const RasterGrid& grid, std::int64_t row, std::int64_t col) noexcept;
Point2 cell_center(double origin_x, double origin_y, double cell, CellIndex idx) noexcept;

/// Origin and cell size of an implicit, unbounded grid. Cell indices may
/// be negative.
struct GridFrame {
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell = 1.0;

    CellIndex cell_of(double x, double y) const noexcept {
        return world_to_cell(origin_x, origin_y, cell, x, y);
    }
    Point2 center(CellIndex idx) const noexcept {
        return cell_center(origin_x, origin_y, cell, idx);
    }
    friend bool operator==(const GridFrame&, const GridFrame&) = default;
};

using Ring = std::vector<Point2>;

struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    bool contains(Point2 p) const noexcept {
        return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
    }
};

/// Validated polygon: rings are closed (first == last) with at least four
/// vertices, the exterior does not self-intersect and has positive area.
class Polygon {
public:
    /// Rings that are not explicitly closed are closed automatically.
    /// Throws ValidationError on any violated invariant.
    explicit Polygon(Ring exterior, std::vector<Ring> holes = {});

    const Ring& exterior() const noexcept { return exterior_; }
    const std::vector<Ring>& holes() const noexcept { return holes_; }

    /// Exterior area minus hole areas.
    double area() const noexcept;
    Point2 centroid() const noexcept;
    const BoundingBox& bbox() const noexcept { return bbox_; }

    static Polygon rectangle(double min_x, double min_y, double max_x, double max_y);

private:
    Ring exterior_;
    std::vector<Ring> holes_;
    BoundingBox bbox_;
};

/// True iff p lies inside the exterior ring and outside every hole.
/// Points on any ring boundary count as inside the polygon.
bool point_in_polygon(Point2 p, const Polygon& poly) noexcept;

double ring_signed_area(std::span<const Point2> ring) noexcept;

double point_segment_distance(Point2 p, Point2 a, Point2 b) noexcept;

/// Distance from p to the polygon boundary, 0 when p is inside.
double point_polygon_distance(Point2 p, const Polygon& poly) noexcept;

enum class RoadClass : std::uint8_t { main, minor };

std::optional<RoadClass> road_class_from_string(std::string_view s) noexcept;
std::string_view to_string(RoadClass cls) noexcept;

class Polyline {
public:
    /// Throws ValidationError for fewer than two vertices or repeated
    /// consecutive vertices.
    Polyline(std::vector<Point2> vertices, RoadClass cls);

    const std::vector<Point2>& vertices() const noexcept { return vertices_; }
    RoadClass road_class() const noexcept { return cls_; }

private:
    std::vector<Point2> vertices_;
    RoadClass cls_;
};

/// Minimum point-to-segment distance over every polyline of class `filter`.
/// Throws NoRoadsError when no polyline passes the filter.
double distance_to_polylines(Point2 p, std::span<const Polyline> roads, RoadClass filter);

} // namespace greenprior
