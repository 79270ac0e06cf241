#include "greenprior/geocore.hpp"

#include <algorithm>
#include <limits>

#include "greenprior/errors.hpp"

namespace greenprior {

std::optional<PointClass> point_class_from_code(int code) noexcept {
    switch (code) {
    case 0: return PointClass::ground;
    case 1: return PointClass::building;
    case 2: return PointClass::vegetation;
    case 3: return PointClass::other;
    default: return std::nullopt;
    }
}

std::string_view to_string(PointClass cls) noexcept {
    switch (cls) {
    case PointClass::ground: return "ground";
    case PointClass::building: return "building";
    case PointClass::vegetation: return "vegetation";
    case PointClass::other: return "other";
    }
    return "other";
}

// ---------------------------------------------------------------------------
// RasterGrid

RasterGrid::RasterGrid(double origin_x, double origin_y, double cell, std::int64_t nrows,
                       std::int64_t ncols, double fill, double nodata_value)
    : origin_x_(origin_x), origin_y_(origin_y), cell_(cell), nrows_(nrows), ncols_(ncols),
      nodata_value_(nodata_value) {
    if (!(cell > 0.0) || !std::isfinite(cell))
        throw ValidationError("raster cell size must be positive");
    if (nrows <= 0 || ncols <= 0)
        throw ValidationError("raster dimensions must be positive");
    if (!std::isfinite(origin_x) || !std::isfinite(origin_y))
        throw ValidationError("raster origin must be finite");
    values_.assign(static_cast<std::size_t>(nrows * ncols), fill);
}

RasterGrid RasterGrid::like(double fill) const {
    return RasterGrid(origin_x_, origin_y_, cell_, nrows_, ncols_, fill, nodata_value_);
}

bool RasterGrid::same_frame(const RasterGrid& other) const noexcept {
    return origin_x_ == other.origin_x_ && origin_y_ == other.origin_y_ &&
           cell_ == other.cell_ && nrows_ == other.nrows_ && ncols_ == other.ncols_;
}

bool operator==(const RasterGrid& a, const RasterGrid& b) {
    if (!a.same_frame(b)) return false;
    for (std::size_t i = 0; i < a.values_.size(); ++i) {
        const double va = a.values_[i];
        const double vb = b.values_[i];
        const bool na = std::isnan(va);
        const bool nb = std::isnan(vb);
        if (na != nb) return false;
        if (!na && va != vb) return false;
    }
    return true;
}

CellIndex world_to_cell(double origin_x, double origin_y, double cell, double x,
                        double y) noexcept {
    return {static_cast<std::int64_t>(std::floor((y - origin_y) / cell)),
            static_cast<std::int64_t>(std::floor((x - origin_x) / cell))};
}

std::optional<CellIndex> world_to_cell(const RasterGrid& grid, double x, double y) noexcept {
    if (!std::isfinite(x) || !std::isfinite(y)) return std::nullopt;
    const CellIndex idx = world_to_cell(grid.origin_x(), grid.origin_y(), grid.cell(), x, y);
    if (!grid.contains(idx.row, idx.col)) return std::nullopt;
    return idx;
}

Point2 cell_center(double origin_x, double origin_y, double cell, CellIndex idx) noexcept {
    return {origin_x + (static_cast<double>(idx.col) + 0.5) * cell,
            origin_y + (static_cast<double>(idx.row) + 0.5) * cell};
}

Point2 cell_center(const RasterGrid& grid, std::int64_t row, std::int64_t col) noexcept {
    return cell_center(grid.origin_x(), grid.origin_y(), grid.cell(), {row, col});
}

// ---------------------------------------------------------------------------
// Polygon

namespace {

double cross(Point2 o, Point2 a, Point2 b) noexcept {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(Point2 p, Point2 a, Point2 b) noexcept {
    if (cross(a, b, p) != 0.0) return false;
    return p.x >= std::min(a.x, b.x) && p.x <= std::max(a.x, b.x) &&
           p.y >= std::min(a.y, b.y) && p.y <= std::max(a.y, b.y);
}

int orientation(Point2 a, Point2 b, Point2 c) noexcept {
    const double v = cross(a, b, c);
    return (v > 0.0) - (v < 0.0);
}

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) noexcept {
    const int o1 = orientation(p1, p2, q1);
    const int o2 = orientation(p1, p2, q2);
    const int o3 = orientation(q1, q2, p1);
    const int o4 = orientation(q1, q2, p2);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(q1, p1, p2)) || (o2 == 0 && on_segment(q2, p1, p2)) ||
           (o3 == 0 && on_segment(p1, q1, q2)) || (o4 == 0 && on_segment(p2, q1, q2));
}

void close_and_check(Ring& ring, const char* which) {
    for (const auto& p : ring)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ValidationError(std::string(which) + " ring has non-finite coordinates");
    if (!ring.empty() && !(ring.front() == ring.back())) ring.push_back(ring.front());
    if (ring.size() < 4)
        throw ValidationError(std::string(which) + " ring needs at least 4 vertices");
}

bool self_intersects(const Ring& ring) noexcept {
    const std::size_t n = ring.size() - 1; // number of edges
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) {
                // Adjacent edges share one vertex; they only conflict when
                // they fold back over each other.
                const Point2 shared = (j == i + 1) ? ring[j] : ring[i];
                const Point2 a = (j == i + 1) ? ring[i] : ring[i + 1];
                const Point2 b = (j == i + 1) ? ring[j + 1] : ring[j];
                if (cross(shared, a, b) == 0.0 &&
                    ((a.x - shared.x) * (b.x - shared.x) + (a.y - shared.y) * (b.y - shared.y)) > 0.0)
                    return true;
                continue;
            }
            if (segments_intersect(ring[i], ring[i + 1], ring[j], ring[j + 1])) return true;
        }
    }
    return false;
}

// Crossing-number test; boundary handling is done by the caller.
bool inside_ring(Point2 p, const Ring& ring) noexcept {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Point2 a = ring[i];
        const Point2 b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_at = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < x_at) inside = !inside;
        }
    }
    return inside;
}

bool on_ring(Point2 p, const Ring& ring) noexcept {
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        if (on_segment(p, ring[i], ring[i + 1])) return true;
    return false;
}

} // namespace

double ring_signed_area(std::span<const Point2> ring) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i)
        s += ring[i].x * ring[i + 1].y - ring[i + 1].x * ring[i].y;
    return 0.5 * s;
}

Polygon::Polygon(Ring exterior, std::vector<Ring> holes)
    : exterior_(std::move(exterior)), holes_(std::move(holes)) {
    close_and_check(exterior_, "exterior");
    for (auto& h : holes_) close_and_check(h, "interior");
    if (self_intersects(exterior_)) throw ValidationError("exterior ring self-intersects");
    if (!(area() > 0.0)) throw ValidationError("polygon area must be positive");

    bbox_ = {exterior_[0].x, exterior_[0].y, exterior_[0].x, exterior_[0].y};
    for (const auto& p : exterior_) {
        bbox_.min_x = std::min(bbox_.min_x, p.x);
        bbox_.min_y = std::min(bbox_.min_y, p.y);
        bbox_.max_x = std::max(bbox_.max_x, p.x);
        bbox_.max_y = std::max(bbox_.max_y, p.y);
    }
}

Polygon Polygon::rectangle(double min_x, double min_y, double max_x, double max_y) {
    return Polygon(Ring{{min_x, min_y}, {max_x, min_y}, {max_x, max_y}, {min_x, max_y},
                        {min_x, min_y}});
}

double Polygon::area() const noexcept {
    double a = std::abs(ring_signed_area(exterior_));
    for (const auto& h : holes_) a -= std::abs(ring_signed_area(h));
    return a;
}

Point2 Polygon::centroid() const noexcept {
    // Area-weighted centroid of the exterior minus the holes.
    auto ring_moments = [](const Ring& r, double& a, double& cx, double& cy) {
        double sa = 0.0, sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            const double c = r[i].x * r[i + 1].y - r[i + 1].x * r[i].y;
            sa += c;
            sx += (r[i].x + r[i + 1].x) * c;
            sy += (r[i].y + r[i + 1].y) * c;
        }
        sa *= 0.5;
        const double sign = sa < 0.0 ? -1.0 : 1.0;
        a = std::abs(sa);
        cx = sign * sx / 6.0;
        cy = sign * sy / 6.0;
    };
    double a = 0.0, mx = 0.0, my = 0.0;
    ring_moments(exterior_, a, mx, my);
    for (const auto& h : holes_) {
        double ha = 0.0, hx = 0.0, hy = 0.0;
        ring_moments(h, ha, hx, hy);
        a -= ha;
        mx -= hx;
        my -= hy;
    }
    return {mx / a, my / a};
}

bool point_in_polygon(Point2 p, const Polygon& poly) noexcept {
    if (!poly.bbox().contains(p)) return false;
    if (on_ring(p, poly.exterior())) return true;
    if (!inside_ring(p, poly.exterior())) return false;
    for (const auto& h : poly.holes()) {
        if (on_ring(p, h)) return true;
        if (inside_ring(p, h)) return false;
    }
    return true;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) noexcept {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

double point_polygon_distance(Point2 p, const Polygon& poly) noexcept {
    if (point_in_polygon(p, poly)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    auto scan = [&](const Ring& r) {
        for (std::size_t i = 0; i + 1 < r.size(); ++i)
            best = std::min(best, point_segment_distance(p, r[i], r[i + 1]));
    };
    scan(poly.exterior());
    for (const auto& h : poly.holes()) scan(h);
    return best;
}

// ---------------------------------------------------------------------------
// Polylines

std::optional<RoadClass> road_class_from_string(std::string_view s) noexcept {
    if (s == "main") return RoadClass::main;
    if (s == "minor") return RoadClass::minor;
    return std::nullopt;
}

std::string_view to_string(RoadClass cls) noexcept {
    return cls == RoadClass::main ? "main" : "minor";
}

Polyline::Polyline(std::vector<Point2> vertices, RoadClass cls)
    : vertices_(std::move(vertices)), cls_(cls) {
    if (vertices_.size() < 2) throw ValidationError("polyline needs at least 2 vertices");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (!std::isfinite(vertices_[i].x) || !std::isfinite(vertices_[i].y))
            throw ValidationError("polyline has non-finite coordinates");
        if (i > 0 && vertices_[i] == vertices_[i - 1])
            throw ValidationError("polyline has repeated consecutive vertices");
    }
}

double distance_to_polylines(Point2 p, std::span<const Polyline> roads, RoadClass filter) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (const auto& road : roads) {
        if (road.road_class() != filter) continue;
        any = true;
        const auto& v = road.vertices();
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            best = std::min(best, point_segment_distance(p, v[i], v[i + 1]));
    }
    if (!any) throw NoRoadsError();
    return best;
}

} // namespace greenprior
