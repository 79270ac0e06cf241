#include "greenprior/roofs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numbers>

#include "greenprior/errors.hpp"

namespace greenprior {

namespace {

constexpr double rad_to_deg = 180.0 / std::numbers::pi;

constexpr std::array<std::array<int, 2>, 8> neighbours8 = {
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}}};
constexpr std::array<std::array<int, 2>, 4> neighbours4 = {{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

// Running least-squares sums for z = a*u + b*v + c in a local frame.
struct PlaneAccumulator {
    double n = 0, su = 0, sv = 0, sz = 0, suu = 0, suv = 0, svv = 0, suz = 0, svz = 0;

    void add(double u, double v, double z) noexcept {
        n += 1;
        su += u;
        sv += v;
        sz += z;
        suu += u * u;
        suv += u * v;
        svv += v * v;
        suz += u * z;
        svz += v * z;
    }

    std::optional<Plane> solve() const noexcept {
        if (n < 3) return std::nullopt;
        const double cuu = suu - su * su / n;
        const double cuv = suv - su * sv / n;
        const double cvv = svv - sv * sv / n;
        const double cuz = suz - su * sz / n;
        const double cvz = svz - sv * sz / n;
        if (!(cuu > 0.0) || !(cvv > 0.0)) return std::nullopt;
        const double det = cuu * cvv - cuv * cuv;
        if (!(det > 1e-10 * cuu * cvv)) return std::nullopt; // collinear
        Plane p;
        p.a = (cuz * cvv - cvz * cuv) / det;
        p.b = (cvz * cuu - cuz * cuv) / det;
        p.c = (sz - p.a * su - p.b * sv) / n;
        return p;
    }
};

struct Normal {
    double x = 0, y = 0, z = 1;
};

Normal normal_of(const Plane& p) noexcept {
    const double len = std::sqrt(1.0 + p.a * p.a + p.b * p.b);
    return {-p.a / len, -p.b / len, 1.0 / len};
}

double angle_deg(const Normal& m, const Normal& n) noexcept {
    const double d = std::clamp(m.x * n.x + m.y * n.y + m.z * n.z, -1.0, 1.0);
    return std::acos(d) * rad_to_deg;
}

// Dense lookup over the bounding box of one component.
class ClusterIndex {
public:
    explicit ClusterIndex(const CellCluster& cells) {
        std::int64_t min_r = cells.front().row, max_r = min_r;
        std::int64_t min_c = cells.front().col, max_c = min_c;
        for (const auto& c : cells) {
            min_r = std::min(min_r, c.row);
            max_r = std::max(max_r, c.row);
            min_c = std::min(min_c, c.col);
            max_c = std::max(max_c, c.col);
        }
        row0_ = min_r;
        col0_ = min_c;
        nrows_ = max_r - min_r + 1;
        ncols_ = max_c - min_c + 1;
        slots_.assign(static_cast<std::size_t>(nrows_ * ncols_), -1);
        for (std::size_t i = 0; i < cells.size(); ++i)
            slots_[slot(cells[i].row, cells[i].col)] = static_cast<int>(i);
    }

    int find(std::int64_t row, std::int64_t col) const noexcept {
        const std::int64_t r = row - row0_;
        const std::int64_t c = col - col0_;
        if (r < 0 || r >= nrows_ || c < 0 || c >= ncols_) return -1;
        return slots_[static_cast<std::size_t>(r * ncols_ + c)];
    }

private:
    std::size_t slot(std::int64_t row, std::int64_t col) const noexcept {
        return static_cast<std::size_t>((row - row0_) * ncols_ + (col - col0_));
    }

    std::int64_t row0_ = 0, col0_ = 0, nrows_ = 0, ncols_ = 0;
    std::vector<int> slots_;
};

// Local coordinates relative to an anchor cell keep the sums well scaled.
struct LocalFrame {
    std::int64_t row0 = 0;
    std::int64_t col0 = 0;
    double cell = 1.0;

    double u(const RoofCell& c) const noexcept { return static_cast<double>(c.col - col0) * cell; }
    double v(const RoofCell& c) const noexcept { return static_cast<double>(c.row - row0) * cell; }

    // Converts a local-frame plane to world coordinates.
    Plane to_world(const Plane& p, const GridFrame& frame) const noexcept {
        const Point2 anchor = frame.center({row0, col0});
        return {p.a, p.b, p.c - p.a * anchor.x - p.b * anchor.y};
    }
};

double residual(const Plane& local, const LocalFrame& lf, const RoofCell& c) noexcept {
    return c.z - (local.a * lf.u(c) + local.b * lf.v(c) + local.c);
}

struct LocalGeometry {
    std::optional<Plane> plane; // local frame
    std::optional<Normal> normal;
    double curvature = std::numeric_limits<double>::infinity();
};

std::vector<LocalGeometry> local_geometry(const CellCluster& cells, const ClusterIndex& index,
                                          const LocalFrame& lf) {
    std::vector<LocalGeometry> out(cells.size());
    static constexpr std::array<std::array<int, 2>, 4> block_origins = {
        {{0, 0}, {0, -1}, {-1, 0}, {-1, -1}}};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const RoofCell& c = cells[i];

        PlaneAccumulator window;
        std::vector<int> members;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                const int j = index.find(c.row + dr, c.col + dc);
                if (j < 0) continue;
                window.add(lf.u(cells[j]), lf.v(cells[j]), cells[j].z);
                members.push_back(j);
            }
        const auto window_plane = window.solve();
        if (window_plane) {
            double ss = 0.0;
            for (int j : members) {
                const double r = residual(*window_plane, lf, cells[j]);
                ss += r * r;
            }
            out[i].curvature = std::sqrt(ss / static_cast<double>(members.size()));
        }

        // The normal comes from the flattest complete 2x2 block touching
        // the cell, so cells next to a ridge or step still get the normal
        // of their own face.
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [br, bc] : block_origins) {
            PlaneAccumulator block;
            std::array<int, 4> ids{};
            bool complete = true;
            int k = 0;
            for (int dr = 0; dr <= 1 && complete; ++dr)
                for (int dc = 0; dc <= 1; ++dc) {
                    const int j = index.find(c.row + br + dr, c.col + bc + dc);
                    if (j < 0) {
                        complete = false;
                        break;
                    }
                    ids[static_cast<std::size_t>(k++)] = j;
                    block.add(lf.u(cells[j]), lf.v(cells[j]), cells[j].z);
                }
            if (!complete) continue;
            const auto p = block.solve();
            if (!p) continue;
            double worst = 0.0;
            for (int j : ids) worst = std::max(worst, std::abs(residual(*p, lf, cells[j])));
            // A block straddling an axis-aligned step is exactly planar too;
            // among equally good blocks prefer the flattest.
            const bool tie = std::abs(worst - best) <= 1e-9;
            if ((!tie && worst < best) ||
                (tie && std::hypot(p->a, p->b) < std::hypot(out[i].plane->a, out[i].plane->b))) {
                best = std::min(best, worst);
                out[i].plane = p;
            }
        }
        if (!out[i].plane && window_plane) out[i].plane = window_plane;
        if (out[i].plane) out[i].normal = normal_of(*out[i].plane);
    }
    return out;
}

// Slope for cells that cannot support a plane fit.
double fallback_slope(std::span<const RoofCell> cells, const GridFrame& frame) {
    if (cells.size() < 2) return 0.0;
    // Steepest pairwise gradient along the (collinear) cells.
    double best = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            const Point2 a = frame.center(cells[i].index());
            const Point2 b = frame.center(cells[j].index());
            const double d = std::hypot(a.x - b.x, a.y - b.y);
            if (d > 0.0) best = std::max(best, std::abs(cells[i].z - cells[j].z) / d);
        }
    return std::atan(best) * rad_to_deg;
}

} // namespace

// ---------------------------------------------------------------------------

double Plane::slope_deg() const noexcept {
    return std::atan2(std::hypot(a, b), 1.0) * rad_to_deg;
}

RoofCellSet::RoofCellSet(GridFrame frame, std::vector<RoofCell> cells)
    : frame_(frame), cells_(std::move(cells)) {
    if (!(frame_.cell > 0.0)) throw ValidationError("roof cell size must be positive");
    std::sort(cells_.begin(), cells_.end(), [](const RoofCell& a, const RoofCell& b) {
        return a.index() < b.index();
    });
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (!std::isfinite(cells_[i].z)) throw ValidationError("roof cell z must be finite");
        if (i > 0 && cells_[i].index() == cells_[i - 1].index())
            throw ValidationError("duplicate roof cell index");
    }
}

const RoofCell* RoofCellSet::find(std::int64_t row, std::int64_t col) const noexcept {
    const CellIndex key{row, col};
    const auto it = std::lower_bound(cells_.begin(), cells_.end(), key,
                                     [](const RoofCell& c, const CellIndex& k) {
                                         return c.index() < k;
                                     });
    if (it == cells_.end() || it->index() != key) return nullptr;
    return &*it;
}

RoofCellSet candidate_roof_points(const PointCloud& pc, double cell, Point2 origin) {
    if (!(cell > 0.0)) throw ValidationError("DSM cell size must be positive");
    const GridFrame frame{origin.x, origin.y, cell};
    std::vector<RoofCell> raw;
    for (const auto& p : pc) {
        if (p.cls != PointClass::building) continue;
        const CellIndex idx = frame.cell_of(p.x, p.y);
        raw.push_back({idx.row, idx.col, p.z});
    }
    if (raw.empty()) throw NoBuildingPointsError();
    std::sort(raw.begin(), raw.end(), [](const RoofCell& a, const RoofCell& b) {
        if (a.index() != b.index()) return a.index() < b.index();
        return a.z > b.z;
    });
    std::vector<RoofCell> cells;
    for (const auto& c : raw)
        if (cells.empty() || cells.back().index() != c.index()) cells.push_back(c);
    return RoofCellSet(frame, std::move(cells));
}

RoofCellSet filter_wall_edges(const RoofCellSet& cells, double threshold) {
    std::vector<RoofCell> kept;
    kept.reserve(cells.size());
    for (const auto& c : cells.cells()) {
        bool keep = true;
        for (const auto& [dr, dc] : neighbours4) {
            const RoofCell* n = cells.find(c.row + dr, c.col + dc);
            if (n && !(std::abs(c.z - n->z) < threshold)) {
                keep = false;
                break;
            }
        }
        if (keep) kept.push_back(c);
    }
    return RoofCellSet(cells.frame(), std::move(kept));
}

std::vector<CellCluster> label_components(const RoofCellSet& cells) {
    const auto all = cells.cells();
    std::vector<char> visited(all.size(), 0);
    auto index_of = [&](const RoofCell* c) { return static_cast<std::size_t>(c - all.data()); };

    std::vector<CellCluster> out;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (visited[i]) continue;
        CellCluster cluster;
        visited[i] = 1;
        stack.push_back(i);
        while (!stack.empty()) {
            const std::size_t k = stack.back();
            stack.pop_back();
            cluster.push_back(all[k]);
            for (const auto& [dr, dc] : neighbours8) {
                const RoofCell* n = cells.find(all[k].row + dr, all[k].col + dc);
                if (!n) continue;
                const std::size_t j = index_of(n);
                if (visited[j]) continue;
                visited[j] = 1;
                stack.push_back(j);
            }
        }
        std::sort(cluster.begin(), cluster.end(), [](const RoofCell& a, const RoofCell& b) {
            return a.index() < b.index();
        });
        out.push_back(std::move(cluster));
    }
    // Scanning in (row, col) order already yields components ordered by
    // their smallest cell.
    return out;
}

std::optional<Plane> fit_plane(std::span<const RoofCell> cells, const GridFrame& frame) {
    if (cells.size() < 3) return std::nullopt;
    const LocalFrame lf{cells.front().row, cells.front().col, frame.cell};
    PlaneAccumulator acc;
    for (const auto& c : cells) acc.add(lf.u(c), lf.v(c), c.z);
    const auto p = acc.solve();
    if (!p) return std::nullopt;
    return lf.to_world(*p, frame);
}

SlopeArea segment_slope_area(std::span<const RoofCell> cells, const GridFrame& frame) {
    SlopeArea out;
    out.area_m2 = static_cast<double>(cells.size()) * frame.cell * frame.cell;
    if (const auto p = fit_plane(cells, frame))
        out.slope_deg = p->slope_deg();
    else
        out.slope_deg = fallback_slope(cells, frame);
    return out;
}

std::vector<RoofSegment> grow_segments(const CellCluster& component, const GridFrame& frame,
                                       const GrowParams& params) {
    std::vector<RoofSegment> segments;
    if (component.empty()) return segments;

    const ClusterIndex index(component);
    const LocalFrame lf{component.front().row, component.front().col, frame.cell};
    const auto geom = local_geometry(component, index, lf);

    std::vector<std::size_t> order(component.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return geom[a].curvature < geom[b].curvature; // component is (row, col) sorted
    });

    const double normal_tol = params.normal_tol_deg + 1e-9;
    const double residual_tol = params.residual_tol_m + 1e-9;

    std::vector<int> owner(component.size(), -1);
    std::vector<std::size_t> stamp(component.size(), 0);
    std::size_t generation = 0;

    for (const std::size_t seed : order) {
        if (owner[seed] >= 0) continue;
        ++generation;
        const RoofCell& sc = component[seed];
        const auto& seed_normal = geom[seed].normal;

        // Initial plane: the seed's local plane shifted through the seed.
        Plane current{0.0, 0.0, sc.z};
        if (geom[seed].plane) {
            current = *geom[seed].plane;
            current.c = sc.z - current.a * lf.u(sc) - current.b * lf.v(sc);
        }

        std::vector<std::size_t> members{seed};
        stamp[seed] = generation;
        PlaneAccumulator acc;
        acc.add(lf.u(sc), lf.v(sc), sc.z);

        std::deque<std::size_t> queue{seed};
        while (!queue.empty()) {
            const std::size_t cur = queue.front();
            queue.pop_front();
            for (const auto& [dr, dc] : neighbours8) {
                const int j = index.find(component[cur].row + dr, component[cur].col + dc);
                if (j < 0) continue;
                const auto nb = static_cast<std::size_t>(j);
                if (owner[nb] >= 0 || stamp[nb] == generation) continue;
                if (seed_normal && geom[nb].normal &&
                    angle_deg(*seed_normal, *geom[nb].normal) > normal_tol)
                    continue;
                if (std::abs(residual(current, lf, component[nb])) > residual_tol) continue;
                stamp[nb] = generation;
                members.push_back(nb);
                acc.add(lf.u(component[nb]), lf.v(component[nb]), component[nb].z);
                if (const auto refit = acc.solve()) current = *refit;
                queue.push_back(nb);
            }
        }

        // The final plane must fit every member; eject violators and keep
        // the part still connected to the seed.
        while (members.size() > 1) {
            const auto plane = acc.solve();
            if (!plane) break;
            std::vector<std::size_t> keep;
            bool seed_ok = true;
            for (std::size_t m : members) {
                if (std::abs(residual(*plane, lf, component[m])) <= residual_tol)
                    keep.push_back(m);
                else if (m == seed)
                    seed_ok = false;
            }
            if (keep.size() == members.size()) break;
            ++generation;
            if (!seed_ok) {
                members = {seed};
                stamp[seed] = generation;
                break;
            }
            for (std::size_t m : keep) stamp[m] = generation;
            // Re-collect members 8-connected to the seed.
            ++generation;
            std::vector<std::size_t> connected{seed};
            const std::size_t keep_gen = generation - 1;
            stamp[seed] = generation;
            for (std::size_t q = 0; q < connected.size(); ++q) {
                for (const auto& [dr, dc] : neighbours8) {
                    const int j = index.find(component[connected[q]].row + dr,
                                             component[connected[q]].col + dc);
                    if (j < 0) continue;
                    const auto nb = static_cast<std::size_t>(j);
                    if (stamp[nb] != keep_gen) continue;
                    stamp[nb] = generation;
                    connected.push_back(nb);
                }
            }
            members = std::move(connected);
            acc = PlaneAccumulator{};
            for (std::size_t m : members) acc.add(lf.u(component[m]), lf.v(component[m]), component[m].z);
        }

        const int seg_id = static_cast<int>(segments.size());
        RoofSegment seg;
        for (std::size_t m : members) {
            owner[m] = seg_id;
            seg.cells.push_back(component[m]);
        }
        std::sort(seg.cells.begin(), seg.cells.end(), [](const RoofCell& a, const RoofCell& b) {
            return a.index() < b.index();
        });
        seg.area_m2 = static_cast<double>(seg.cells.size()) * frame.cell * frame.cell;
        if (const auto p = fit_plane(seg.cells, frame)) {
            seg.plane = *p;
        } else if (geom[seed].plane) {
            // Too small to fit: use the seed's local gradient.
            Plane local = *geom[seed].plane;
            local.c = sc.z - local.a * lf.u(sc) - local.b * lf.v(sc);
            seg.plane = lf.to_world(local, frame);
        } else {
            const Point2 ctr = frame.center(sc.index());
            const double s = std::tan(fallback_slope(seg.cells, frame) / rad_to_deg);
            seg.plane = {0.0, 0.0, sc.z};
            if (seg.cells.size() == 2) {
                const Point2 o = frame.center(seg.cells[1].index());
                const Point2 f = frame.center(seg.cells[0].index());
                const double dx = o.x - f.x, dy = o.y - f.y;
                const double d = std::hypot(dx, dy);
                const double sign = seg.cells[1].z >= seg.cells[0].z ? 1.0 : -1.0;
                seg.plane.a = sign * s * dx / d;
                seg.plane.b = sign * s * dy / d;
            }
            seg.plane.c = sc.z - seg.plane.a * ctr.x - seg.plane.b * ctr.y;
        }
        seg.slope_deg = seg.plane.slope_deg();
        segments.push_back(std::move(seg));
    }
    return segments;
}

void assign_segments(std::span<RoofSegment> segments,
                     std::span<const BuildingAttributes> buildings, const GridFrame& frame) {
    for (auto& seg : segments) {
        seg.building_id.reset();
        if (seg.cells.empty()) continue;
        double sr = 0.0, sc = 0.0;
        for (const auto& c : seg.cells) {
            sr += static_cast<double>(c.row);
            sc += static_cast<double>(c.col);
        }
        const double n = static_cast<double>(seg.cells.size());
        const Point2 p = frame.center({std::llround(sr / n), std::llround(sc / n)});
        for (const auto& b : buildings) {
            if (point_in_polygon(p, b.footprint)) {
                seg.building_id = b.id;
                break;
            }
        }
    }
}

PotentialDecision decide_potential(const BuildingAttributes& building,
                                   std::span<const RoofSegment> segments,
                                   const PotentialThresholds& thresholds) {
    PotentialDecision d;
    d.building_id = building.id;
    d.reasons.age = building.age_years > thresholds.max_age_years;

    bool any_qualifying = false;
    PotentialReasons failing;
    std::size_t own = 0;
    for (const auto& s : segments) {
        if (s.building_id && *s.building_id != building.id) continue;
        ++own;
        const bool slope_ok = s.slope_deg < thresholds.max_slope_deg;
        const bool area_ok = s.area_m2 > thresholds.min_area_m2;
        if (slope_ok && area_ok) {
            any_qualifying = true;
            d.greenable_area_m2 += s.area_m2;
        }
        failing.slope = failing.slope || !slope_ok;
        failing.area = failing.area || !area_ok;
    }
    if (own == 0) {
        d.reasons.area = true;
    } else if (!any_qualifying) {
        d.reasons.slope = failing.slope;
        d.reasons.area = failing.area;
    }
    d.potential = d.reasons.empty();
    return d;
}

double ground_elevation(const Polygon& footprint, std::span<const Point3> ground_points,
                        double search_radius) {
    const BoundingBox& bb = footprint.bbox();
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : ground_points) {
        if (p.cls != PointClass::ground) continue;
        if (p.x < bb.min_x - search_radius || p.x > bb.max_x + search_radius ||
            p.y < bb.min_y - search_radius || p.y > bb.max_y + search_radius)
            continue;
        if (p.z >= best) continue;
        if (point_polygon_distance(p.xy(), footprint) <= search_radius) best = p.z;
    }
    return std::isfinite(best) ? best : 0.0;
}

double building_height(const Polygon& footprint, const RoofCellSet& cells, double ground_z) {
    const GridFrame& f = cells.frame();
    const BoundingBox& bb = footprint.bbox();
    const CellIndex lo = f.cell_of(bb.min_x, bb.min_y);
    const CellIndex hi = f.cell_of(bb.max_x, bb.max_y);
    std::vector<double> zs;
    const auto all = cells.cells();
    auto it = std::lower_bound(all.begin(), all.end(), CellIndex{lo.row, lo.col},
                               [](const RoofCell& c, const CellIndex& k) { return c.index() < k; });
    for (; it != all.end() && it->row <= hi.row; ++it) {
        if (it->col < lo.col || it->col > hi.col) continue;
        if (point_in_polygon(cells.center(*it), footprint)) zs.push_back(it->z);
    }
    if (zs.empty()) throw ComputationError("no roof cells inside footprint");
    std::sort(zs.begin(), zs.end());
    const std::size_t n = zs.size();
    const double median = n % 2 == 1 ? zs[n / 2] : 0.5 * (zs[n / 2 - 1] + zs[n / 2]);
    return std::max(0.0, median - ground_z);
}

RoofExtraction extract_roofs(const PointCloud& pc, std::span<const BuildingAttributes> buildings,
                             const RoofParams& params) {
    RoofExtraction out;
    out.candidates = candidate_roof_points(pc, params.dsm_cell);
    out.filtered = filter_wall_edges(out.candidates, params.wall_threshold_m);
    for (const auto& comp : label_components(out.filtered)) {
        auto segs = grow_segments(comp, out.filtered.frame(), params.grow);
        for (auto& s : segs) out.segments.push_back(std::move(s));
    }
    assign_segments(out.segments, buildings, out.filtered.frame());

    std::map<std::string, std::vector<std::size_t>> by_building;
    for (std::size_t i = 0; i < out.segments.size(); ++i)
        if (out.segments[i].building_id) by_building[*out.segments[i].building_id].push_back(i);

    std::vector<Point3> ground;
    for (const auto& p : pc)
        if (p.cls == PointClass::ground) ground.push_back(p);

    for (const auto& b : buildings) {
        BuildingRoofs br;
        const auto it = by_building.find(b.id);
        std::vector<RoofSegment> mine;
        if (it != by_building.end()) {
            br.segment_indices = it->second;
            for (std::size_t i : it->second) mine.push_back(out.segments[i]);
        }
        br.decision = decide_potential(b, mine, params.thresholds);
        double largest = -1.0;
        for (const auto& s : mine) {
            br.roof_area_m2 += s.area_m2;
            if (s.area_m2 > largest) {
                largest = s.area_m2;
                br.slope_deg = s.slope_deg;
            }
        }
        const double gz = ground_elevation(b.footprint, ground, params.ground_search_m);
        try {
            br.height_m = building_height(b.footprint, out.candidates, gz);
        } catch (const ComputationError&) {
            br.height_m = 0.0;
        }
        out.buildings.push_back(std::move(br));
    }
    return out;
}

} // namespace greenprior
