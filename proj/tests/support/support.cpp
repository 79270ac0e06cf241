#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gp_test {

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

ScratchDir::ScratchDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    std::random_device rd;
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
        path_ = base / ("greenprior_" + tag + "_" + std::to_string(rd()) + "_" +
                        std::to_string(counter++));
        if (std::filesystem::create_directories(path_)) break;
    }
}

ScratchDir::~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

double naive_coverage(const greenprior::RasterGrid& mask, double x, double y, double radius) {
    const double cell = mask.cell();
    std::int64_t count = 0;
    for (std::int64_t r = 0; r < mask.nrows(); ++r)
        for (std::int64_t c = 0; c < mask.ncols(); ++c) {
            if (mask.at(r, c) != 1.0) continue;
            const double cx = mask.origin_x() + (static_cast<double>(c) + 0.5) * cell;
            const double cy = mask.origin_y() + (static_cast<double>(r) + 0.5) * cell;
            const double dx = cx - x;
            const double dy = cy - y;
            if (dx * dx + dy * dy <= radius * radius) ++count;
        }
    const double rate =
        static_cast<double>(count) * cell * cell / (std::numbers::pi * radius * radius);
    return std::min(rate, 1.0);
}

CellPartition flood_fill_partition(const std::vector<std::vector<bool>>& occupied) {
    const auto rows = static_cast<std::int64_t>(occupied.size());
    const auto cols = rows == 0 ? 0 : static_cast<std::int64_t>(occupied[0].size());
    std::vector<std::vector<bool>> seen(static_cast<std::size_t>(rows),
                                        std::vector<bool>(static_cast<std::size_t>(cols)));
    CellPartition out;
    std::set<std::pair<std::int64_t, std::int64_t>> current;
    std::function<void(std::int64_t, std::int64_t)> fill = [&](std::int64_t r, std::int64_t c) {
        if (r < 0 || c < 0 || r >= rows || c >= cols) return;
        const auto ur = static_cast<std::size_t>(r);
        const auto uc = static_cast<std::size_t>(c);
        if (!occupied[ur][uc] || seen[ur][uc]) return;
        seen[ur][uc] = true;
        current.insert({r, c});
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc)
                if (dr != 0 || dc != 0) fill(r + dr, c + dc);
    };
    for (std::int64_t r = 0; r < rows; ++r)
        for (std::int64_t c = 0; c < cols; ++c) {
            current.clear();
            fill(r, c);
            if (!current.empty()) out.insert(current);
        }
    return out;
}

CellPartition as_partition(const std::vector<greenprior::CellCluster>& clusters) {
    CellPartition out;
    for (const auto& cluster : clusters) {
        std::set<std::pair<std::int64_t, std::int64_t>> cells;
        for (const auto& c : cluster) cells.insert({c.row, c.col});
        out.insert(cells);
    }
    return out;
}

double reference_gamma(const greenprior::VariogramModel& m, double h) {
    if (h <= 0.0) return 0.0;
    const double partial = m.sill - m.nugget;
    if (m.kind == greenprior::VariogramKind::spherical) {
        if (h >= m.range_m) return m.sill;
        const double s = h / m.range_m;
        return m.nugget + partial * (1.5 * s - 0.5 * s * s * s);
    }
    return m.nugget + partial * (1.0 - std::exp(-3.0 * h / m.range_m));
}

namespace {

std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[pivot][k])) pivot = i;
        if (std::abs(a[pivot][k]) < 1e-300) throw std::runtime_error("singular oracle system");
        std::swap(a[k], a[pivot]);
        std::swap(b[k], b[pivot]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

} // namespace

DenseKriging dense_kriging(const std::vector<greenprior::StationSample>& samples,
                           const greenprior::VariogramModel& model, double x, double y) {
    const std::size_t n = samples.size();
    auto cov = [&](double h) { return model.sill - reference_gamma(model, h); };
    std::vector<std::vector<double>> a(n + 1, std::vector<double>(n + 1, 0.0));
    std::vector<double> b(n + 1, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = cov(std::hypot(samples[i].x - samples[j].x, samples[i].y - samples[j].y));
        a[i][n] = 1.0;
        a[n][i] = 1.0;
        b[i] = cov(std::hypot(samples[i].x - x, samples[i].y - y));
    }
    const auto sol = gauss_solve(a, b);
    DenseKriging out;
    out.weights.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(n));
    out.variance = model.sill - sol[n];
    for (std::size_t i = 0; i < n; ++i) {
        out.value += sol[i] * samples[i].value;
        out.variance -= sol[i] * b[i];
    }
    return out;
}

double direct_idw(const std::vector<greenprior::StationSample>& samples, double x, double y,
                  double power) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : samples) {
        const double w = std::pow(std::hypot(s.x - x, s.y - y), -power);
        num += w * s.value;
        den += w;
    }
    return num / den;
}

double sampled_polyline_distance(greenprior::Point2 p,
                                 const std::vector<greenprior::Polyline>& roads,
                                 std::size_t samples_per_segment) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& road : roads) {
        const auto& v = road.vertices();
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            for (std::size_t k = 0; k <= samples_per_segment; ++k) {
                const double t = static_cast<double>(k) / static_cast<double>(samples_per_segment);
                const double qx = v[i].x + t * (v[i + 1].x - v[i].x);
                const double qy = v[i].y + t * (v[i + 1].y - v[i].y);
                best = std::min(best, std::hypot(p.x - qx, p.y - qy));
            }
    }
    return best;
}

bool ray_cast_inside(greenprior::Point2 p, const greenprior::Ring& ring) {
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const auto& a = ring[i];
        const auto& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x)
            inside = !inside;
    }
    return inside;
}

} // namespace gp_test
