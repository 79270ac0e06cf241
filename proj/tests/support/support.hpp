#pragma once

// Shared test helpers: a portable RNG, scratch directories and independent
// brute-force oracles the optimized code is checked against.

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "greenprior/geocore.hpp"
#include "greenprior/interp.hpp"
#include "greenprior/records.hpp"
#include "greenprior/roofs.hpp"

namespace gp_test {

/// Draws built directly on the raw engine output so sequences do not
/// depend on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(double p) { return uniform() < p; }
    /// Box-Muller standard normal.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag);
    ~ScratchDir();
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

/// Every pixel of the mask grid is tested against the disk.
double naive_coverage(const greenprior::RasterGrid& mask, double x, double y, double radius);

/// Components of an occupancy grid by recursive 8-connected flood fill.
using CellPartition = std::set<std::set<std::pair<std::int64_t, std::int64_t>>>;
CellPartition flood_fill_partition(const std::vector<std::vector<bool>>& occupied);

/// Partition produced by label_components, in the same representation.
CellPartition as_partition(const std::vector<greenprior::CellCluster>& clusters);

/// Variogram evaluated from its textbook formula, independent of the
/// library's model type.
double reference_gamma(const greenprior::VariogramModel& m, double h);

struct DenseKriging {
    std::vector<double> weights;
    double value = 0.0;
    double variance = 0.0;
};

/// Ordinary kriging over every sample in covariance form
/// C(h) = sill - gamma(h), solved by Gaussian elimination with partial
/// pivoting.
DenseKriging dense_kriging(const std::vector<greenprior::StationSample>& samples,
                           const greenprior::VariogramModel& model, double x, double y);

/// Direct weighted sum over all samples with weights d^-power.
double direct_idw(const std::vector<greenprior::StationSample>& samples, double x, double y,
                  double power);

/// Minimum distance to a densely sampled set of polyline points.
double sampled_polyline_distance(greenprior::Point2 p,
                                 const std::vector<greenprior::Polyline>& roads,
                                 std::size_t samples_per_segment);

/// Even-odd ray casting against the exterior ring only.
bool ray_cast_inside(greenprior::Point2 p, const greenprior::Ring& ring);

} // namespace gp_test
