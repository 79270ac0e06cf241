#pragma once

// Scattered-sample interpolation: inverse distance weighting and ordinary
// kriging with a fitted isotropic variogram.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "greenprior/geocore.hpp"
#include "greenprior/records.hpp"

namespace greenprior {

enum class VariogramKind { spherical, exponential };

std::optional<VariogramKind> variogram_kind_from_string(std::string_view s) noexcept;
std::string_view to_string(VariogramKind k) noexcept;

/// Isotropic variogram. `sill` is the total sill (nugget + partial sill).
/// The exponential model uses the practical range (95% of the partial sill
/// is reached at `range_m`).
struct VariogramModel {
    VariogramKind kind = VariogramKind::spherical;
    double nugget = 0.0;
    double sill = 1.0;
    double range_m = 1.0;
    bool degenerate = false; // set by the fitter for flat empirical curves

    /// gamma(0) = 0; gamma(h) -> nugget as h -> 0+.
    double operator()(double h) const noexcept;
    void validate() const;
};

/// Samples sorted by (x, y); samples sharing coordinates are averaged.
/// Throws ValidationError when empty or when a value is not finite.
class SampleSet {
public:
    explicit SampleSet(std::vector<StationSample> samples, std::string units = {});

    std::span<const StationSample> samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    const std::string& units() const noexcept { return units_; }
    BoundingBox bbox() const noexcept;

private:
    std::vector<StationSample> samples_;
    std::string units_;
};

/// Indices of the k nearest samples to (x, y), nearest first; ties broken
/// by sample order. k == 0 or k >= n selects every sample.
std::vector<std::size_t> nearest_samples(const SampleSet& samples, double x, double y,
                                         std::size_t k);

/// Weighted mean of the k nearest samples with weights d^-power. A query
/// within 1e-9 m of a sample returns that sample's value.
double idw_predict(const SampleSet& samples, double x, double y, double power = 2.0,
                   std::size_t k_neighbors = 12);

struct LagBin {
    double lag = 0.0;   // mean pair distance in the bin
    double gamma = 0.0; // half the mean squared difference
    std::size_t pairs = 0;
};

struct EmpiricalVariogram {
    std::vector<LagBin> bins; // empty bins omitted
    double max_dist = 0.0;
    double bin_width = 0.0;
};

/// Classical estimator over equal-width lag bins on (0, max_dist]. The
/// default max_dist is half the diagonal of the samples' bounding box.
/// Throws ValidationError for fewer than two samples.
EmpiricalVariogram empirical_semivariogram(const SampleSet& samples, std::size_t n_bins = 15,
                                           std::optional<double> max_dist = std::nullopt);

/// Pair-count weighted least squares fit of nugget, sill and range. For a
/// fixed range the model is linear in (nugget, partial sill), so the range
/// is scanned on a fixed grid and refined by golden-section search.
/// Needs at least three bins; a flat zero curve yields a degenerate model.
VariogramModel fit_variogram(const EmpiricalVariogram& empirical, VariogramKind kind);

struct KrigingWeights {
    std::vector<std::size_t> indices; // into SampleSet::samples()
    std::vector<double> weights;
    double lagrange = 0.0;
};

struct KrigingPrediction {
    double value = 0.0;
    double variance = 0.0;
};

/// Ordinary-kriging weights over the k nearest samples (all when k == 0).
/// Throws SingularSystemError when two neighbours coincide.
KrigingWeights kriging_weights(const SampleSet& samples, const VariogramModel& model, double x,
                               double y, std::size_t k_neighbors = 16);

KrigingPrediction kriging_predict(const SampleSet& samples, const VariogramModel& model, double x,
                                  double y, std::size_t k_neighbors = 16);

enum class InterpMethod { idw, kriging };

struct InterpOptions {
    double idw_power = 2.0;
    std::size_t idw_k = 12;
    std::size_t kriging_k = 16;
    VariogramKind variogram = VariogramKind::spherical;
    std::optional<VariogramModel> model; // fitted from the samples when absent
};

/// Empirical variogram plus fit; falls back to a flat model when fewer
/// than three lag bins are available.
VariogramModel fit_model_for(const SampleSet& samples, VariogramKind kind);

/// Fills every cell of `target`'s frame with the prediction at its center.
RasterGrid interpolate_grid(const SampleSet& samples, InterpMethod method,
                            const RasterGrid& target, const InterpOptions& options = {});

/// Fills nodata cells by ordinary kriging from the valid cells. At most
/// `max_variogram_samples` evenly strided valid cells feed the variogram fit.
RasterGrid fill_gaps_kriging(const RasterGrid& grid, const InterpOptions& options = {},
                             std::size_t max_variogram_samples = 2000);

} // namespace greenprior
