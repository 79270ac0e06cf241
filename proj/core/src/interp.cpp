#include "greenprior/interp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "greenprior/errors.hpp"
#include "parallel.hpp"

namespace greenprior {

namespace {

constexpr double coincidence_m = 1e-9;

double unit_shape(VariogramKind kind, double h, double range) noexcept {
    if (h <= 0.0) return 0.0;
    const double t = h / range;
    switch (kind) {
    case VariogramKind::spherical: return t >= 1.0 ? 1.0 : 1.5 * t - 0.5 * t * t * t;
    case VariogramKind::exponential: return 1.0 - std::exp(-3.0 * t);
    }
    return 0.0;
}

double dist(const StationSample& s, double x, double y) noexcept {
    return std::hypot(s.x - x, s.y - y);
}

} // namespace

std::optional<VariogramKind> variogram_kind_from_string(std::string_view s) noexcept {
    if (s == "spherical") return VariogramKind::spherical;
    if (s == "exponential") return VariogramKind::exponential;
    return std::nullopt;
}

std::string_view to_string(VariogramKind k) noexcept {
    return k == VariogramKind::spherical ? "spherical" : "exponential";
}

double VariogramModel::operator()(double h) const noexcept {
    if (h <= 0.0) return 0.0;
    return nugget + (sill - nugget) * unit_shape(kind, h, range_m);
}

void VariogramModel::validate() const {
    if (!(nugget >= 0.0) || !std::isfinite(nugget))
        throw ValidationError("variogram nugget must be non-negative");
    if (!(sill > nugget) || !std::isfinite(sill))
        throw ValidationError("variogram sill must exceed the nugget");
    if (!(range_m > 0.0) || !std::isfinite(range_m))
        throw ValidationError("variogram range must be positive");
}

// ---------------------------------------------------------------------------

SampleSet::SampleSet(std::vector<StationSample> samples, std::string units)
    : units_(std::move(units)) {
    if (samples.empty()) throw ValidationError("sample set is empty");
    for (const auto& s : samples)
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.value))
            throw ValidationError("sample has non-finite coordinates or value");
    std::sort(samples.begin(), samples.end(), [](const StationSample& a, const StationSample& b) {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.value < b.value;
    });
    for (std::size_t i = 0; i < samples.size();) {
        std::size_t j = i;
        double sum = 0.0;
        while (j < samples.size() && samples[j].x == samples[i].x && samples[j].y == samples[i].y)
            sum += samples[j++].value;
        samples_.push_back({samples[i].x, samples[i].y, sum / static_cast<double>(j - i)});
        i = j;
    }
}

BoundingBox SampleSet::bbox() const noexcept {
    BoundingBox bb{samples_[0].x, samples_[0].y, samples_[0].x, samples_[0].y};
    for (const auto& s : samples_) {
        bb.min_x = std::min(bb.min_x, s.x);
        bb.min_y = std::min(bb.min_y, s.y);
        bb.max_x = std::max(bb.max_x, s.x);
        bb.max_y = std::max(bb.max_y, s.y);
    }
    return bb;
}

std::vector<std::size_t> nearest_samples(const SampleSet& samples, double x, double y,
                                         std::size_t k) {
    const auto all = samples.samples();
    const std::size_t n = all.size();
    if (k == 0 || k > n) k = n;
    std::vector<std::pair<double, std::size_t>> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = all[i].x - x;
        const double dy = all[i].y - y;
        d[i] = {dx * dx + dy * dy, i};
    }
    std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = d[i].second;
    return out;
}

double idw_predict(const SampleSet& samples, double x, double y, double power,
                   std::size_t k_neighbors) {
    const auto all = samples.samples();
    const auto nn = nearest_samples(samples, x, y, k_neighbors);
    if (dist(all[nn[0]], x, y) < coincidence_m) return all[nn[0]].value;
    // Offsets from the nearest value keep constant fields exact.
    const double base = all[nn[0]].value;
    double wsum = 0.0, vsum = 0.0;
    for (std::size_t i : nn) {
        const double w = std::pow(dist(all[i], x, y), -power);
        wsum += w;
        vsum += w * (all[i].value - base);
    }
    return base + vsum / wsum;
}

// ---------------------------------------------------------------------------

EmpiricalVariogram empirical_semivariogram(const SampleSet& samples, std::size_t n_bins,
                                           std::optional<double> max_dist) {
    if (samples.size() < 2)
        throw ValidationError("empirical semivariogram needs at least 2 distinct samples");
    if (n_bins == 0) throw ValidationError("number of lag bins must be positive");
    const BoundingBox bb = samples.bbox();
    const double md = max_dist ? *max_dist : 0.5 * std::hypot(bb.max_x - bb.min_x, bb.max_y - bb.min_y);
    if (!(md > 0.0)) throw ValidationError("maximum lag distance must be positive");

    EmpiricalVariogram out;
    out.max_dist = md;
    out.bin_width = md / static_cast<double>(n_bins);
    std::vector<double> sum_d(n_bins, 0.0), sum_sq(n_bins, 0.0);
    std::vector<std::size_t> count(n_bins, 0);
    const auto all = samples.samples();
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            const double d = dist(all[i], all[j].x, all[j].y);
            if (!(d > 0.0) || d > md) continue;
            const auto b = std::min(n_bins - 1, static_cast<std::size_t>(d / out.bin_width));
            const double diff = all[i].value - all[j].value;
            sum_d[b] += d;
            sum_sq[b] += diff * diff;
            ++count[b];
        }
    for (std::size_t b = 0; b < n_bins; ++b) {
        if (count[b] == 0) continue;
        const double c = static_cast<double>(count[b]);
        out.bins.push_back({sum_d[b] / c, 0.5 * sum_sq[b] / c, count[b]});
    }
    return out;
}

namespace {

struct LinearFit {
    double nugget = 0.0;
    double psill = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

// Weighted least squares of gamma ~ nugget + psill * shape(h / range) with
// nugget >= 0 and psill >= 0.
LinearFit fit_for_range(const EmpiricalVariogram& ev, VariogramKind kind, double range) {
    double sw = 0, sf = 0, sff = 0, sg = 0, sfg = 0;
    for (const auto& b : ev.bins) {
        const double w = static_cast<double>(b.pairs);
        const double f = unit_shape(kind, b.lag, range);
        sw += w;
        sf += w * f;
        sff += w * f * f;
        sg += w * b.gamma;
        sfg += w * f * b.gamma;
    }
    auto sse_of = [&](double n, double p) {
        double s = 0.0;
        for (const auto& b : ev.bins) {
            const double r = b.gamma - n - p * unit_shape(kind, b.lag, range);
            s += static_cast<double>(b.pairs) * r * r;
        }
        return s;
    };
    LinearFit best;
    auto consider = [&](double n, double p) {
        if (!(n >= 0.0) || !(p >= 0.0)) return;
        const double s = sse_of(n, p);
        if (s < best.sse) best = {n, p, s};
    };
    const double det = sw * sff - sf * sf;
    if (det > 1e-12 * sw * sff) consider((sff * sg - sf * sfg) / det, (sw * sfg - sf * sg) / det);
    if (sff > 0.0) consider(0.0, std::max(0.0, sfg / sff));
    consider(std::max(0.0, sg / sw), 0.0);
    return best;
}

} // namespace

VariogramModel fit_variogram(const EmpiricalVariogram& ev, VariogramKind kind) {
    if (ev.bins.size() < 3)
        throw ValidationError("variogram fit needs at least 3 non-empty lag bins");
    VariogramModel m;
    m.kind = kind;

    double max_gamma = 0.0;
    for (const auto& b : ev.bins) max_gamma = std::max(max_gamma, b.gamma);
    if (!(max_gamma > 0.0)) {
        m.nugget = 0.0;
        m.sill = std::numeric_limits<double>::epsilon();
        m.range_m = ev.max_dist;
        m.degenerate = true;
        return m;
    }

    // Ranges beyond the largest lag are not identifiable from the bins.
    const double lo = ev.bin_width;
    const double hi = std::max(ev.max_dist, lo);
    constexpr int grid_points = 64;
    std::vector<double> ranges(grid_points);
    for (int i = 0; i < grid_points; ++i)
        ranges[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, i / double(grid_points - 1));

    std::size_t best_i = 0;
    LinearFit best = fit_for_range(ev, kind, ranges[0]);
    for (std::size_t i = 1; i < ranges.size(); ++i) {
        const LinearFit f = fit_for_range(ev, kind, ranges[i]);
        if (f.sse < best.sse) {
            best = f;
            best_i = i;
        }
    }

    // Golden-section refinement between the neighbouring grid ranges.
    double a = ranges[best_i == 0 ? 0 : best_i - 1];
    double b = ranges[std::min(best_i + 1, ranges.size() - 1)];
    double best_range = ranges[best_i];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    LinearFit fc = fit_for_range(ev, kind, c);
    LinearFit fd = fit_for_range(ev, kind, d);
    for (int it = 0; it < 80 && (b - a) > 1e-9 * b; ++it) {
        if (fc.sse < fd.sse) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = fit_for_range(ev, kind, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = fit_for_range(ev, kind, d);
        }
    }
    if (fc.sse < best.sse) {
        best = fc;
        best_range = c;
    }
    if (fd.sse < best.sse) {
        best = fd;
        best_range = d;
    }

    // Structure must pay for its two extra parameters (small-sample AIC);
    // otherwise the curve is pure nugget and the range sits at the lower bound.
    double flat_sse = 0.0;
    double sw = 0.0;
    double sg = 0.0;
    for (const auto& bin : ev.bins) {
        sw += static_cast<double>(bin.pairs);
        sg += static_cast<double>(bin.pairs) * bin.gamma;
    }
    const double sill_only = sg / sw;
    for (const auto& bin : ev.bins)
        flat_sse += static_cast<double>(bin.pairs) * (bin.gamma - sill_only) * (bin.gamma - sill_only);
    const double n = static_cast<double>(ev.bins.size());
    auto aicc = [n](double sse, double k) {
        return n * std::log(sse / n) + 2 * k + 2 * k * (k + 1) / (n - k - 1);
    };
    const bool no_gain = flat_sse <= best.sse;
    if (n > 4.0 && (no_gain || (best.sse > 0.0 && aicc(flat_sse, 1) <= aicc(best.sse, 3)))) {
        best = {sill_only, 0.0, flat_sse};
        best_range = lo;
    }

    m.nugget = best.nugget;
    // Keep sill > nugget even for a pure-nugget fit.
    m.sill = best.nugget + std::max(best.psill, 1e-12 * max_gamma);
    m.range_m = best_range;
    return m;
}

VariogramModel fit_model_for(const SampleSet& samples, VariogramKind kind) {
    if (samples.size() >= 3) {
        const auto ev = empirical_semivariogram(samples);
        if (ev.bins.size() >= 3) return fit_variogram(ev, kind);
    }
    // Too few samples for a variogram: flat model scaled to the data.
    const auto all = samples.samples();
    double mean = 0.0;
    for (const auto& s : all) mean += s.value;
    mean /= static_cast<double>(all.size());
    double var = 0.0;
    for (const auto& s : all) var += (s.value - mean) * (s.value - mean);
    var /= static_cast<double>(all.size());
    const BoundingBox bb = samples.bbox();
    VariogramModel m;
    m.kind = kind;
    m.nugget = 0.0;
    m.sill = std::max(var, 1e-12);
    m.range_m = std::max(1.0, std::hypot(bb.max_x - bb.min_x, bb.max_y - bb.min_y));
    m.degenerate = true;
    return m;
}

// ---------------------------------------------------------------------------

KrigingWeights kriging_weights(const SampleSet& samples, const VariogramModel& model, double x,
                               double y, std::size_t k_neighbors) {
    model.validate();
    const auto all = samples.samples();
    KrigingWeights out;
    out.indices = nearest_samples(samples, x, y, k_neighbors);
    const std::size_t k = out.indices.size();

    if (dist(all[out.indices[0]], x, y) < coincidence_m) {
        out.weights.assign(k, 0.0);
        out.weights[0] = 1.0;
        return out;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto& a = all[out.indices[i]];
            const auto& b = all[out.indices[j]];
            if (dist(a, b.x, b.y) < coincidence_m) {
                std::ostringstream msg;
                msg << "singular kriging system: samples #" << out.indices[i] << " (" << a.x
                    << ", " << a.y << ") and #" << out.indices[j] << " (" << b.x << ", " << b.y
                    << ") coincide";
                throw SingularSystemError(msg.str());
            }
        }

    const auto dim = static_cast<Eigen::Index>(k + 1);
    Eigen::MatrixXd lhs(dim, dim);
    Eigen::VectorXd rhs(dim);
    for (std::size_t i = 0; i < k; ++i) {
        const auto& a = all[out.indices[i]];
        const auto ii = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < k; ++j) {
            const auto& b = all[out.indices[j]];
            lhs(ii, static_cast<Eigen::Index>(j)) = i == j ? 0.0 : model(dist(a, b.x, b.y));
        }
        lhs(ii, dim - 1) = 1.0;
        lhs(dim - 1, ii) = 1.0;
        rhs(ii) = model(dist(a, x, y));
    }
    lhs(dim - 1, dim - 1) = 0.0;
    rhs(dim - 1) = 1.0;

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(lhs);
    if (!lu.isInvertible()) throw SingularSystemError("singular kriging system");
    const Eigen::VectorXd sol = lu.solve(rhs);
    out.weights.resize(k);
    for (std::size_t i = 0; i < k; ++i) out.weights[i] = sol(static_cast<Eigen::Index>(i));
    out.lagrange = sol(dim - 1);
    return out;
}

KrigingPrediction kriging_predict(const SampleSet& samples, const VariogramModel& model, double x,
                                  double y, std::size_t k_neighbors) {
    const auto all = samples.samples();
    const KrigingWeights kw = kriging_weights(samples, model, x, y, k_neighbors);
    if (dist(all[kw.indices[0]], x, y) < coincidence_m) return {all[kw.indices[0]].value, 0.0};
    KrigingPrediction p;
    p.variance = kw.lagrange;
    for (std::size_t i = 0; i < kw.indices.size(); ++i) {
        const auto& s = all[kw.indices[i]];
        p.value += kw.weights[i] * s.value;
        p.variance += kw.weights[i] * model(dist(s, x, y));
    }
    p.variance = std::max(0.0, p.variance);
    return p;
}

RasterGrid interpolate_grid(const SampleSet& samples, InterpMethod method,
                            const RasterGrid& target, const InterpOptions& options) {
    RasterGrid out = target.like(0.0);
    std::optional<VariogramModel> model;
    if (method == InterpMethod::kriging)
        model = options.model ? *options.model : fit_model_for(samples, options.variogram);
    const std::int64_t ncols = out.ncols();
    detail::parallel_for(out.size(), [&](std::size_t i) {
        const auto row = static_cast<std::int64_t>(i) / ncols;
        const auto col = static_cast<std::int64_t>(i) % ncols;
        const Point2 c = cell_center(out, row, col);
        out.values()[i] = method == InterpMethod::idw
                              ? idw_predict(samples, c.x, c.y, options.idw_power, options.idw_k)
                              : kriging_predict(samples, *model, c.x, c.y, options.kriging_k).value;
    });
    return out;
}

RasterGrid fill_gaps_kriging(const RasterGrid& grid, const InterpOptions& options,
                             std::size_t max_variogram_samples) {
    std::vector<StationSample> valid;
    std::vector<std::size_t> gaps;
    for (std::int64_t r = 0; r < grid.nrows(); ++r)
        for (std::int64_t c = 0; c < grid.ncols(); ++c) {
            if (grid.is_nodata(r, c)) {
                gaps.push_back(static_cast<std::size_t>(r * grid.ncols() + c));
                continue;
            }
            const Point2 p = cell_center(grid, r, c);
            valid.push_back({p.x, p.y, grid.at(r, c)});
        }
    if (gaps.empty()) return grid;
    if (valid.empty()) throw ComputationError("raster has no valid cells to fill gaps from");

    const SampleSet samples(valid);
    VariogramModel model;
    if (options.model) {
        model = *options.model;
    } else {
        std::vector<StationSample> subset;
        const std::size_t stride =
            std::max<std::size_t>(1, (valid.size() + max_variogram_samples - 1) /
                                         std::max<std::size_t>(1, max_variogram_samples));
        for (std::size_t i = 0; i < valid.size(); i += stride) subset.push_back(valid[i]);
        model = fit_model_for(SampleSet(subset), options.variogram);
    }

    RasterGrid out = grid;
    const std::int64_t ncols = grid.ncols();
    detail::parallel_for(gaps.size(), [&](std::size_t g) {
        const auto i = static_cast<std::int64_t>(gaps[g]);
        const Point2 c = cell_center(grid, i / ncols, i % ncols);
        out.values()[gaps[g]] = kriging_predict(samples, model, c.x, c.y, options.kriging_k).value;
    });
    return out;
}

} // namespace greenprior
