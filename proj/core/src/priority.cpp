#include "greenprior/priority.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "greenprior/errors.hpp"
#include "parallel.hpp"

namespace greenprior {

namespace {

bool column_is_constant(const Eigen::MatrixXd& m, Eigen::Index j) {
    return m.col(j).maxCoeff() == m.col(j).minCoeff();
}

double population_std(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().mean());
}

WeightVector normalize_or_equal(const Eigen::VectorXd& raw) {
    const double total = raw.sum();
    if (!(total > 0.0)) return equal_weights(raw.size());
    return raw / total;
}

void require_matrix(const Eigen::MatrixXd& m, Eigen::Index min_rows) {
    if (m.cols() == 0) throw ValidationError("weighting needs at least one column");
    if (m.rows() < min_rows)
        throw ValidationError("weighting needs at least " + std::to_string(min_rows) + " rows");
    if (!m.allFinite()) throw ValidationError("weighting input must be finite");
}

} // namespace

std::optional<WeightingScheme> weighting_scheme_from_string(std::string_view s) noexcept {
    for (auto scheme : all_weighting_schemes)
        if (to_string(scheme) == s) return scheme;
    return std::nullopt;
}

std::string_view to_string(WeightingScheme s) noexcept {
    switch (s) {
    case WeightingScheme::equal: return "equal";
    case WeightingScheme::entropy: return "entropy";
    case WeightingScheme::cv: return "cv";
    case WeightingScheme::critic: return "critic";
    }
    return "equal";
}

Eigen::MatrixXd indicator_matrix(std::span<const IndicatorVector> rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(IndicatorVector::size));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto a = rows[i].as_array();
        for (std::size_t j = 0; j < a.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a[j];
    }
    return m;
}

WeightVector equal_weights(Eigen::Index columns) {
    if (columns <= 0) throw ValidationError("weighting needs at least one column");
    return WeightVector::Constant(columns, 1.0 / static_cast<double>(columns));
}

WeightVector entropy_weights(const Eigen::MatrixXd& m) {
    require_matrix(m, 2);
    if ((m.array() < 0.0).any() || (m.array() > 1.0).any())
        throw ValidationError("entropy weighting needs values in [0, 1]");
    const double n = static_cast<double>(m.rows());
    Eigen::VectorXd divergence = Eigen::VectorXd::Zero(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (column_is_constant(m, j)) continue;
        const Eigen::ArrayXd v = m.col(j).array().max(1e-9);
        const Eigen::ArrayXd p = v / v.sum();
        const double e = -(p * p.log()).sum() / std::log(n);
        divergence(j) = std::max(0.0, 1.0 - e);
    }
    return normalize_or_equal(divergence);
}

CvWeights cv_weights_detailed(const Eigen::MatrixXd& m) {
    require_matrix(m, 1);
    CvWeights out;
    Eigen::VectorXd raw = Eigen::VectorXd::Zero(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const Eigen::VectorXd col = m.col(j);
        const double sd = population_std(col);
        const double mean = std::abs(col.mean());
        if (mean == 0.0) {
            out.zero_mean_columns.push_back(j);
            raw(j) = sd;
        } else {
            raw(j) = sd / mean;
        }
    }
    out.weights = normalize_or_equal(raw);
    return out;
}

WeightVector cv_weights(const Eigen::MatrixXd& m) { return cv_weights_detailed(m).weights; }

WeightVector critic_weights(const Eigen::MatrixXd& m) {
    require_matrix(m, 2);
    const Eigen::Index k = m.cols();
    Eigen::MatrixXd centered = m.rowwise() - m.colwise().mean();
    Eigen::VectorXd sd(k);
    for (Eigen::Index j = 0; j < k; ++j) sd(j) = population_std(m.col(j));

    Eigen::VectorXd info = Eigen::VectorXd::Zero(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        if (column_is_constant(m, j)) continue;
        double contrast = 0.0;
        for (Eigen::Index l = 0; l < k; ++l) {
            double r = 0.0;
            if (l == j) {
                r = 1.0;
            } else if (!column_is_constant(m, l)) {
                const double cov = centered.col(j).dot(centered.col(l));
                const double norm = centered.col(j).norm() * centered.col(l).norm();
                r = std::clamp(cov / norm, -1.0, 1.0);
            }
            contrast += 1.0 - r;
        }
        info(j) = sd(j) * contrast;
    }
    return normalize_or_equal(info);
}

WeightVector scheme_weights(WeightingScheme scheme, const Eigen::MatrixXd& m) {
    switch (scheme) {
    case WeightingScheme::equal: return equal_weights(m.cols());
    case WeightingScheme::entropy: return entropy_weights(m);
    case WeightingScheme::cv: return cv_weights(m);
    case WeightingScheme::critic: return critic_weights(m);
    }
    return equal_weights(m.cols());
}

double equal_weight_priority(const IndicatorVector& v) noexcept {
    return (v.greenspace + v.road + v.category + v.income + v.temperature + v.precipitation) /
           6.0;
}

double weighted_priority(const IndicatorVector& v, const WeightVector& w) {
    if (w.size() != static_cast<Eigen::Index>(IndicatorVector::size))
        throw ValidationError("priority needs six weights");
    const auto a = v.as_array();
    double p = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) p += w(static_cast<Eigen::Index>(j)) * a[j];
    return std::clamp(p, 0.0, 1.0);
}

std::vector<double> score_buildings(std::span<const IndicatorVector> rows, const WeightVector& w) {
    std::vector<double> out(rows.size());
    detail::parallel_for(rows.size(), [&](std::size_t i) { out[i] = weighted_priority(rows[i], w); });
    return out;
}

std::vector<PriorityScore> rank_buildings(std::span<const std::string> ids,
                                          std::span<const double> priorities) {
    if (ids.size() != priorities.size())
        throw ValidationError("ranking needs one priority per building");
    std::vector<PriorityScore> out(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out[i].building_id = ids[i];
        out[i].priority = priorities[i];
    }
    std::sort(out.begin(), out.end(), [](const PriorityScore& a, const PriorityScore& b) {
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.building_id < b.building_id;
    });
    const auto n = static_cast<std::int64_t>(out.size());
    for (std::int64_t i = 0; i < n; ++i) {
        auto& s = out[static_cast<std::size_t>(i)];
        s.rank = i + 1;
        s.percentile = n == 1 ? 100.0
                              : 100.0 * static_cast<double>(n - s.rank) / static_cast<double>(n - 1);
    }
    return out;
}

PrioritySummary summarize_priorities(std::span<const double> priorities) noexcept {
    PrioritySummary s;
    s.count = priorities.size();
    if (priorities.empty()) return s;
    std::size_t above = 0;
    double sum = 0.0;
    s.max = priorities.front();
    for (double p : priorities) {
        above += p > 0.5 ? 1 : 0;
        sum += p;
        s.max = std::max(s.max, p);
    }
    s.share_above_half = static_cast<double>(above) / static_cast<double>(s.count);
    s.mean = sum / static_cast<double>(s.count);
    return s;
}

} // namespace greenprior
