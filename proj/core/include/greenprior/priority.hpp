#pragma once

// Greening priority: the equal-weight mean of the six indicators, plus the
// objective weighting schemes it is compared against.

#include <Eigen/Core>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "greenprior/records.hpp"

namespace greenprior {

enum class WeightingScheme { equal, entropy, cv, critic };

inline constexpr std::array<WeightingScheme, 4> all_weighting_schemes = {
    WeightingScheme::equal, WeightingScheme::entropy, WeightingScheme::cv,
    WeightingScheme::critic};

std::optional<WeightingScheme> weighting_scheme_from_string(std::string_view s) noexcept;
std::string_view to_string(WeightingScheme s) noexcept;

/// Non-negative weights, one per column, summing to 1.
using WeightVector = Eigen::VectorXd;

/// Rows are buildings, columns indicators.
Eigen::MatrixXd indicator_matrix(std::span<const IndicatorVector> rows);

WeightVector equal_weights(Eigen::Index columns);

/// Entropy weights. Values are floored at 1e-9 before taking shares;
/// constant columns (including all-zero ones) carry no information.
/// Needs at least two rows and values in [0, 1].
WeightVector entropy_weights(const Eigen::MatrixXd& m);

struct CvWeights {
    WeightVector weights;
    std::vector<Eigen::Index> zero_mean_columns; // weighted by std alone
};

/// Coefficient-of-variation weights (population std over |mean|).
CvWeights cv_weights_detailed(const Eigen::MatrixXd& m);
WeightVector cv_weights(const Eigen::MatrixXd& m);

/// CRITIC weights: std times the summed correlation contrast. Correlation
/// with a constant column is taken as 0.
WeightVector critic_weights(const Eigen::MatrixXd& m);

/// Every scheme falls back to equal weights when no column varies.
WeightVector scheme_weights(WeightingScheme scheme, const Eigen::MatrixXd& m);

/// Mean of the six indicators.
double equal_weight_priority(const IndicatorVector& v) noexcept;

/// Dot product with a six-element weight vector.
double weighted_priority(const IndicatorVector& v, const WeightVector& w);

std::vector<double> score_buildings(std::span<const IndicatorVector> rows, const WeightVector& w);

struct PriorityScore {
    std::string building_id;
    double priority = 0.0;
    std::int64_t rank = 0;    // 1-based
    double percentile = 0.0;  // 100 for the top building
};

/// Sorted by priority descending, ties by id ascending.
std::vector<PriorityScore> rank_buildings(std::span<const std::string> ids,
                                          std::span<const double> priorities);

struct PrioritySummary {
    std::size_t count = 0;
    double share_above_half = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

PrioritySummary summarize_priorities(std::span<const double> priorities) noexcept;

} // namespace greenprior
