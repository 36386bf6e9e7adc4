#pragma once

#include <span>
#include <vector>

#include "pbemo/types.hpp"

namespace pbemo::metrics {

/// epsilon*: smallest Euclidean distance from a member to z*.
double approx_accuracy(std::span<const Vector> objectives, std::span<const double> golden);

/// epsilon-bar: mean Euclidean distance from the members to z*.
double avg_accuracy(std::span<const Vector> objectives, std::span<const double> golden);

struct Accuracy {
    double eps_star = 0.0;
    double eps_bar = 0.0;
};

Accuracy accuracy(std::span<const Vector> objectives, std::span<const double> golden);

/// Combined sample size up to which the null distribution is enumerated.
inline constexpr std::size_t rank_sum_exact_limit = 20;

enum class RankSumMethod { automatic, exact, normal };

struct RankSumResult {
    double statistic = 0.0; ///< rank sum of the first sample (mid-ranks for ties)
    double p_value = 1.0;   ///< two-sided
    bool significant = false;
    bool exact = false;
};

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) test. Each sample needs at
/// least 4 values (std::invalid_argument otherwise).
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double level = 0.05,
                                RankSumMethod method = RankSumMethod::automatic);

/// Mid-ranks (1-based) of the values.
Vector mid_ranks(std::span<const double> values);

} // namespace pbemo::metrics
