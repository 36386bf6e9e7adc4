#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "pbemo/mixture.hpp"
#include "pbemo/types.hpp"

namespace pbemo::elicitation {

/// Raised when a session produced no wins or no losses to learn from.
class InsufficientFeedback : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SampleSets {
    std::vector<Vector> winners; ///< X_v: solution i repeated v_i times
    std::vector<Vector> losers;  ///< X_l: solution i repeated l_i times
};

SampleSets expand_samples(std::span<const Vector> decisions, std::span<const std::size_t> wins,
                          std::span<const std::size_t> losses);

/// Stacked element-wise powers (x, x^2, ..., x^k); length n*k.
Vector moment_features(std::span<const double> x, std::size_t k);

struct RatioEstimate {
    std::vector<Vector> samples; ///< the losing samples X_l
    Vector weights;              ///< estimated p_v/p_l at each sample, clipped at zero
    bool fallback = false;       ///< true when uniform weights replaced a degenerate solve
};

inline constexpr std::size_t default_moment_order = 2;
inline constexpr double default_ridge = 1e-6;

/// Moment-matching density-ratio estimate on the losing samples:
///   (Phi_l^T Phi_l + ridge I) p = (N_l / N_v) Phi_l^T Phi_v 1.
RatioEstimate estimate_density_ratio(std::span<const Vector> losers, std::span<const Vector> winners,
                                     std::size_t k = default_moment_order,
                                     double ridge = default_ridge);

/// Weighted mean and diagonal variance of the losing samples under the
/// normalised ratio weights.
GaussianComponent fit_gaussian(const RatioEstimate& estimate, std::size_t session);

} // namespace pbemo::elicitation
