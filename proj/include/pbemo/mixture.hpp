#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "pbemo/types.hpp"

namespace pbemo::elicitation {

/// Variance floor shared by the Gaussian fit and the mixture.
inline constexpr double variance_floor = 1e-8;

/// Default KL threshold for stopping consultation.
inline constexpr double default_kl_threshold = 1e-3;

/// One diagonal Gaussian learned from a consultation session.
struct GaussianComponent {
    Vector mean;
    Vector variance;     ///< diagonal of the covariance, each >= variance_floor
    double sigma = 1.0;  ///< largest diagonal element
    std::size_t session = 0;

    double log_density(std::span<const double> x) const;
};

/// Inverse-variance weighted mixture of the per-session Gaussians:
///   Pr(x) = (1/Z) sum_t (1/sigma_t) N(x | mean_t, diag(variance_t)),  Z = sum_t 1/sigma_t.
class PreferenceMixture {
public:
    PreferenceMixture() = default;

    bool empty() const noexcept { return components_.empty(); }
    std::size_t size() const noexcept { return components_.size(); }
    const std::vector<GaussianComponent>& components() const noexcept { return components_; }
    double normalizer() const noexcept { return z_; }

    /// Component weights (1/sigma_t)/Z, in insertion order.
    Vector weights() const;

    void add(GaussianComponent component);

    /// log Pr(x). Throws std::logic_error when empty.
    double log_density(std::span<const double> x) const;
    double density(std::span<const double> x) const;

    nlohmann::json snapshot() const;

private:
    std::vector<GaussianComponent> components_;
    double z_ = 0.0;
};

/// Returns a copy of `mix` with `component` appended and Z recomputed.
PreferenceMixture mixture_update(const PreferenceMixture& mix, GaussianComponent component);

double mixture_density(const PreferenceMixture& mix, std::span<const double> x);

/// Discrete KL estimate between consecutive sessions' mixtures. Both
/// densities are normalised over the sample set before sum p ln(p/q).
double kl_between_sessions(const PreferenceMixture& previous, const PreferenceMixture& current,
                           std::span<const Vector> samples);

inline bool should_terminate(double divergence, double threshold = default_kl_threshold)
{
    return divergence < threshold;
}

} // namespace pbemo::elicitation
