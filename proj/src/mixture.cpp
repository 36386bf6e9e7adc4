#include "pbemo/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pbemo::elicitation {
namespace {

double log_sum_exp(std::span<const double> terms)
{
    const double top = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(top)) return top;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - top);
    return top + std::log(s);
}

} // namespace

double GaussianComponent::log_density(std::span<const double> x) const
{
    if (x.size() != mean.size()) throw std::invalid_argument("component density: dimension mismatch");
    double acc = 0.0;
    for (std::size_t d = 0; d < mean.size(); ++d) {
        const double diff = x[d] - mean[d];
        acc += std::log(2.0 * std::numbers::pi * variance[d]) + diff * diff / variance[d];
    }
    return -0.5 * acc;
}

Vector PreferenceMixture::weights() const
{
    Vector w;
    w.reserve(components_.size());
    for (const auto& c : components_) w.push_back((1.0 / c.sigma) / z_);
    return w;
}

void PreferenceMixture::add(GaussianComponent component)
{
    if (!(component.sigma > 0.0)) throw std::invalid_argument("mixture component needs sigma > 0");
    components_.push_back(std::move(component));
    // Recomputed from scratch so Z does not depend on insertion history.
    z_ = 0.0;
    for (const auto& c : components_) z_ += 1.0 / c.sigma;
}

double PreferenceMixture::log_density(std::span<const double> x) const
{
    if (empty()) throw std::logic_error("density of an empty preference mixture");
    Vector terms;
    terms.reserve(components_.size());
    for (const auto& c : components_) terms.push_back(std::log((1.0 / c.sigma) / z_) + c.log_density(x));
    return log_sum_exp(terms);
}

double PreferenceMixture::density(std::span<const double> x) const { return std::exp(log_density(x)); }

nlohmann::json PreferenceMixture::snapshot() const
{
    auto comps = nlohmann::json::array();
    const Vector w = weights();
    for (std::size_t i = 0; i < components_.size(); ++i) {
        const auto& c = components_[i];
        comps.push_back({{"session", c.session},
                         {"mean", c.mean},
                         {"variance", c.variance},
                         {"sigma", c.sigma},
                         {"weight", w[i]}});
    }
    return {{"normalizer", z_}, {"components", comps}};
}

PreferenceMixture mixture_update(const PreferenceMixture& mix, GaussianComponent component)
{
    PreferenceMixture next = mix;
    next.add(std::move(component));
    return next;
}

double mixture_density(const PreferenceMixture& mix, std::span<const double> x) { return mix.density(x); }

double kl_between_sessions(const PreferenceMixture& previous, const PreferenceMixture& current,
                           std::span<const Vector> samples)
{
    if (previous.empty() || current.empty()) throw std::invalid_argument("KL needs two non-empty mixtures");
    if (samples.empty()) throw std::invalid_argument("KL needs at least one sample");

    // Log space: densities in high dimension underflow long before they are
    // meaningfully zero.
    Vector lp, lq;
    lp.reserve(samples.size());
    lq.reserve(samples.size());
    for (const auto& x : samples) {
        lp.push_back(previous.log_density(x));
        lq.push_back(current.log_density(x));
    }
    const double zp = log_sum_exp(lp);
    const double zq = log_sum_exp(lq);
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double log_p = lp[i] - zp;
        const double log_q = lq[i] - zq;
        d += std::exp(log_p) * (log_p - log_q);
    }
    return d;
}

} // namespace pbemo::elicitation
