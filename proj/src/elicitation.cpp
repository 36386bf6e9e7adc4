#include "pbemo/elicitation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace pbemo::elicitation {

SampleSets expand_samples(std::span<const Vector> decisions, std::span<const std::size_t> wins,
                          std::span<const std::size_t> losses)
{
    if (wins.size() != decisions.size() || losses.size() != decisions.size())
        throw std::invalid_argument("expand_samples: counter length differs from population size");
    const auto total_wins = std::accumulate(wins.begin(), wins.end(), std::size_t{0});
    const auto total_losses = std::accumulate(losses.begin(), losses.end(), std::size_t{0});
    if (total_wins == 0 || total_losses == 0)
        throw InsufficientFeedback("session recorded no wins or no losses");

    SampleSets out;
    out.winners.reserve(total_wins);
    out.losers.reserve(total_losses);
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        out.winners.insert(out.winners.end(), wins[i], decisions[i]);
        out.losers.insert(out.losers.end(), losses[i], decisions[i]);
    }
    return out;
}

Vector moment_features(std::span<const double> x, std::size_t k)
{
    if (k == 0) throw std::invalid_argument("moment order must be >= 1");
    const std::size_t n = x.size();
    Vector phi(n * k);
    for (std::size_t d = 0; d < n; ++d) {
        double p = 1.0;
        for (std::size_t order = 0; order < k; ++order) {
            p *= x[d];
            phi[order * n + d] = p;
        }
    }
    return phi;
}

RatioEstimate estimate_density_ratio(std::span<const Vector> losers, std::span<const Vector> winners,
                                     std::size_t k, double ridge)
{
    if (losers.empty() || winners.empty())
        throw std::invalid_argument("density ratio needs non-empty winning and losing samples");

    const std::size_t n_l = losers.size();
    const std::size_t n_v = winners.size();
    const std::size_t dim = losers.front().size() * k;

    // Rows are feature vectors: L is N_l x dim.
    Eigen::MatrixXd L(n_l, dim);
    for (std::size_t i = 0; i < n_l; ++i) {
        const Vector phi = moment_features(losers[i], k);
        L.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(phi.data(), phi.size());
    }
    Eigen::VectorXd winner_mean = Eigen::VectorXd::Zero(dim);
    for (const auto& x : winners) {
        const Vector phi = moment_features(x, k);
        winner_mean += Eigen::Map<const Eigen::VectorXd>(phi.data(), phi.size());
    }
    winner_mean /= static_cast<double>(n_v);

    // (L L^T + rI)^{-1} L = L (L^T L + rI)^{-1}, so the N_l x N_l system
    // collapses to a dim x dim one:  p = N_l L (L^T L + rI)^{-1} mean_v.
    Eigen::MatrixXd gram = L.transpose() * L;
    gram.diagonal().array() += ridge;
    const Eigen::VectorXd coef = gram.ldlt().solve(winner_mean);
    const Eigen::VectorXd p = static_cast<double>(n_l) * (L * coef);

    RatioEstimate out;
    out.samples.assign(losers.begin(), losers.end());
    out.weights.resize(n_l);
    bool finite = true;
    for (std::size_t i = 0; i < n_l; ++i) {
        const double w = p(static_cast<Eigen::Index>(i));
        finite = finite && std::isfinite(w);
        out.weights[i] = std::max(0.0, w);
    }
    const double total = std::accumulate(out.weights.begin(), out.weights.end(), 0.0);
    if (!finite || !(total > 0.0)) {
        std::fill(out.weights.begin(), out.weights.end(), 1.0);
        out.fallback = true;
    }
    return out;
}

GaussianComponent fit_gaussian(const RatioEstimate& estimate, std::size_t session)
{
    const double total = std::accumulate(estimate.weights.begin(), estimate.weights.end(), 0.0);
    if (!(total > 0.0) || estimate.samples.empty())
        throw std::invalid_argument("fit_gaussian: ratio weights sum to zero");

    const std::size_t n = estimate.samples.front().size();
    GaussianComponent c;
    c.session = session;
    c.mean.assign(n, 0.0);
    Vector second(n, 0.0);
    for (std::size_t i = 0; i < estimate.samples.size(); ++i) {
        const double w = estimate.weights[i] / total;
        const auto& x = estimate.samples[i];
        for (std::size_t d = 0; d < n; ++d) {
            c.mean[d] += w * x[d];
            second[d] += w * x[d] * x[d];
        }
    }
    c.variance.resize(n);
    for (std::size_t d = 0; d < n; ++d)
        c.variance[d] = std::max(variance_floor, second[d] - c.mean[d] * c.mean[d]);
    c.sigma = *std::max_element(c.variance.begin(), c.variance.end());
    return c;
}

} // namespace pbemo::elicitation
