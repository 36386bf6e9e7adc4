#include "pbemo/dm.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace pbemo::dm {

std::string_view to_string(Winner w) noexcept { return w == Winner::first ? "first" : "second"; }

Winner parse_winner(std::string_view s)
{
    if (s == "first") return Winner::first;
    if (s == "second") return Winner::second;
    throw std::invalid_argument("winner must be \"first\" or \"second\", got \"" + std::string(s) + "\"");
}

double logistic(double a) noexcept { return 1.0 / (1.0 + std::exp(-a)); }

Rng dm_stream(std::uint64_t seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 1u};
    return Rng(seq);
}

SimulatedDm::SimulatedDm(Vector golden, double sigma_star, bool stochastic, std::uint64_t seed)
    : golden_(std::move(golden)), sigma_(sigma_star), stochastic_(stochastic), rng_(dm_stream(seed))
{
    if (golden_.empty()) throw std::invalid_argument("simulated DM needs a golden point");
    if (!(sigma_ > 0.0)) throw std::invalid_argument("simulated DM needs sigma_star > 0");
}

double SimulatedDm::density(std::span<const double> f) const
{
    if (f.size() != golden_.size()) throw std::invalid_argument("objective vector and golden point differ in size");
    double sq = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) sq += (f[i] - golden_[i]) * (f[i] - golden_[i]);
    const double var = sigma_ * sigma_;
    const double m = static_cast<double>(f.size());
    return std::exp(-0.5 * sq / var) / std::pow(2.0 * std::numbers::pi * var, 0.5 * m);
}

double SimulatedDm::win_probability(std::span<const double> fa, std::span<const double> fb) const
{
    return logistic(density(fa) - density(fb));
}

Winner SimulatedDm::decide(std::span<const double> fa, std::span<const double> fb, Rng& rng) const
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (stochastic_) return u(rng) < win_probability(fa, fb) ? Winner::first : Winner::second;
    // Distances order the same way as densities and do not underflow.
    double da = 0.0, db = 0.0;
    for (std::size_t i = 0; i < golden_.size(); ++i) {
        da += (fa[i] - golden_[i]) * (fa[i] - golden_[i]);
        db += (fb[i] - golden_[i]) * (fb[i] - golden_[i]);
    }
    if (da != db) return da < db ? Winner::first : Winner::second;
    return u(rng) < 0.5 ? Winner::first : Winner::second;
}

Winner SimulatedDm::answer(const DuelQuery& query) { return decide(query.a.f, query.b.f, rng_); }

double sim_pref_density(const SimulatedDm& dm, const Solution& s) { return dm.density(s.f); }

Winner sim_answer(const SimulatedDm& dm, const Solution& a, const Solution& b, Rng& rng)
{
    return dm.decide(a.f, b.f, rng);
}

} // namespace pbemo::dm
