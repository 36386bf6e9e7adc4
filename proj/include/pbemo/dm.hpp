#pragma once

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "pbemo/types.hpp"

namespace pbemo::dm {

enum class Winner { first, second };

std::string_view to_string(Winner w) noexcept;
/// Parses "first" / "second"; throws std::invalid_argument otherwise.
Winner parse_winner(std::string_view s);

/// One pairwise question: is `a` better than `b`? The indices and cluster
/// ids are bookkeeping for logs and transports; oracles judge the solutions.
struct DuelQuery {
    const Solution& a;
    const Solution& b;
    std::size_t round = 0;
    std::size_t first_cluster = 0;
    std::size_t second_cluster = 0;
    std::size_t index_a = 0;
    std::size_t index_b = 0;
};

/// Raised by an oracle that cannot answer (timeout, cancellation).
class DmAborted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The only component that sees solution pairs and says which one wins.
class DmOracle {
public:
    virtual ~DmOracle() = default;
    virtual Winner answer(const DuelQuery& query) = 0;
    virtual bool stochastic() const noexcept = 0;
    virtual bool interactive() const noexcept = 0;
};

inline constexpr double default_sigma_star = 0.1;

/// Logistic link mu(a) = 1 / (1 + exp(-a)).
double logistic(double a) noexcept;

/// Gaussian preference around a golden point z* in objective space. In
/// stochastic mode the first solution wins with probability
/// mu(Pr(F(a)) - Pr(F(b))); otherwise the denser one wins, exact ties by a coin.
class SimulatedDm final : public DmOracle {
public:
    SimulatedDm(Vector golden, double sigma_star, bool stochastic, std::uint64_t seed);

    Winner answer(const DuelQuery& query) override;
    bool stochastic() const noexcept override { return stochastic_; }
    bool interactive() const noexcept override { return false; }

    const Vector& golden() const noexcept { return golden_; }
    double sigma_star() const noexcept { return sigma_; }

    /// N(F | z*, sigma*^2 I).
    double density(std::span<const double> objectives) const;
    /// Probability that `a` beats `b` in stochastic mode.
    double win_probability(std::span<const double> fa, std::span<const double> fb) const;

    /// Decides with an explicit generator; `answer` uses the oracle's own stream.
    Winner decide(std::span<const double> fa, std::span<const double> fb, Rng& rng) const;

private:
    Vector golden_;
    double sigma_;
    bool stochastic_;
    Rng rng_;
};

/// Stream for the simulated DM of a run, independent of the run's own stream.
Rng dm_stream(std::uint64_t seed);

double sim_pref_density(const SimulatedDm& dm, const Solution& s);
Winner sim_answer(const SimulatedDm& dm, const Solution& a, const Solution& b, Rng& rng);

} // namespace pbemo::dm
