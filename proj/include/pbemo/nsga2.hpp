#pragma once

#include <span>
#include <variant>
#include <vector>

#include "pbemo/mixture.hpp"
#include "pbemo/operators.hpp"
#include "pbemo/problems.hpp"
#include "pbemo/types.hpp"

namespace pbemo::evolution {

struct Population {
    std::vector<Solution> members;
    std::size_t generation = 0;
};

/// N random members, evaluated.
Population random_population(const problems::ProblemSpec& spec, std::size_t size, Rng& rng);

using Fronts = std::vector<std::vector<std::size_t>>;

/// Deb's fast non-dominated sort. Throws std::invalid_argument on empty input.
Fronts fast_nondominated_sort(std::span<const Vector> objectives);

/// Crowding distance of each member of one front (+inf at the boundaries).
Vector crowding_distance(std::span<const Vector> front);

/// Mixture density of each member's decision vector.
/// Throws std::logic_error on an empty mixture; callers fall back to crowding_distance.
Vector preference_crowding(std::span<const Vector> decisions, const elicitation::PreferenceMixture& mixture);

/// Truncation rule for the last accepted front.
struct CrowdingSurvival {};
struct PreferenceSurvival {
    const elicitation::PreferenceMixture* mixture = nullptr;
};
using Survival = std::variant<CrowdingSurvival, PreferenceSurvival>;

/// Keeps `size` members of `merged`: whole fronts first, the last front
/// truncated by the survival score (highest kept). Returns member indices.
std::vector<std::size_t> environmental_selection(std::span<const Solution> merged, std::size_t size,
                                                 const Survival& survival);

/// One NSGA-II generation: binary tournament, SBX + mutation, merge and
/// environmental selection.
Population nsga2_generation(const problems::ProblemSpec& spec, const Population& pop,
                            const GeneticParams& params, const Survival& survival, Rng& rng);

} // namespace pbemo::evolution
