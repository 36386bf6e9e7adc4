#pragma once

#include <span>
#include <utility>
#include <vector>

#include "pbemo/mixture.hpp"
#include "pbemo/nsga2.hpp"
#include "pbemo/operators.hpp"
#include "pbemo/problems.hpp"

namespace pbemo::evolution {

/// Weight vectors on the unit simplex with their neighbourhoods.
struct WeightSet {
    std::vector<Vector> weights;
    std::vector<std::vector<std::size_t>> neighborhoods;

    std::size_t size() const noexcept { return weights.size(); }

    /// N well-spread simplex vectors (simplex lattice thinned to N) with
    /// neighbourhoods of size ceil(0.1 N).
    static WeightSet uniform(std::size_t count, std::size_t m);
};

/// Neighbourhoods of size `t` by Euclidean distance between weights (self first).
std::vector<std::vector<std::size_t>> weight_neighborhoods(std::span<const Vector> weights, std::size_t t);

/// Inverse Tchebycheff: max_i |f_i - z_i| / w_i. Its optimum for weight w lies
/// on the ray from the ideal point along w.
double tchebycheff(std::span<const double> f, std::span<const double> weight, std::span<const double> ideal);

/// Component minimum over the population.
Vector ideal_point(std::span<const Solution> members);

inline constexpr std::size_t max_replacements = 2;

/// One MOEA/D generation. Each subproblem mates within its neighbourhood,
/// updates the ideal point and replaces at most two worse neighbours.
std::pair<Population, Vector> moead_generation(const problems::ProblemSpec& spec, const Population& pop,
                                               const WeightSet& weights, const Vector& ideal,
                                               const GeneticParams& params, Rng& rng);

/// A mixture component re-expressed in objective space: its mean is the
/// objective vector of the component mean relative to the ideal point.
struct ObjectiveComponent {
    Vector mean;
    double sigma = 1.0; ///< variance, reused isotropically
};

std::vector<ObjectiveComponent> objective_image(const elicitation::PreferenceMixture& mixture,
                                                const problems::ProblemSpec& spec, std::span<const double> ideal);

/// Maps each weight through the mixture-weighted per-dimension inverse
/// Gaussian CDF, then back onto the simplex. An empty mixture is the identity.
WeightSet transform_weights(const WeightSet& weights, std::span<const ObjectiveComponent> components);

} // namespace pbemo::evolution
