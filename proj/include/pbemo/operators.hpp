#pragma once

#include <span>
#include <utility>

#include "pbemo/types.hpp"

namespace pbemo::evolution {

/// SBX and polynomial-mutation settings.
struct GeneticParams {
    double pc = 1.0;     ///< crossover probability
    double eta_c = 20.0; ///< SBX distribution index
    double pm = 0.0;     ///< per-gene mutation probability
    double eta_m = 20.0; ///< mutation distribution index

    /// pc = 1, eta_c = 20, pm = 1/n, eta_m = 20.
    static GeneticParams defaults(std::size_t n)
    {
        return GeneticParams{1.0, 20.0, 1.0 / static_cast<double>(n), 20.0};
    }
};

/// Variable bounds shared by the operators.
struct Box {
    std::span<const double> lower;
    std::span<const double> upper;
};

/// Bounded simulated binary crossover. Children are clamped into the box.
std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                        const Box& box, const GeneticParams& params, Rng& rng);

/// Bounded polynomial mutation, each gene with probability pm.
Vector polynomial_mutation(std::span<const double> x, const Box& box, const GeneticParams& params, Rng& rng);

/// Uniform random point in the box.
Vector random_point(const Box& box, Rng& rng);

} // namespace pbemo::evolution
