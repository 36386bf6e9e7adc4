#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pbemo/types.hpp"

namespace pbemo::problems {

enum class Family { zdt, dtlz, wfg };

/// A named benchmark instance with its experimental constants.
struct ProblemSpec {
    Family family = Family::zdt;
    int index = 1;                ///< suite number, e.g. 2 for DTLZ2
    std::size_t m = 2;            ///< objectives
    std::size_t n = 30;           ///< decision variables
    Vector lower;
    Vector upper;
    std::size_t pop_size = 100;
    std::size_t max_gen = 250;
    std::optional<Vector> golden; ///< tabulated z*, absent when the table has none

    /// Registry key: "zdt1", "dtlz2-m5", "wfg7-m3".
    std::string key() const;
    std::string name() const;
};

/// Looks up a registered instance. Throws std::out_of_range for unknown keys.
const ProblemSpec& problem(std::string_view key);

/// Every registered key, in registry order.
std::vector<std::string> problem_keys();

/// F(x). Rejects wrong length and out-of-bounds components (std::invalid_argument).
Vector evaluate(const ProblemSpec& spec, std::span<const double> x);

/// Tabulated golden point. Throws std::out_of_range when none is tabulated.
Vector golden_point(const ProblemSpec& spec);

/// Pareto dominance for minimisation: f1 <= f2 everywhere and f1 != f2.
bool dominates(std::span<const double> f1, std::span<const double> f2);

/// Registry constants (n, m, bounds, N, G, z*) for the harness and the UI.
nlohmann::json constants_table();

namespace detail {
Vector wfg_evaluate(int index, std::size_t m, std::size_t k, std::span<const double> z);
}

} // namespace pbemo::problems
