#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pbemo/dm.hpp"
#include "pbemo/types.hpp"

namespace pbemo::consultation {

/// Objective-space clustering of a population into K non-empty subsets.
struct Partition {
    std::vector<std::size_t> assignment; ///< population index -> cluster id in [0, K)
    std::vector<Vector> centroids;

    std::size_t size() const noexcept { return centroids.size(); }
    std::vector<std::vector<std::size_t>> members() const;
};

/// k-means++ seeding then Lloyd iterations (at most 100). An emptied cluster
/// steals the point of the largest cluster farthest from its centroid.
/// K == N yields the identity partition without touching the generator.
Partition kmeans_partition(std::span<const Vector> objectives, std::size_t k, Rng& rng);

inline constexpr std::size_t kmeans_max_iterations = 100;

/// p_ij = probability that arm i beats arm j.
using PreferenceMatrix = SquareMatrix<double>;

/// p_ij + p_ji = 1 and p_ii = 0.5 within `tol`.
bool is_valid_preference(const PreferenceMatrix& p, double tol = 1e-12);

/// Average of the solution-level probabilities between two clusters.
PreferenceMatrix subset_preference(const PreferenceMatrix& ps, const Partition& partition);

struct CopelandScores {
    Vector scores;          ///< fraction of rivals beaten with p_ij > 0.5
    std::size_t winner = 0; ///< argmax, first index on ties
};

CopelandScores copeland(const PreferenceMatrix& p);

inline constexpr double default_alpha = 0.6;

/// Win counts among clusters and win/loss counts per solution. A duel
/// between two members of one cluster moves v, l and t but no cell of B;
/// those duels are counted in `self_duels`, so sum_{i != j} b_ij + self_duels = t.
struct PreferenceState {
    SquareMatrix<std::size_t> wins; ///< b_ij: times cluster i beat cluster j
    std::size_t t = 0;
    std::size_t self_duels = 0;
    double alpha = default_alpha;
    std::vector<std::size_t> v; ///< per-solution wins
    std::vector<std::size_t> l; ///< per-solution losses

    PreferenceState() = default;
    PreferenceState(std::size_t clusters, std::size_t solutions, double alpha);
};

struct Bounds {
    SquareMatrix<double> upper;
    SquareMatrix<double> lower;
};

/// u_ij, l_ij = b_ij/n_ij +- sqrt(alpha ln max(t, 2) / n_ij) with n_ij = b_ij + b_ji;
/// an unplayed pair gives u = 2, l = 0; the diagonal is 0.5.
Bounds confidence_bounds(const PreferenceState& state);

/// Optimistic Copeland score: fraction of rivals with u_ij > 0.5.
Vector upper_copeland(const SquareMatrix<double>& upper);

/// First arm: Thompson sample over the optimistic Copeland leaders.
std::size_t select_first(const PreferenceState& state, Rng& rng);

/// Second arm: Thompson sample against `first` among arms not confidently
/// beaten by it (l_{i,first} <= 0.5), with theta_{first,first} = 0.5.
std::size_t select_second(const PreferenceState& state, std::size_t first, Rng& rng);

/// Arms of C^2 for the given first arm, ascending.
std::vector<std::size_t> second_candidates(const PreferenceState& state, std::size_t first);

struct QueryRecord {
    std::size_t round = 0;
    std::size_t first_cluster = 0;
    std::size_t second_cluster = 0;
    std::size_t sol_a = 0;
    std::size_t sol_b = 0;
    dm::Winner winner = dm::Winner::first;
    double elapsed_ms = 0.0;

    nlohmann::json to_json(bool with_timing = true) const;
};

/// One JSON object per line.
std::string query_log_jsonl(std::span<const QueryRecord> log);

/// Select two clusters, draw one solution from each, ask the DM and record
/// the outcome. The state is untouched when the DM throws.
QueryRecord cdts_round(PreferenceState& state, const Partition& partition, std::span<const Solution> pop,
                       dm::DmOracle& oracle, Rng& rng);

struct ConsultationResult {
    Partition partition;
    PreferenceState state;
    std::size_t best_subset = 0;
    std::vector<QueryRecord> log;
    Bounds bounds;

    nlohmann::json to_json(bool with_timing = true) const;
};

/// Raised when the DM aborts mid-session; carries everything answered so far.
class ConsultationAborted : public std::runtime_error {
public:
    ConsultationAborted(const std::string& what, ConsultationResult partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const ConsultationResult& partial() const noexcept { return partial_; }

private:
    ConsultationResult partial_;
};

/// Reported winner: argmax of the optimistic Copeland score. Ties go to the
/// arm with more empirical Copeland wins (b_ij > b_ji), then more total wins,
/// then the lowest index.
std::size_t best_subset(const PreferenceState& state, const Bounds& bounds);

/// Called after each answered round.
using RoundObserver = std::function<void(const QueryRecord&, const PreferenceState&)>;

ConsultationResult cdts_run(std::span<const Solution> pop, std::size_t k, std::size_t budget, double alpha,
                            dm::DmOracle& oracle, Rng& rng, const RoundObserver& observer = {});

/// Solution-level ablation: every solution is its own arm.
ConsultationResult dts_run(std::span<const Solution> pop, std::size_t budget, double alpha, dm::DmOracle& oracle,
                           Rng& rng, const RoundObserver& observer = {});

enum class Arms { clusters, solutions };

/// R_T = zeta* T - 1/2 sum_t (zeta(first_t) + zeta(second_t)), arms read from
/// the cluster or the solution columns of the log.
double cumulative_regret(std::span<const QueryRecord> log, std::span<const double> zeta, double zeta_star,
                         Arms arms = Arms::clusters);

} // namespace pbemo::consultation
