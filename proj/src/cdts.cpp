#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>
#include <cmath>
#include <sstream>
#include <tuple>

#include "pbemo/consultation.hpp"

namespace pbemo::consultation {
namespace {

double sample_beta(double a, double b, Rng& rng)
{
    if (a == 1.0 && b == 1.0) return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double x = std::gamma_distribution<double>(a, 1.0)(rng);
    const double y = std::gamma_distribution<double>(b, 1.0)(rng);
    return x / (x + y);
}

std::size_t uniform_pick(std::span<const std::size_t> from, Rng& rng)
{
    if (from.size() == 1) return from[0];
    return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
}

template <typename T>
nlohmann::json matrix_json(const SquareMatrix<T>& m)
{
    auto rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<std::size_t> argmax_set(std::span<const std::size_t> candidates, std::span<const double> score)
{
    std::vector<std::size_t> best;
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t i : candidates) {
        if (score[i] > top) {
            top = score[i];
            best.assign(1, i);
        } else if (score[i] == top) {
            best.push_back(i);
        }
    }
    return best;
}

std::size_t select_first(const PreferenceState& state, const Bounds& bounds, Rng& rng)
{
    const std::size_t k = state.wins.size();
    const Vector zeta = upper_copeland(bounds.upper);
    std::vector<std::size_t> all(k);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto leaders = argmax_set(all, zeta);
    if (leaders.size() == 1) return leaders[0];

    std::vector<bool> lead(k, false);
    for (std::size_t i : leaders) lead[i] = true;
    // theta_ij for i < j, theta_ji = 1 - theta_ij; only rows of leaders are needed.
    Vector beaten(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (!lead[i] && !lead[j]) continue;
            const double theta = sample_beta(static_cast<double>(state.wins(i, j)) + 1.0,
                                             static_cast<double>(state.wins(j, i)) + 1.0, rng);
            if (theta > 0.5) beaten[i] += 1.0;
            if (1.0 - theta > 0.5) beaten[j] += 1.0;
        }
    }
    return uniform_pick(argmax_set(leaders, beaten), rng);
}

std::size_t select_second(const PreferenceState& state, const Bounds& bounds, std::size_t first, Rng& rng)
{
    const std::size_t k = state.wins.size();
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < k; ++i)
        if (bounds.lower(i, first) <= 0.5) candidates.push_back(i);

    Vector theta(k, -1.0);
    for (std::size_t i : candidates) {
        theta[i] = i == first ? 0.5
                              : sample_beta(static_cast<double>(state.wins(i, first)) + 1.0,
                                            static_cast<double>(state.wins(first, i)) + 1.0, rng);
    }
    return uniform_pick(argmax_set(candidates, theta), rng);
}

QueryRecord play_round(PreferenceState& state, const std::vector<std::vector<std::size_t>>& groups,
                       std::span<const Solution> pop, dm::DmOracle& oracle, Rng& rng)
{
    const Bounds bounds = confidence_bounds(state);
    QueryRecord q;
    q.round = state.t + 1;
    q.first_cluster = select_first(state, bounds, rng);
    q.second_cluster = select_second(state, bounds, q.first_cluster, rng);

    const auto& ga = groups[q.first_cluster];
    const auto& gb = groups[q.second_cluster];
    q.sol_a = uniform_pick(ga, rng);
    if (q.first_cluster == q.second_cluster && ga.size() >= 2) {
        std::vector<std::size_t> rest;
        for (std::size_t s : ga)
            if (s != q.sol_a) rest.push_back(s);
        q.sol_b = uniform_pick(rest, rng);
    } else {
        q.sol_b = uniform_pick(gb, rng);
    }

    const auto start = std::chrono::steady_clock::now();
    q.winner = oracle.answer(dm::DuelQuery{pop[q.sol_a], pop[q.sol_b], q.round, q.first_cluster,
                                           q.second_cluster, q.sol_a, q.sol_b});
    q.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const bool first_won = q.winner == dm::Winner::first;
    const std::size_t win_cluster = first_won ? q.first_cluster : q.second_cluster;
    const std::size_t lose_cluster = first_won ? q.second_cluster : q.first_cluster;
    if (win_cluster == lose_cluster)
        ++state.self_duels;
    else
        ++state.wins(win_cluster, lose_cluster);
    ++state.v[first_won ? q.sol_a : q.sol_b];
    ++state.l[first_won ? q.sol_b : q.sol_a];
    ++state.t;
    return q;
}

} // namespace

PreferenceState::PreferenceState(std::size_t clusters, std::size_t solutions, double alpha_)
    : wins(clusters, 0), alpha(alpha_), v(solutions, 0), l(solutions, 0)
{
}

Bounds confidence_bounds(const PreferenceState& state)
{
    const std::size_t k = state.wins.size();
    Bounds b{SquareMatrix<double>(k, 0.5), SquareMatrix<double>(k, 0.5)};
    const double log_t = std::log(static_cast<double>(std::max<std::size_t>(state.t, 2)));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            const auto n = state.wins(i, j) + state.wins(j, i);
            if (n == 0) {
                b.upper(i, j) = 2.0;
                b.lower(i, j) = 0.0;
                continue;
            }
            const double nd = static_cast<double>(n);
            const double ratio = static_cast<double>(state.wins(i, j)) / nd;
            const double radius = std::sqrt(state.alpha * log_t / nd);
            b.upper(i, j) = ratio + radius;
            b.lower(i, j) = ratio - radius;
        }
    }
    return b;
}

Vector upper_copeland(const SquareMatrix<double>& upper)
{
    const std::size_t k = upper.size();
    if (k == 1) return {1.0};
    Vector z(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t c = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i && upper(i, j) > 0.5) ++c;
        z[i] = static_cast<double>(c) / static_cast<double>(k - 1);
    }
    return z;
}

std::size_t select_first(const PreferenceState& state, Rng& rng)
{
    return select_first(state, confidence_bounds(state), rng);
}

std::size_t select_second(const PreferenceState& state, std::size_t first, Rng& rng)
{
    if (first >= state.wins.size()) throw std::out_of_range("select_second: first arm out of range");
    return select_second(state, confidence_bounds(state), first, rng);
}

std::vector<std::size_t> second_candidates(const PreferenceState& state, std::size_t first)
{
    const Bounds b = confidence_bounds(state);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < state.wins.size(); ++i)
        if (b.lower(i, first) <= 0.5) out.push_back(i);
    return out;
}

nlohmann::json QueryRecord::to_json(bool with_timing) const
{
    nlohmann::json j = {{"round", round},   {"first_cluster", first_cluster},
                        {"second_cluster", second_cluster},
                        {"sol_a", sol_a},   {"sol_b", sol_b},
                        {"winner", dm::to_string(winner)}};
    if (with_timing) j["elapsed_ms"] = elapsed_ms;
    return j;
}

std::string query_log_jsonl(std::span<const QueryRecord> log)
{
    std::ostringstream out;
    for (const auto& q : log) out << q.to_json().dump() << '\n';
    return out.str();
}

QueryRecord cdts_round(PreferenceState& state, const Partition& partition, std::span<const Solution> pop,
                       dm::DmOracle& oracle, Rng& rng)
{
    if (partition.assignment.size() != pop.size() || state.v.size() != pop.size())
        throw std::invalid_argument("cdts_round: state, partition and population disagree in size");
    return play_round(state, partition.members(), pop, oracle, rng);
}

std::size_t best_subset(const PreferenceState& state, const Bounds& bounds)
{
    const std::size_t k = state.wins.size();
    const Vector zeta = upper_copeland(bounds.upper);
    std::size_t best = 0;
    auto key = [&](std::size_t i) {
        std::size_t copeland_wins = 0, total = 0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            copeland_wins += state.wins(i, j) > state.wins(j, i);
            total += state.wins(i, j);
        }
        return std::tuple{zeta[i], copeland_wins, total};
    };
    for (std::size_t i = 1; i < k; ++i)
        if (key(i) > key(best)) best = i;
    return best;
}

nlohmann::json ConsultationResult::to_json(bool with_timing) const
{
    auto log_json = nlohmann::json::array();
    for (const auto& q : log) log_json.push_back(q.to_json(with_timing));
    return {
        {"best_subset", best_subset},
        {"partition", {{"assignment", partition.assignment}, {"centroids", partition.centroids}}},
        {"wins", matrix_json(state.wins)},
        {"t", state.t},
        {"self_duels", state.self_duels},
        {"alpha", state.alpha},
        {"v", state.v},
        {"l", state.l},
        {"bounds", {{"upper", matrix_json(bounds.upper)}, {"lower", matrix_json(bounds.lower)}}},
        {"log", std::move(log_json)},
    };
}

ConsultationResult cdts_run(std::span<const Solution> pop, std::size_t k, std::size_t budget, double alpha,
                            dm::DmOracle& oracle, Rng& rng, const RoundObserver& observer)
{
    if (budget == 0) throw std::invalid_argument("consultation budget T must be >= 1");
    ConsultationResult r;
    r.partition = kmeans_partition(objectives_of(pop), k, rng);
    r.state = PreferenceState(r.partition.size(), pop.size(), alpha);
    const auto groups = r.partition.members();
    r.log.reserve(budget);
    try {
        for (std::size_t round = 0; round < budget; ++round) {
            r.log.push_back(play_round(r.state, groups, pop, oracle, rng));
            if (observer) observer(r.log.back(), r.state);
        }
    } catch (const dm::DmAborted& e) {
        r.bounds = confidence_bounds(r.state);
        r.best_subset = best_subset(r.state, r.bounds);
        throw ConsultationAborted(e.what(), std::move(r));
    }
    r.bounds = confidence_bounds(r.state);
    r.best_subset = best_subset(r.state, r.bounds);
    return r;
}

ConsultationResult dts_run(std::span<const Solution> pop, std::size_t budget, double alpha, dm::DmOracle& oracle,
                           Rng& rng, const RoundObserver& observer)
{
    return cdts_run(pop, pop.size(), budget, alpha, oracle, rng, observer);
}

} // namespace pbemo::consultation
