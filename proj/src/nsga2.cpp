#include "pbemo/nsga2.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pbemo::evolution {
namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Box box_of(const problems::ProblemSpec& spec) { return Box{spec.lower, spec.upper}; }

// Survival score of every member of `pop` for the given fronts. Preference
// scores are log-densities so ranks survive density underflow.
Vector survival_scores(std::span<const Solution> pop, const Fronts& fronts, const Survival& survival)
{
    Vector score(pop.size(), 0.0);
    if (const auto* pref = std::get_if<PreferenceSurvival>(&survival); pref && pref->mixture && !pref->mixture->empty()) {
        for (std::size_t i = 0; i < pop.size(); ++i) score[i] = pref->mixture->log_density(pop[i].x);
        return score;
    }
    for (const auto& front : fronts) {
        std::vector<Vector> objs;
        objs.reserve(front.size());
        for (std::size_t i : front) objs.push_back(pop[i].f);
        const Vector cd = crowding_distance(objs);
        for (std::size_t k = 0; k < front.size(); ++k) score[front[k]] = cd[k];
    }
    return score;
}

} // namespace

Population random_population(const problems::ProblemSpec& spec, std::size_t size, Rng& rng)
{
    Population pop;
    pop.members.reserve(size);
    for (std::size_t i = 0; i < size; ++i) {
        Vector x = random_point(box_of(spec), rng);
        Vector f = problems::evaluate(spec, x);
        pop.members.push_back({std::move(x), std::move(f)});
    }
    return pop;
}

Fronts fast_nondominated_sort(std::span<const Vector> objectives)
{
    const std::size_t n = objectives.size();
    if (n == 0) throw std::invalid_argument("fast_nondominated_sort: empty input");

    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    Fronts fronts(1);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (problems::dominates(objectives[p], objectives[q])) {
                dominated[p].push_back(q);
                ++count[q];
            } else if (problems::dominates(objectives[q], objectives[p])) {
                dominated[q].push_back(p);
                ++count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p)
        if (count[p] == 0) fronts[0].push_back(p);

    for (std::size_t k = 0; !fronts[k].empty(); ++k) {
        std::vector<std::size_t> next;
        for (std::size_t p : fronts[k])
            for (std::size_t q : dominated[p])
                if (--count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

Vector crowding_distance(std::span<const Vector> front)
{
    const std::size_t n = front.size();
    Vector d(n, 0.0);
    if (n <= 2) {
        std::fill(d.begin(), d.end(), inf);
        return d;
    }
    const std::size_t m = front[0].size();
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
        const double lo = front[order.front()][obj];
        const double hi = front[order.back()][obj];
        d[order.front()] = inf;
        d[order.back()] = inf;
        if (hi - lo <= 0.0) continue;
        for (std::size_t k = 1; k + 1 < n; ++k)
            d[order[k]] += (front[order[k + 1]][obj] - front[order[k - 1]][obj]) / (hi - lo);
    }
    return d;
}

Vector preference_crowding(std::span<const Vector> decisions, const elicitation::PreferenceMixture& mixture)
{
    if (mixture.empty()) throw std::logic_error("preference_crowding: no consultation yet");
    Vector s(decisions.size());
    for (std::size_t i = 0; i < decisions.size(); ++i) s[i] = mixture.density(decisions[i]);
    return s;
}

std::vector<std::size_t> environmental_selection(std::span<const Solution> merged, std::size_t size,
                                                 const Survival& survival)
{
    const auto objs = objectives_of(merged);
    const Fronts fronts = fast_nondominated_sort(objs);
    std::vector<std::size_t> keep;
    keep.reserve(size);
    for (const auto& front : fronts) {
        if (keep.size() + front.size() <= size) {
            keep.insert(keep.end(), front.begin(), front.end());
            if (keep.size() == size) break;
            continue;
        }
        const Vector score = survival_scores(merged, Fronts{front}, survival);
        std::vector<std::size_t> last = front;
        std::stable_sort(last.begin(), last.end(),
                         [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
        keep.insert(keep.end(), last.begin(), last.begin() + static_cast<std::ptrdiff_t>(size - keep.size()));
        break;
    }
    return keep;
}

Population nsga2_generation(const problems::ProblemSpec& spec, const Population& pop,
                            const GeneticParams& params, const Survival& survival, Rng& rng)
{
    const std::size_t n = pop.members.size();
    const Fronts fronts = fast_nondominated_sort(objectives_of(pop.members));
    std::vector<std::size_t> rank(n);
    for (std::size_t k = 0; k < fronts.size(); ++k)
        for (std::size_t i : fronts[k]) rank[i] = k;
    const Vector score = survival_scores(pop.members, fronts, survival);

    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    auto tournament = [&]() -> const Solution& {
        const std::size_t a = pick(rng);
        const std::size_t b = pick(rng);
        if (rank[a] != rank[b]) return pop.members[rank[a] < rank[b] ? a : b];
        if (score[a] != score[b]) return pop.members[score[a] > score[b] ? a : b];
        return pop.members[std::bernoulli_distribution(0.5)(rng) ? a : b];
    };

    const Box box = box_of(spec);
    std::vector<Solution> merged = pop.members;
    merged.reserve(2 * n);
    while (merged.size() < 2 * n) {
        const Solution& p1 = tournament();
        const Solution& p2 = tournament();
        auto [c1, c2] = sbx_crossover(p1.x, p2.x, box, params, rng);
        for (Vector* c : {&c1, &c2}) {
            if (merged.size() == 2 * n) break;
            Vector x = polynomial_mutation(*c, box, params, rng);
            Vector f = problems::evaluate(spec, x);
            merged.push_back({std::move(x), std::move(f)});
        }
    }

    Population next;
    next.generation = pop.generation + 1;
    next.members.reserve(n);
    for (std::size_t i : environmental_selection(merged, n, survival)) next.members.push_back(std::move(merged[i]));
    return next;
}

} // namespace pbemo::evolution
