#include "pbemo/moead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace pbemo::evolution {
namespace {

constexpr double min_weight = 1e-6;

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// All compositions of h into m non-negative parts, as simplex points.
std::vector<Vector> simplex_lattice(std::size_t h, std::size_t m)
{
    std::vector<Vector> out;
    std::vector<std::size_t> parts(m, 0);
    auto rec = [&](auto&& self, std::size_t dim, std::size_t left) -> void {
        if (dim + 1 == m) {
            parts[dim] = left;
            Vector w(m);
            for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(parts[i]) / static_cast<double>(h);
            out.push_back(std::move(w));
            return;
        }
        for (std::size_t v = left + 1; v-- > 0;) {
            parts[dim] = v;
            self(self, dim + 1, left - v);
        }
    };
    rec(rec, 0, h);
    return out;
}

std::size_t lattice_size(std::size_t h, std::size_t m)
{
    // C(h + m - 1, m - 1)
    double c = 1.0;
    for (std::size_t i = 1; i < m; ++i) c = c * static_cast<double>(h + i) / static_cast<double>(i);
    return static_cast<std::size_t>(std::llround(c));
}

// Greedy farthest-point subset of `count` lattice points, seeded with the
// simplex vertices; returned in lattice order.
std::vector<Vector> thin(std::vector<Vector> points, std::size_t count)
{
    if (points.size() <= count) return points;
    const std::size_t m = points[0].size();
    std::vector<double> nearest(points.size(), std::numeric_limits<double>::infinity());
    std::vector<bool> taken(points.size(), false);
    std::size_t chosen = 0;
    auto take = [&](std::size_t k) {
        taken[k] = true;
        ++chosen;
        for (std::size_t i = 0; i < points.size(); ++i)
            nearest[i] = std::min(nearest[i], squared_distance(points[i], points[k]));
    };
    for (std::size_t i = 0; i < points.size() && chosen < std::min(m, count); ++i)
        if (*std::max_element(points[i].begin(), points[i].end()) == 1.0) take(i);
    while (chosen < count) {
        std::size_t best = points.size();
        for (std::size_t i = 0; i < points.size(); ++i)
            if (!taken[i] && (best == points.size() || nearest[i] > nearest[best])) best = i;
        take(best);
    }
    std::vector<Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < points.size(); ++i)
        if (taken[i]) out.push_back(std::move(points[i]));
    return out;
}

} // namespace

WeightSet WeightSet::uniform(std::size_t count, std::size_t m)
{
    if (count == 0 || m == 0) throw std::invalid_argument("WeightSet::uniform: empty request");
    WeightSet ws;
    if (m == 1) {
        ws.weights.assign(count, Vector{1.0});
    } else {
        std::size_t h = 1;
        while (lattice_size(h, m) < count) ++h;
        ws.weights = thin(simplex_lattice(h, m), count);
        if (count == 1) ws.weights.assign(1, Vector(m, 1.0 / static_cast<double>(m)));
    }
    const auto t = static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(count)));
    ws.neighborhoods = weight_neighborhoods(ws.weights, std::max<std::size_t>(t, 1));
    return ws;
}

std::vector<std::vector<std::size_t>> weight_neighborhoods(std::span<const Vector> weights, std::size_t t)
{
    const std::size_t n = weights.size();
    t = std::min(t, n);
    std::vector<std::vector<std::size_t>> nb(n);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vector d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = squared_distance(weights[i], weights[j]);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (a == i || b == i) return a == i && b != i;
            return d[a] < d[b];
        });
        nb[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(t));
    }
    return nb;
}

double tchebycheff(std::span<const double> f, std::span<const double> weight, std::span<const double> ideal)
{
    double g = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        g = std::max(g, std::fabs(f[i] - ideal[i]) / std::max(weight[i], min_weight));
    return g;
}

Vector ideal_point(std::span<const Solution> members)
{
    if (members.empty()) throw std::invalid_argument("ideal_point: empty population");
    Vector z = members[0].f;
    for (const auto& s : members)
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::min(z[i], s.f[i]);
    return z;
}

std::pair<Population, Vector> moead_generation(const problems::ProblemSpec& spec, const Population& pop,
                                               const WeightSet& weights, const Vector& ideal,
                                               const GeneticParams& params, Rng& rng)
{
    const std::size_t n = pop.members.size();
    if (n != weights.size()) throw std::invalid_argument("moead_generation: population/weight size mismatch");

    Population next = pop;
    next.generation = pop.generation + 1;
    Vector z = ideal;
    const Box box{spec.lower, spec.upper};
    std::vector<std::size_t> nb;

    for (std::size_t i = 0; i < n; ++i) {
        nb = weights.neighborhoods[i];
        std::size_t a = nb[0];
        std::size_t b = nb[0];
        if (nb.size() >= 2) {
            std::shuffle(nb.begin(), nb.end(), rng);
            a = nb[0];
            b = nb[1];
        }
        auto children = sbx_crossover(next.members[a].x, next.members[b].x, box, params, rng);
        Vector x = polynomial_mutation(children.first, box, params, rng);
        Vector f = problems::evaluate(spec, x);
        for (std::size_t d = 0; d < z.size(); ++d) z[d] = std::min(z[d], f[d]);

        nb = weights.neighborhoods[i];
        std::shuffle(nb.begin(), nb.end(), rng);
        std::size_t replaced = 0;
        for (std::size_t j : nb) {
            if (replaced == max_replacements) break;
            const Vector& w = weights.weights[j];
            if (tchebycheff(f, w, z) <= tchebycheff(next.members[j].f, w, z)) {
                next.members[j] = Solution{x, f};
                ++replaced;
            }
        }
    }
    return {std::move(next), std::move(z)};
}

std::vector<ObjectiveComponent> objective_image(const elicitation::PreferenceMixture& mixture,
                                                const problems::ProblemSpec& spec, std::span<const double> ideal)
{
    std::vector<ObjectiveComponent> out;
    for (const auto& c : mixture.components()) {
        Vector x = c.mean;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], spec.lower[i], spec.upper[i]);
        Vector f = problems::evaluate(spec, x);
        for (std::size_t d = 0; d < f.size(); ++d) f[d] -= ideal[d];
        out.push_back({std::move(f), c.sigma});
    }
    return out;
}

WeightSet transform_weights(const WeightSet& weights, std::span<const ObjectiveComponent> components)
{
    if (components.empty()) return weights;

    Vector share(components.size());
    double z = 0.0;
    for (std::size_t t = 0; t < components.size(); ++t) z += share[t] = 1.0 / components[t].sigma;
    for (double& s : share) s /= z;

    const boost::math::normal_distribution<double> unit_normal;
    WeightSet out = weights;
    for (auto& w : out.weights) {
        double total = 0.0;
        for (std::size_t d = 0; d < w.size(); ++d) {
            const double q = boost::math::quantile(unit_normal, std::clamp(w[d], min_weight, 1.0 - min_weight));
            double v = 0.0;
            for (std::size_t t = 0; t < components.size(); ++t)
                v += share[t] * (components[t].mean[d] + std::sqrt(components[t].sigma) * q);
            w[d] = std::max(v, min_weight);
            total += w[d];
        }
        for (double& x : w) x /= total;
    }
    return out;
}

} // namespace pbemo::evolution
