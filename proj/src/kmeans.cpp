#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "pbemo/consultation.hpp"

namespace pbemo::consultation {
namespace {

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

std::size_t nearest_centroid(std::span<const double> x, const std::vector<Vector>& centroids)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(x, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = c;
        }
    }
    return best;
}

std::vector<Vector> seed_centroids(std::span<const Vector> pts, std::size_t k, Rng& rng)
{
    const std::size_t n = pts.size();
    std::vector<Vector> centroids;
    centroids.reserve(k);
    std::vector<bool> chosen(n, false);
    std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
    centroids.push_back(pts[first]);
    chosen[first] = true;

    Vector d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(pts[i], centroids[0]);
    while (centroids.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = 0;
        if (total > 0.0) {
            pick = std::discrete_distribution<std::size_t>(d2.begin(), d2.end())(rng);
        } else {
            // Every point coincides with a centroid: take any unused index.
            std::vector<std::size_t> free;
            for (std::size_t i = 0; i < n; ++i)
                if (!chosen[i]) free.push_back(i);
            pick = free[std::uniform_int_distribution<std::size_t>(0, free.size() - 1)(rng)];
        }
        chosen[pick] = true;
        centroids.push_back(pts[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(pts[i], centroids.back()));
    }
    return centroids;
}

void recompute_centroids(std::span<const Vector> pts, Partition& p)
{
    const std::size_t dim = pts[0].size();
    std::vector<std::size_t> count(p.size(), 0);
    std::vector<Vector> sum(p.size(), Vector(dim, 0.0));
    for (std::size_t i = 0; i < pts.size(); ++i) {
        ++count[p.assignment[i]];
        for (std::size_t d = 0; d < dim; ++d) sum[p.assignment[i]][d] += pts[i][d];
    }
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (count[c] == 0) continue;
        for (std::size_t d = 0; d < dim; ++d) p.centroids[c][d] = sum[c][d] / static_cast<double>(count[c]);
    }
}

void repair_empty(std::span<const Vector> pts, Partition& p)
{
    for (std::size_t c = 0; c < p.size(); ++c) {
        std::vector<std::size_t> count(p.size(), 0);
        for (std::size_t a : p.assignment) ++count[a];
        if (count[c] > 0) continue;

        const auto largest = static_cast<std::size_t>(std::max_element(count.begin(), count.end()) - count.begin());
        std::size_t far = pts.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (p.assignment[i] != largest) continue;
            const double d = squared_distance(pts[i], p.centroids[largest]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        p.assignment[far] = c;
        p.centroids[c] = pts[far];
        recompute_centroids(pts, p);
    }
}

} // namespace

std::vector<std::vector<std::size_t>> Partition::members() const
{
    std::vector<std::vector<std::size_t>> out(size());
    for (std::size_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
}

Partition kmeans_partition(std::span<const Vector> objectives, std::size_t k, Rng& rng)
{
    const std::size_t n = objectives.size();
    if (n == 0) throw std::invalid_argument("kmeans_partition: empty population");
    if (k == 0 || k > n) throw std::invalid_argument("kmeans_partition: K must lie in [1, N]");

    Partition p;
    if (k == n) {
        p.assignment.resize(n);
        std::iota(p.assignment.begin(), p.assignment.end(), std::size_t{0});
        p.centroids.assign(objectives.begin(), objectives.end());
        return p;
    }

    p.centroids = seed_centroids(objectives, k, rng);
    p.assignment.assign(n, 0);
    for (std::size_t it = 0; it < kmeans_max_iterations; ++it) {
        bool changed = it == 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t c = nearest_centroid(objectives[i], p.centroids);
            changed = changed || c != p.assignment[i];
            p.assignment[i] = c;
        }
        recompute_centroids(objectives, p);
        repair_empty(objectives, p);
        if (!changed) break;
    }
    return p;
}

} // namespace pbemo::consultation
