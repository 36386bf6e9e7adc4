#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pbemo/metrics.hpp"

namespace pbemo::metrics {
namespace {

// P(W <= w) and P(W >= w) under the permutation null, by counting subsets
// of size n_a over doubled (hence integral) mid-ranks.
std::pair<double, double> exact_tails(const Vector& ranks, std::size_t n_a, double w)
{
    std::vector<long> doubled(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) doubled[i] = std::lround(2.0 * ranks[i]);
    const long max_sum = std::accumulate(doubled.begin(), doubled.end(), 0L);

    // ways[j][s]: subsets of size j with doubled rank sum s.
    std::vector<std::vector<double>> ways(n_a + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    ways[0][0] = 1.0;
    for (long r : doubled)
        for (std::size_t j = n_a; j >= 1; --j)
            for (long s = max_sum; s >= r; --s)
                ways[j][static_cast<std::size_t>(s)] += ways[j - 1][static_cast<std::size_t>(s - r)];

    const long target = std::lround(2.0 * w);
    double total = 0.0, lower = 0.0, upper = 0.0;
    for (long s = 0; s <= max_sum; ++s) {
        const double c = ways[n_a][static_cast<std::size_t>(s)];
        total += c;
        if (s <= target) lower += c;
        if (s >= target) upper += c;
    }
    return {lower / total, upper / total};
}

} // namespace

Vector mid_ranks(std::span<const double> values)
{
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    Vector ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = mid;
        i = j + 1;
    }
    return ranks;
}

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double level,
                                RankSumMethod method)
{
    if (a.size() < 4 || b.size() < 4) throw std::invalid_argument("rank-sum test needs at least 4 values per sample");

    Vector pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const Vector ranks = mid_ranks(pooled);
    const std::size_t n = pooled.size();
    const auto na = static_cast<double>(a.size());
    const auto nb = static_cast<double>(b.size());

    RankSumResult r;
    r.statistic = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
    if (std::all_of(pooled.begin(), pooled.end(), [&](double v) { return v == pooled[0]; })) {
        r.p_value = 1.0;
        r.exact = method != RankSumMethod::normal && n <= rank_sum_exact_limit;
        return r;
    }

    r.exact = method == RankSumMethod::exact || (method == RankSumMethod::automatic && n <= rank_sum_exact_limit);
    if (r.exact) {
        const auto [lower, upper] = exact_tails(ranks, a.size(), r.statistic);
        r.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
    } else {
        Vector sorted = pooled;
        std::sort(sorted.begin(), sorted.end());
        double ties = 0.0;
        for (std::size_t i = 0; i < n;) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            const auto t = static_cast<double>(j - i);
            ties += t * t * t - t;
            i = j;
        }
        const auto nd = static_cast<double>(n);
        const double mean = na * (nd + 1.0) / 2.0;
        const double var = na * nb / 12.0 * ((nd + 1.0) - ties / (nd * (nd - 1.0)));
        const double z = std::max(0.0, std::fabs(r.statistic - mean) - 0.5) / std::sqrt(var);
        r.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    }
    r.significant = r.p_value < level;
    return r;
}

} // namespace pbemo::metrics
