#include <cmath>
#include <stdexcept>

#include "pbemo/consultation.hpp"

namespace pbemo::consultation {

bool is_valid_preference(const PreferenceMatrix& p, double tol)
{
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::fabs(p(i, i) - 0.5) > tol) return false;
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (p(i, j) < 0.0 || p(i, j) > 1.0) return false;
            if (std::fabs(p(i, j) + p(j, i) - 1.0) > tol) return false;
        }
    }
    return true;
}

PreferenceMatrix subset_preference(const PreferenceMatrix& ps, const Partition& partition)
{
    if (partition.assignment.size() != ps.size())
        throw std::invalid_argument("subset_preference: partition does not cover the matrix");
    const auto groups = partition.members();
    const std::size_t k = groups.size();
    PreferenceMatrix p(k, 0.5);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            double s = 0.0;
            for (std::size_t u : groups[i])
                for (std::size_t w : groups[j]) s += ps(u, w);
            p(i, j) = s / static_cast<double>(groups[i].size() * groups[j].size());
            // Set from p_ij so the pair sums to one exactly.
            p(j, i) = 1.0 - p(i, j);
        }
    }
    return p;
}

CopelandScores copeland(const PreferenceMatrix& p)
{
    const std::size_t k = p.size();
    if (k == 0) throw std::invalid_argument("copeland: empty matrix");
    CopelandScores out;
    if (k == 1) {
        out.scores = {1.0};
        return out;
    }
    out.scores.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t beaten = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (j != i && p(i, j) > 0.5) ++beaten;
        out.scores[i] = static_cast<double>(beaten) / static_cast<double>(k - 1);
        if (out.scores[i] > out.scores[out.winner]) out.winner = i;
    }
    return out;
}

double cumulative_regret(std::span<const QueryRecord> log, std::span<const double> zeta, double zeta_star,
                         Arms arms)
{
    double r = 0.0;
    for (const auto& q : log) {
        const std::size_t a = arms == Arms::clusters ? q.first_cluster : q.sol_a;
        const std::size_t b = arms == Arms::clusters ? q.second_cluster : q.sol_b;
        r += zeta_star - 0.5 * (zeta[a] + zeta[b]);
    }
    return r;
}

} // namespace pbemo::consultation
