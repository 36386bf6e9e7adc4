#pragma once

// Shared fixtures: a synthetic clustered duel benchmark and scripted oracles.

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "pbemo/consultation.hpp"
#include "pbemo/dm.hpp"

namespace pbemo::testing {

/// N = clusters * per_cluster solutions in well-separated 2-D blobs. The
/// latent utility is minus the distance to the centre of one blob; duels
/// follow p_uv = mu(beta (util_u - util_v)), so every p_uv != 0.5.
struct ClusteredBench {
    std::vector<Solution> pop;
    consultation::PreferenceMatrix ps;
    std::vector<std::size_t> blob;
    std::size_t golden_blob = 0;
    Vector utility;
};

inline ClusteredBench clustered_bench(std::size_t clusters = 10, std::size_t per_cluster = 10,
                                      std::size_t golden_blob = 6, double beta = 5.0,
                                      std::uint64_t layout_seed = 2024)
{
    if (golden_blob >= clusters) throw std::invalid_argument("golden blob out of range");
    Rng rng(layout_seed);
    std::uniform_real_distribution<double> where(0.0, 100.0);
    std::uniform_real_distribution<double> jitter(-0.1, 0.1);

    std::vector<Vector> centres;
    while (centres.size() < clusters) {
        const Vector c{where(rng), where(rng)};
        bool apart = true;
        for (const auto& o : centres) apart = apart && std::hypot(c[0] - o[0], c[1] - o[1]) >= 10.0;
        if (apart) centres.push_back(c);
    }

    ClusteredBench b;
    b.golden_blob = golden_blob;
    for (std::size_t c = 0; c < clusters; ++c) {
        for (std::size_t i = 0; i < per_cluster; ++i) {
            const Vector f{centres[c][0] + jitter(rng), centres[c][1] + jitter(rng)};
            b.pop.push_back({f, f});
            b.blob.push_back(c);
        }
    }
    const Vector& g = centres[golden_blob];
    for (const auto& s : b.pop) b.utility.push_back(-std::hypot(s.f[0] - g[0], s.f[1] - g[1]));

    const std::size_t n = b.pop.size();
    b.ps = consultation::PreferenceMatrix(n, 0.5);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v) {
            b.ps(u, v) = dm::logistic(beta * (b.utility[u] - b.utility[v]));
            b.ps(v, u) = 1.0 - b.ps(u, v);
        }
    return b;
}

/// Answers from a known solution-level preference matrix.
class MatrixDm final : public dm::DmOracle {
public:
    MatrixDm(const consultation::PreferenceMatrix& ps, std::uint64_t seed) : ps_(ps), rng_(dm::dm_stream(seed)) {}

    dm::Winner answer(const dm::DuelQuery& q) override
    {
        const double p = ps_(q.index_a, q.index_b);
        return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p ? dm::Winner::first : dm::Winner::second;
    }
    bool stochastic() const noexcept override { return true; }
    bool interactive() const noexcept override { return false; }

private:
    const consultation::PreferenceMatrix& ps_;
    Rng rng_;
};

/// The solution with the larger score always wins; equal scores go to `first`.
class ScoreDm final : public dm::DmOracle {
public:
    explicit ScoreDm(Vector score) : score_(std::move(score)) {}

    dm::Winner answer(const dm::DuelQuery& q) override
    {
        ++calls;
        return score_[q.index_a] >= score_[q.index_b] ? dm::Winner::first : dm::Winner::second;
    }
    bool stochastic() const noexcept override { return false; }
    bool interactive() const noexcept override { return false; }

    std::size_t calls = 0;

private:
    Vector score_;
};

/// Answers `first` until `limit` answers were given, then aborts.
class AbortingDm final : public dm::DmOracle {
public:
    explicit AbortingDm(std::size_t limit) : limit_(limit) {}

    dm::Winner answer(const dm::DuelQuery&) override
    {
        if (given_ == limit_) throw dm::DmAborted("decision maker went away");
        ++given_;
        return dm::Winner::first;
    }
    bool stochastic() const noexcept override { return false; }
    bool interactive() const noexcept override { return true; }

private:
    std::size_t limit_;
    std::size_t given_ = 0;
};

/// True iff the reported subset is exactly the golden blob.
inline bool found_golden(const ClusteredBench& b, const consultation::ConsultationResult& r)
{
    const auto members = r.partition.members()[r.best_subset];
    std::size_t golden_size = 0;
    for (std::size_t c : b.blob) golden_size += c == b.golden_blob;
    if (members.size() != golden_size) return false;
    for (std::size_t i : members)
        if (b.blob[i] != b.golden_blob) return false;
    return true;
}

} // namespace pbemo::testing
