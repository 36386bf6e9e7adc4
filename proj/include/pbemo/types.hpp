#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace pbemo {

using Vector = std::vector<double>;

/// Engine used for every stochastic component. One stream per run.
using Rng = std::mt19937_64;

/// A candidate: decision vector plus its cached objective vector.
struct Solution {
    Vector x;
    Vector f;
};

inline std::vector<Vector> objectives_of(std::span<const Solution> pop)
{
    std::vector<Vector> out;
    out.reserve(pop.size());
    for (const auto& s : pop) out.push_back(s.f);
    return out;
}

inline std::vector<Vector> decisions_of(std::span<const Solution> pop)
{
    std::vector<Vector> out;
    out.reserve(pop.size());
    for (const auto& s : pop) out.push_back(s.x);
    return out;
}

/// Row-major dense square matrix; small K x K tables only.
template <typename T>
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

    std::size_t size() const noexcept { return n_; }
    T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    bool operator==(const SquareMatrix&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<T> data_;
};

} // namespace pbemo
