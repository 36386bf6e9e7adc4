#include "pbemo/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbemo::metrics {
namespace {

Vector distances(std::span<const Vector> objectives, std::span<const double> golden)
{
    if (objectives.empty()) throw std::invalid_argument("accuracy of an empty set");
    Vector d;
    d.reserve(objectives.size());
    for (const auto& f : objectives) {
        if (f.size() != golden.size()) throw std::invalid_argument("objective vector and golden point differ in size");
        double s = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) s += (f[i] - golden[i]) * (f[i] - golden[i]);
        d.push_back(std::sqrt(s));
    }
    return d;
}

} // namespace

double approx_accuracy(std::span<const Vector> objectives, std::span<const double> golden)
{
    const Vector d = distances(objectives, golden);
    return *std::min_element(d.begin(), d.end());
}

double avg_accuracy(std::span<const Vector> objectives, std::span<const double> golden)
{
    const Vector d = distances(objectives, golden);
    double s = 0.0;
    for (double x : d) s += x;
    return s / static_cast<double>(d.size());
}

Accuracy accuracy(std::span<const Vector> objectives, std::span<const double> golden)
{
    return {approx_accuracy(objectives, golden), avg_accuracy(objectives, golden)};
}

} // namespace pbemo::metrics
