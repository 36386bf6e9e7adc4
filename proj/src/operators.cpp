#include "pbemo/operators.hpp"

#include <algorithm>
#include <cmath>

namespace pbemo::evolution {
namespace {

constexpr double same_gene_eps = 1e-14;

double unit(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double spread_factor(double beta, double eta, double u)
{
    const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
    if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
    return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
}

} // namespace

std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2,
                                        const Box& box, const GeneticParams& params, Rng& rng)
{
    Vector c1(p1.begin(), p1.end());
    Vector c2(p2.begin(), p2.end());
    if (unit(rng) > params.pc) return {c1, c2};

    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (unit(rng) > 0.5) continue;
        if (std::fabs(p1[i] - p2[i]) <= same_gene_eps) continue;

        const double y1 = std::min(p1[i], p2[i]);
        const double y2 = std::max(p1[i], p2[i]);
        const double lo = box.lower[i];
        const double hi = box.upper[i];
        const double u = unit(rng);

        const double bq1 = spread_factor(1.0 + 2.0 * (y1 - lo) / (y2 - y1), params.eta_c, u);
        const double bq2 = spread_factor(1.0 + 2.0 * (hi - y2) / (y2 - y1), params.eta_c, u);
        const double a = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lo, hi);
        const double b = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lo, hi);
        if (unit(rng) <= 0.5) {
            c1[i] = b;
            c2[i] = a;
        } else {
            c1[i] = a;
            c2[i] = b;
        }
    }
    return {c1, c2};
}

Vector polynomial_mutation(std::span<const double> x, const Box& box, const GeneticParams& params, Rng& rng)
{
    Vector y(x.begin(), x.end());
    const double pow_ = 1.0 / (params.eta_m + 1.0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (unit(rng) > params.pm) continue;
        const double lo = box.lower[i];
        const double hi = box.upper[i];
        const double d1 = (y[i] - lo) / (hi - lo);
        const double d2 = (hi - y[i]) / (hi - lo);
        const double u = unit(rng);
        double dq = 0.0;
        if (u <= 0.5) {
            const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, params.eta_m + 1.0);
            dq = std::pow(val, pow_) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, params.eta_m + 1.0);
            dq = 1.0 - std::pow(val, pow_);
        }
        y[i] = std::clamp(y[i] + dq * (hi - lo), lo, hi);
    }
    return y;
}

Vector random_point(const Box& box, Rng& rng)
{
    Vector x(box.lower.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unit(rng);
    return x;
}

} // namespace pbemo::evolution
