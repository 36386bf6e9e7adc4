// WFG toolkit: transformation functions, shape functions and the four
// instances used here (WFG1, WFG3, WFG5, WFG7).

#include "pbemo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pbemo::problems::detail {
namespace {

constexpr double pi = std::numbers::pi;
constexpr double eps = 1.0e-10;

// Rounding noise can push transformed values marginally outside [0, 1].
double correct_to_01(double a)
{
    if (a <= 0.0 && a >= -eps) return 0.0;
    if (a >= 1.0 && a <= 1.0 + eps) return 1.0;
    return a;
}

double s_linear(double y, double a)
{
    return correct_to_01(std::fabs(y - a) / std::fabs(std::floor(a - y) + a));
}

double b_flat(double y, double a, double b, double c)
{
    const double t1 = std::min(0.0, std::floor(y - b)) * a * (b - y) / b;
    const double t2 = std::min(0.0, std::floor(c - y)) * (1.0 - a) * (y - c) / (1.0 - c);
    return correct_to_01(a + t1 - t2);
}

double b_poly(double y, double alpha) { return correct_to_01(std::pow(y, alpha)); }

double b_param(double y, double u, double a, double b, double c)
{
    const double v = a - (1.0 - 2.0 * u) * std::fabs(std::floor(0.5 - u) + a);
    return correct_to_01(std::pow(y, b + (c - b) * v));
}

double s_decept(double y, double a, double b, double c)
{
    const double t1 = std::floor(y - a + b) * (1.0 - c + (a - b) / b) / (a - b);
    const double t2 = std::floor(a + b - y) * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b);
    return correct_to_01(1.0 + (std::fabs(y - a) - b) * (t1 + t2 + 1.0 / b));
}

double r_sum(std::span<const double> y, std::span<const double> w)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += w[i] * y[i];
        den += w[i];
    }
    return correct_to_01(num / den);
}

double r_sum(std::span<const double> y)
{
    double s = 0.0;
    for (double v : y) s += v;
    return correct_to_01(s / static_cast<double>(y.size()));
}

double r_nonsep(std::span<const double> y, std::size_t a)
{
    const std::size_t n = y.size();
    double num = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        num += y[j];
        for (std::size_t k = 0; k + 2 <= a; ++k) num += std::fabs(y[j] - y[(j + k + 1) % n]);
    }
    const double half = std::ceil(static_cast<double>(a) / 2.0);
    const double ad = static_cast<double>(a);
    const double den = static_cast<double>(n) / ad * half * (1.0 + 2.0 * ad - 2.0 * half);
    return correct_to_01(num / den);
}

// Reduces position parameters y[0..k) to m-1 groups and the distance
// parameters y[k..) to one value, each group by the given reduction.
template <typename Reduce>
Vector reduce_groups(std::size_t m, std::size_t k, std::size_t tail_len, Reduce reduce)
{
    Vector t(m);
    const std::size_t group = k / (m - 1);
    for (std::size_t i = 0; i + 1 < m; ++i) t[i] = reduce(i * group, (i + 1) * group);
    t[m - 1] = reduce(k, k + tail_len);
    return t;
}

Vector shape_args(std::span<const double> t, std::span<const double> degenerate)
{
    const std::size_t m = t.size();
    Vector x(m);
    for (std::size_t i = 0; i + 1 < m; ++i)
        x[i] = std::max(t[m - 1], degenerate[i]) * (t[i] - 0.5) + 0.5;
    x[m - 1] = t[m - 1];
    return x;
}

// Shape functions over x[0..m-1); `i` is 1-based objective index.
double linear(std::span<const double> x, std::size_t i, std::size_t m)
{
    double r = 1.0;
    for (std::size_t j = 0; j + i < m; ++j) r *= x[j];
    if (i > 1) r *= 1.0 - x[m - i];
    return correct_to_01(r);
}

double convex(std::span<const double> x, std::size_t i, std::size_t m)
{
    double r = 1.0;
    for (std::size_t j = 0; j + i < m; ++j) r *= 1.0 - std::cos(x[j] * pi / 2.0);
    if (i > 1) r *= 1.0 - std::sin(x[m - i] * pi / 2.0);
    return correct_to_01(r);
}

double concave(std::span<const double> x, std::size_t i, std::size_t m)
{
    double r = 1.0;
    for (std::size_t j = 0; j + i < m; ++j) r *= std::sin(x[j] * pi / 2.0);
    if (i > 1) r *= std::cos(x[m - i] * pi / 2.0);
    return correct_to_01(r);
}

// f_i = D * x_M + S_i * h_i with D = 1 and S_i = 2i.
Vector scale(std::span<const double> x, const Vector& h)
{
    const std::size_t m = h.size();
    Vector f(m);
    for (std::size_t i = 0; i < m; ++i) f[i] = x[m - 1] + 2.0 * static_cast<double>(i + 1) * h[i];
    return f;
}

double mixed(std::span<const double> x, double a, double alpha)
{
    const double t = 2.0 * a * pi;
    return correct_to_01(std::pow(1.0 - x[0] - std::cos(t * x[0] + pi / 2.0) / t, alpha));
}

Vector wfg1(Vector y, std::size_t m, std::size_t k)
{
    const std::size_t n = y.size();
    for (std::size_t i = k; i < n; ++i) y[i] = s_linear(y[i], 0.35);
    for (std::size_t i = k; i < n; ++i) y[i] = b_flat(y[i], 0.8, 0.75, 0.85);
    for (auto& v : y) v = b_poly(v, 0.02);

    Vector w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 2.0 * static_cast<double>(i + 1);
    const std::span<const double> ys(y), ws(w);
    Vector t = reduce_groups(m, k, n - k, [&](std::size_t lo, std::size_t hi) {
        return r_sum(ys.subspan(lo, hi - lo), ws.subspan(lo, hi - lo));
    });

    const Vector ones(m - 1, 1.0);
    const Vector x = shape_args(t, ones);
    Vector h(m);
    for (std::size_t i = 1; i < m; ++i) h[i - 1] = convex(x, i, m);
    h[m - 1] = mixed(x, 5.0, 1.0);
    return scale(x, h);
}

Vector wfg3(Vector y, std::size_t m, std::size_t k)
{
    const std::size_t n = y.size();
    const std::size_t l = n - k;
    for (std::size_t i = k; i < n; ++i) y[i] = s_linear(y[i], 0.35);

    Vector y2(k + l / 2);
    std::copy_n(y.begin(), k, y2.begin());
    for (std::size_t i = 0; i < l / 2; ++i) {
        const double pair[2] = {y[k + 2 * i], y[k + 2 * i + 1]};
        y2[k + i] = r_nonsep(pair, 2);
    }
    const std::span<const double> ys(y2);
    Vector t = reduce_groups(m, k, l / 2, [&](std::size_t lo, std::size_t hi) {
        return r_sum(ys.subspan(lo, hi - lo));
    });

    Vector degenerate(m - 1, 0.0);
    degenerate[0] = 1.0;
    const Vector x = shape_args(t, degenerate);
    Vector h(m);
    for (std::size_t i = 1; i <= m; ++i) h[i - 1] = linear(x, i, m);
    return scale(x, h);
}

Vector concave_tail(Vector y, std::size_t m, std::size_t k)
{
    const std::span<const double> ys(y);
    Vector t = reduce_groups(m, k, y.size() - k, [&](std::size_t lo, std::size_t hi) {
        return r_sum(ys.subspan(lo, hi - lo));
    });
    const Vector ones(m - 1, 1.0);
    const Vector x = shape_args(t, ones);
    Vector h(m);
    for (std::size_t i = 1; i <= m; ++i) h[i - 1] = concave(x, i, m);
    return scale(x, h);
}

Vector wfg5(Vector y, std::size_t m, std::size_t k)
{
    for (auto& v : y) v = s_decept(v, 0.35, 0.001, 0.05);
    return concave_tail(std::move(y), m, k);
}

Vector wfg7(Vector y, std::size_t m, std::size_t k)
{
    const std::size_t n = y.size();
    Vector t1 = y;
    for (std::size_t i = 0; i < k; ++i) {
        const double u = r_sum(std::span<const double>(y).subspan(i + 1));
        t1[i] = b_param(y[i], u, 0.98 / 49.98, 0.02, 50.0);
    }
    for (std::size_t i = k; i < n; ++i) t1[i] = s_linear(t1[i], 0.35);
    return concave_tail(std::move(t1), m, k);
}

} // namespace

Vector wfg_evaluate(int index, std::size_t m, std::size_t k, std::span<const double> z)
{
    const std::size_t n = z.size();
    Vector y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = z[i] / (2.0 * static_cast<double>(i + 1));

    switch (index) {
    case 1: return wfg1(std::move(y), m, k);
    case 3: return wfg3(std::move(y), m, k);
    case 5: return wfg5(std::move(y), m, k);
    case 7: return wfg7(std::move(y), m, k);
    default: throw std::invalid_argument("WFG" + std::to_string(index) + " is not registered");
    }
}

} // namespace pbemo::problems::detail
