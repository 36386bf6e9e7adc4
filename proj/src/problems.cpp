#include "pbemo/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pbemo::problems {
namespace {

constexpr double pi = std::numbers::pi;

// WFG layout: k = 2(m-1) position parameters, l = 20 distance parameters.
constexpr std::size_t wfg_distance_params = 20;

std::size_t wfg_position_params(std::size_t m) { return 2 * (m - 1); }

std::size_t dtlz_k(int index) { return index == 1 ? 5 : 10; }

std::size_t dtlz_pop_size(std::size_t m)
{
    switch (m) {
    case 3: return 64;
    case 5: return 128;
    case 8: return 224;
    case 10: return 288;
    default: throw std::out_of_range("no tabulated population size for m=" + std::to_string(m));
    }
}

std::size_t dtlz_max_gen(int index, std::size_t m)
{
    const std::size_t extra = 50 * (m - 2);
    switch (index) {
    case 1: return 500 + extra;
    case 3: return 1000 + extra;
    default: return 200 + extra; // DTLZ2, DTLZ4; DTLZ5/6 follow DTLZ2
    }
}

std::optional<Vector> dtlz_golden(int index, std::size_t m)
{
    if (index == 1) {
        switch (m) {
        case 3: return Vector{0.3, 0.3, 0.2};
        case 5: return Vector{0.2, 0.1, 0.1, 0.3, 0.4};
        case 8: return Vector{0.1, 0.2, 0.1, 0.4, 0.4, 0.1, 0.3, 0.1};
        default: return std::nullopt; // the m=10 row lists only nine coordinates
        }
    }
    if (index <= 4) {
        switch (m) {
        case 3: return Vector{0.7, 0.8, 0.5};
        case 5: return Vector{0.7, 0.6, 0.3, 0.8, 0.5};
        case 8: return Vector{0.6, 0.5, 0.75, 0.2, 0.3, 0.55, 0.7, 0.6};
        case 10: return Vector{0.3, 0.3, 0.3, 0.1, 0.3, 0.55, 0.35, 0.35, 0.25, 0.45};
        default: return std::nullopt;
        }
    }
    switch (m) {
    case 3: return Vector{0.2, 0.3, 0.6};
    case 5: return Vector{0.12, 0.12, 0.17, 0.24, 0.7};
    case 8: return Vector{0.04, 0.04, 0.0566, 0.8, 0.113, 0.16, 0.2263, 0.68};
    case 10: return Vector{0, 0, 0, 0, 0.0096, 0.027, 0.082, 0.25, 0.75, 0.08};
    default: return std::nullopt;
    }
}

ProblemSpec make_zdt(int index)
{
    ProblemSpec s;
    s.family = Family::zdt;
    s.index = index;
    s.m = 2;
    s.n = (index == 4 || index == 6) ? 10 : 30;
    s.lower.assign(s.n, 0.0);
    s.upper.assign(s.n, 1.0);
    if (index == 4) {
        std::fill(s.lower.begin() + 1, s.lower.end(), -5.0);
        std::fill(s.upper.begin() + 1, s.upper.end(), 5.0);
    }
    s.pop_size = 100;
    s.max_gen = 250;
    switch (index) {
    case 1: s.golden = Vector{0.3, 0.4}; break;
    case 2: s.golden = Vector{0.2, 0.8}; break;
    case 3: s.golden = Vector{0.15, 0.4}; break;
    case 4: s.golden = Vector{0.3, 0.4}; break;
    case 6: s.golden = Vector{0.9, 0.3}; break;
    default: break;
    }
    return s;
}

ProblemSpec make_dtlz(int index, std::size_t m)
{
    ProblemSpec s;
    s.family = Family::dtlz;
    s.index = index;
    s.m = m;
    s.n = m + dtlz_k(index) - 1;
    s.lower.assign(s.n, 0.0);
    s.upper.assign(s.n, 1.0);
    s.pop_size = dtlz_pop_size(m);
    s.max_gen = dtlz_max_gen(index, m);
    s.golden = dtlz_golden(index, m);
    return s;
}

ProblemSpec make_wfg(int index, std::size_t m)
{
    ProblemSpec s;
    s.family = Family::wfg;
    s.index = index;
    s.m = m;
    s.n = wfg_position_params(m) + wfg_distance_params;
    s.lower.assign(s.n, 0.0);
    s.upper.resize(s.n);
    for (std::size_t i = 0; i < s.n; ++i) s.upper[i] = 2.0 * static_cast<double>(i + 1);
    s.pop_size = 64;
    s.max_gen = 1000 + 50 * (m - 2);
    switch (index) {
    case 1: s.golden = Vector{0.2, 0.5, 0.6}; break;
    case 3: s.golden = Vector{0.6, 0.8, 0.8}; break;
    case 5: s.golden = Vector{0.3, 0.7, 0.3}; break;
    case 7: s.golden = Vector{0.7, 0.4, 0.4}; break;
    default: break;
    }
    return s;
}

const std::vector<ProblemSpec>& registry()
{
    static const std::vector<ProblemSpec> all = [] {
        std::vector<ProblemSpec> r;
        for (int i : {1, 2, 3, 4, 6}) r.push_back(make_zdt(i));
        for (std::size_t m : {3, 5, 8, 10})
            for (int i = 1; i <= 6; ++i) r.push_back(make_dtlz(i, m));
        for (int i : {1, 3, 5, 7}) r.push_back(make_wfg(i, 3));
        return r;
    }();
    return all;
}

Vector zdt(int index, std::span<const double> x)
{
    const std::size_t n = x.size();
    const double f1 = index == 6
        ? 1.0 - std::exp(-4.0 * x[0]) * std::pow(std::sin(6.0 * pi * x[0]), 6)
        : x[0];
    double g = 0.0;
    switch (index) {
    case 4:
        g = 1.0 + 10.0 * static_cast<double>(n - 1);
        for (std::size_t i = 1; i < n; ++i) g += x[i] * x[i] - 10.0 * std::cos(4.0 * pi * x[i]);
        break;
    case 6: {
        double sum = 0.0;
        for (std::size_t i = 1; i < n; ++i) sum += x[i];
        g = 1.0 + 9.0 * std::pow(sum / static_cast<double>(n - 1), 0.25);
        break;
    }
    default: {
        double sum = 0.0;
        for (std::size_t i = 1; i < n; ++i) sum += x[i];
        g = 1.0 + 9.0 * sum / static_cast<double>(n - 1);
        break;
    }
    }
    const double r = f1 / g;
    double h = 0.0;
    switch (index) {
    case 1:
    case 4: h = 1.0 - std::sqrt(r); break;
    case 2:
    case 6: h = 1.0 - r * r; break;
    case 3: h = 1.0 - std::sqrt(r) - r * std::sin(10.0 * pi * f1); break;
    default: throw std::logic_error("unknown ZDT index");
    }
    return {f1, g * h};
}

Vector dtlz(int index, std::size_t m, std::span<const double> x)
{
    const std::size_t n = x.size();
    const std::size_t k = n - m + 1;
    const auto tail = x.subspan(m - 1, k);

    double g = 0.0;
    switch (index) {
    case 1:
    case 3: {
        for (double xi : tail) g += (xi - 0.5) * (xi - 0.5) - std::cos(20.0 * pi * (xi - 0.5));
        g = 100.0 * (static_cast<double>(k) + g);
        break;
    }
    case 6:
        for (double xi : tail) g += std::pow(xi, 0.1);
        break;
    default:
        for (double xi : tail) g += (xi - 0.5) * (xi - 0.5);
        break;
    }

    Vector f(m);
    if (index == 1) {
        for (std::size_t i = 0; i < m; ++i) {
            double v = 0.5 * (1.0 + g);
            for (std::size_t j = 0; j + i + 1 < m; ++j) v *= x[j];
            if (i > 0) v *= 1.0 - x[m - i - 1];
            f[i] = v;
        }
        return f;
    }

    // Angles for the spherical families.
    Vector theta(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        if (index == 4) {
            theta[j] = std::pow(x[j], 100.0) * pi / 2.0;
        } else if ((index == 5 || index == 6) && j > 0) {
            theta[j] = pi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[j]);
        } else {
            theta[j] = x[j] * pi / 2.0;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        double v = 1.0 + g;
        for (std::size_t j = 0; j + i + 1 < m; ++j) v *= std::cos(theta[j]);
        if (i > 0) v *= std::sin(theta[m - i - 1]);
        f[i] = v;
    }
    return f;
}

} // namespace

std::string ProblemSpec::name() const
{
    switch (family) {
    case Family::zdt: return "zdt" + std::to_string(index);
    case Family::dtlz: return "dtlz" + std::to_string(index);
    case Family::wfg: return "wfg" + std::to_string(index);
    }
    return {};
}

std::string ProblemSpec::key() const
{
    if (family == Family::zdt) return name();
    return name() + "-m" + std::to_string(m);
}

const ProblemSpec& problem(std::string_view key)
{
    for (const auto& s : registry())
        if (s.key() == key) return s;
    throw std::out_of_range("unknown problem key: " + std::string(key));
}

std::vector<std::string> problem_keys()
{
    std::vector<std::string> keys;
    for (const auto& s : registry()) keys.push_back(s.key());
    return keys;
}

Vector evaluate(const ProblemSpec& spec, std::span<const double> x)
{
    if (x.size() != spec.n)
        throw std::invalid_argument(spec.key() + ": expected " + std::to_string(spec.n) +
                                    " decision variables, got " + std::to_string(x.size()));
    for (std::size_t i = 0; i < spec.n; ++i) {
        if (!(x[i] >= spec.lower[i] && x[i] <= spec.upper[i]))
            throw std::invalid_argument(spec.key() + ": x[" + std::to_string(i) + "] out of bounds");
    }
    switch (spec.family) {
    case Family::zdt: return zdt(spec.index, x);
    case Family::dtlz: return dtlz(spec.index, spec.m, x);
    case Family::wfg: return detail::wfg_evaluate(spec.index, spec.m, wfg_position_params(spec.m), x);
    }
    throw std::logic_error("unreachable");
}

Vector golden_point(const ProblemSpec& spec)
{
    if (!spec.golden) throw std::out_of_range("no tabulated golden point for " + spec.key());
    return *spec.golden;
}

bool dominates(std::span<const double> f1, std::span<const double> f2)
{
    if (f1.size() != f2.size()) throw std::invalid_argument("dominates: dimension mismatch");
    bool strictly = false;
    for (std::size_t i = 0; i < f1.size(); ++i) {
        if (f1[i] > f2[i]) return false;
        if (f1[i] < f2[i]) strictly = true;
    }
    return strictly;
}

nlohmann::json constants_table()
{
    auto rows = nlohmann::json::array();
    for (const auto& s : registry()) {
        nlohmann::json row = {
            {"key", s.key()},   {"name", s.name()},         {"m", s.m},
            {"n", s.n},         {"lower", s.lower},         {"upper", s.upper},
            {"pop_size", s.pop_size}, {"max_gen", s.max_gen},
        };
        row["golden_point"] = s.golden ? nlohmann::json(*s.golden) : nlohmann::json(nullptr);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pbemo::problems
