#include <doctest.h>

#include <cmath>

#include "pbemo/operators.hpp"

using namespace pbemo;
using namespace pbemo::evolution;

namespace {

struct UnitBox {
    Vector lo;
    Vector hi;
    explicit UnitBox(std::size_t n) : lo(n, 0.0), hi(n, 1.0) {}
    Box box() const { return Box{lo, hi}; }
};

} // namespace

TEST_CASE("defaults follow the n-dependent mutation rate")
{
    const auto p = GeneticParams::defaults(30);
    CHECK(p.pc == 1.0);
    CHECK(p.eta_c == 20.0);
    CHECK(p.eta_m == 20.0);
    CHECK(p.pm == doctest::Approx(1.0 / 30.0));
}

TEST_CASE("sbx with identical parents returns the parents")
{
    const UnitBox b(5);
    Rng rng(3);
    const Vector p{0.1, 0.5, 0.25, 0.9, 0.7};
    for (int i = 0; i < 100; ++i) {
        auto [c1, c2] = sbx_crossover(p, p, b.box(), GeneticParams::defaults(5), rng);
        CHECK(c1 == p);
        CHECK(c2 == p);
    }
}

TEST_CASE("sbx children stay in bounds and are seed-deterministic")
{
    Vector lo{-5, -5, 0, 0};
    Vector hi{5, 5, 1, 10};
    const Box box{lo, hi};
    GeneticParams params = GeneticParams::defaults(4);
    params.eta_c = 1.0; // wide spread exercises the clamp
    Rng rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 2000; ++t) {
        Vector p1(4), p2(4);
        for (std::size_t i = 0; i < 4; ++i) {
            p1[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
            p2[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
        }
        auto [c1, c2] = sbx_crossover(p1, p2, box, params, rng);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(c1[i] >= lo[i]);
            CHECK(c1[i] <= hi[i]);
            CHECK(c2[i] >= lo[i]);
            CHECK(c2[i] <= hi[i]);
        }
    }

    Rng a(99), b(99);
    const Vector p1{0.1, 0.2, 0.3, 4.0}, p2{-3.0, 2.0, 0.9, 1.0};
    CHECK(sbx_crossover(p1, p2, box, params, a) == sbx_crossover(p1, p2, box, params, b));
}

TEST_CASE("sbx child mean equals the parent midpoint")
{
    const UnitBox b(1);
    Rng rng(5);
    const Vector p1{0.35}, p2{0.55};
    const int trials = 100000;
    double sum = 0.0, sq = 0.0;
    for (int t = 0; t < trials; ++t) {
        auto [c1, c2] = sbx_crossover(p1, p2, b.box(), GeneticParams::defaults(1), rng);
        for (double c : {c1[0], c2[0]}) {
            sum += c;
            sq += c * c;
        }
    }
    const double n = 2.0 * trials;
    const double mean = sum / n;
    const double se = std::sqrt((sq / n - mean * mean) / n);
    CHECK(std::fabs(mean - 0.45) <= 3.0 * se);
}

TEST_CASE("polynomial mutation with pm = 0 is the identity")
{
    const UnitBox b(6);
    Rng rng(1);
    GeneticParams params = GeneticParams::defaults(6);
    params.pm = 0.0;
    const Vector x{0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    for (int i = 0; i < 100; ++i) CHECK(polynomial_mutation(x, b.box(), params, rng) == x);
}

TEST_CASE("polynomial mutation stays in bounds")
{
    const UnitBox b(3);
    Rng rng(2);
    GeneticParams params{1.0, 20.0, 1.0, 0.5};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 5000; ++t) {
        const Vector x{u(rng), 0.0, 1.0};
        const Vector y = polynomial_mutation(x, b.box(), params, rng);
        for (double v : y) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("per-gene mutation frequency matches pm")
{
    const std::size_t n = 10;
    const UnitBox b(n);
    Rng rng(8);
    GeneticParams params = GeneticParams::defaults(n);
    params.pm = 0.1;
    const Vector x(n, 0.5);
    const int trials = 10000;
    std::size_t changed = 0;
    for (int t = 0; t < trials; ++t) {
        const Vector y = polynomial_mutation(x, b.box(), params, rng);
        for (std::size_t i = 0; i < n; ++i) changed += y[i] != x[i];
    }
    const double genes = static_cast<double>(trials * n);
    const double rate = static_cast<double>(changed) / genes;
    const double se = std::sqrt(params.pm * (1.0 - params.pm) / genes);
    CHECK(std::fabs(rate - params.pm) <= 3.0 * se);
}

TEST_CASE("random_point is uniform in the box")
{
    Vector lo{-1.0, 10.0}, hi{1.0, 20.0};
    Rng rng(4);
    double m0 = 0.0, m1 = 0.0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        const Vector x = random_point(Box{lo, hi}, rng);
        REQUIRE(x[0] >= -1.0);
        REQUIRE(x[0] <= 1.0);
        REQUIRE(x[1] >= 10.0);
        REQUIRE(x[1] <= 20.0);
        m0 += x[0];
        m1 += x[1];
    }
    CHECK(m0 / trials == doctest::Approx(0.0).scale(1.0).epsilon(0.03));
    CHECK(m1 / trials == doctest::Approx(15.0).epsilon(0.01));
}
