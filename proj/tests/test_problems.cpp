#include <doctest.h>

#include <array>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "pbemo/problems.hpp"

using namespace pbemo;
using namespace pbemo::problems;

namespace {

// Same point sequence as data/gen_problem_reference.py.
double frac(double a) { return a - std::floor(a); }

nlohmann::json load_reference()
{
    std::ifstream in(std::string(PBEMO_TEST_DATA) + "/problem_reference.json");
    REQUIRE(in.good());
    return nlohmann::json::parse(in);
}

} // namespace

TEST_CASE("evaluate matches the frozen pymoo reference on every instance")
{
    const auto ref = load_reference();
    const double a = ref["A"], b = ref["B"], c = ref["C"];
    const int points = ref["points"];
    const auto keys = problem_keys();
    CHECK(keys.size() == 33);

    for (const auto& key : keys) {
        INFO(key);
        const auto& spec = problem(key);
        const auto& row = ref["problems"].at(key);
        REQUIRE(row["n"].get<std::size_t>() == spec.n);
        REQUIRE(row["m"].get<std::size_t>() == spec.m);
        double worst = 0.0;
        for (int i = 0; i < points; ++i) {
            Vector x(spec.n);
            for (std::size_t j = 0; j < spec.n; ++j) {
                const double u = frac((i + 1) * a + static_cast<double>(j + 1) * b +
                                      (i + 1) * static_cast<double>(j + 1) * c);
                x[j] = spec.lower[j] + (spec.upper[j] - spec.lower[j]) * u;
            }
            const Vector f = evaluate(spec, x);
            const auto& expected = row["f"][i];
            for (std::size_t k = 0; k < spec.m; ++k) {
                const double e = expected[k];
                worst = std::max(worst, std::fabs(f[k] - e) / std::max(1.0, std::fabs(e)));
            }
        }
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("ZDT1 hand-evaluated points")
{
    const auto& spec = problem("zdt1");
    Vector x(30, 0.0);
    x[0] = 0.3;
    const Vector f = evaluate(spec, x);
    CHECK(f[0] == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(f[1] == doctest::Approx(1.0 - std::sqrt(0.3)).epsilon(1e-15));
    CHECK(f[1] == doctest::Approx(0.452277).epsilon(1e-6));

    const Vector zero = evaluate(spec, Vector(30, 0.0));
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 1.0);
}

TEST_CASE("spherical DTLZ fronts have unit norm with distance variables at 0.5")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const char* base : {"dtlz2", "dtlz3", "dtlz4"}) {
        for (int m : {3, 5, 8, 10}) {
            const auto& spec = problem(std::string(base) + "-m" + std::to_string(m));
            for (int trial = 0; trial < 50; ++trial) {
                Vector x(spec.n, 0.5);
                for (std::size_t j = 0; j + 1 < spec.m; ++j) x[j] = u(rng);
                const Vector f = evaluate(spec, x);
                double sq = 0.0;
                for (double v : f) sq += v * v;
                CHECK(sq == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
    Vector mid(problem("dtlz2-m3").n, 0.5);
    const Vector f = evaluate(problem("dtlz2-m3"), mid);
    CHECK(std::sqrt(f[0] * f[0] + f[1] * f[1] + f[2] * f[2]) == doctest::Approx(1.0));
}

TEST_CASE("evaluate rejects bad input instead of clamping")
{
    const auto& spec = problem("zdt1");
    CHECK_THROWS_AS(evaluate(spec, Vector(29, 0.0)), std::invalid_argument);
    Vector x(30, 0.0);
    x[3] = 1.5;
    CHECK_THROWS_AS(evaluate(spec, x), std::invalid_argument);
    x[3] = -1e-12;
    CHECK_THROWS_AS(evaluate(spec, x), std::invalid_argument);
}

TEST_CASE("registry constants")
{
    CHECK(golden_point(problem("zdt1")) == Vector{0.3, 0.4});
    CHECK(golden_point(problem("dtlz2-m3")) == Vector{0.7, 0.8, 0.5});
    CHECK(golden_point(problem("wfg5-m3")) == Vector{0.3, 0.7, 0.3});
    CHECK_THROWS_AS(golden_point(problem("dtlz1-m10")), std::out_of_range);
    CHECK_THROWS_AS(problem("zdt5"), std::out_of_range);

    CHECK(problem("zdt4").n == 10);
    CHECK(problem("zdt6").n == 10);
    CHECK(problem("zdt2").n == 30);
    CHECK(problem("dtlz1-m5").n == 9);
    CHECK(problem("dtlz2-m5").n == 14);
    CHECK(problem("wfg7-m3").n == 24);

    CHECK(problem("zdt3").pop_size == 100);
    CHECK(problem("dtlz4-m8").pop_size == 224);
    CHECK(problem("dtlz1-m10").pop_size == 288);
    CHECK(problem("wfg1-m3").pop_size == 64);

    CHECK(problem("zdt1").max_gen == 250);
    CHECK(problem("dtlz1-m3").max_gen == 550);
    CHECK(problem("dtlz2-m5").max_gen == 350);
    CHECK(problem("dtlz3-m10").max_gen == 1400);
    CHECK(problem("wfg3-m3").max_gen == 1050);

    for (const auto& key : problem_keys()) {
        const auto& s = problem(key);
        INFO(key);
        CHECK(s.m >= 2);
        CHECK(s.n >= s.m);
        for (std::size_t i = 0; i < s.n; ++i) CHECK(s.lower[i] < s.upper[i]);
        if (s.golden) CHECK(s.golden->size() == s.m);
    }

    const auto table = constants_table();
    CHECK(table.size() == 33);
    CHECK(table[0]["key"] == "zdt1");
    CHECK(table[0]["golden_point"] == nlohmann::json({0.3, 0.4}));
}

TEST_CASE("dominance")
{
    CHECK_FALSE(dominates(Vector{0, 0}, Vector{0, 0}));
    CHECK(dominates(Vector{0.1, 0.2}, Vector{0.1, 0.3}));
    CHECK_THROWS_AS(dominates(Vector{0, 0}, Vector{0, 0, 0}), std::invalid_argument);

    // Truth table over {<, =, >}^2: dominance iff no '>' and at least one '<'.
    const std::array<double, 3> offsets = {-1.0, 0.0, 1.0};
    for (double d0 : offsets)
        for (double d1 : offsets) {
            const Vector a{1.0 + d0, 1.0 + d1};
            const Vector b{1.0, 1.0};
            const bool expected = d0 <= 0 && d1 <= 0 && (d0 < 0 || d1 < 0);
            CHECK(dominates(a, b) == expected);
        }
}

TEST_CASE("dominance is irreflexive, antisymmetric and transitive on sampled triples")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> coord(0, 3);
    for (int trial = 0; trial < 5000; ++trial) {
        Vector a(3), b(3), c(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = coord(rng);
            b[i] = coord(rng);
            c[i] = coord(rng);
        }
        CHECK_FALSE(dominates(a, a));
        CHECK_FALSE((dominates(a, b) && dominates(b, a)));
        if (dominates(a, b) && dominates(b, c)) CHECK(dominates(a, c));
    }
}
