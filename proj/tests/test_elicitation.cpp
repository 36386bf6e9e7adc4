#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "oracles.hpp"
#include "pbemo/elicitation.hpp"
#include "pbemo/mixture.hpp"

using namespace pbemo;
using namespace pbemo::elicitation;

namespace {

GaussianComponent component(Vector mean, Vector var, std::size_t session = 1)
{
    const double s = *std::max_element(var.begin(), var.end());
    return {std::move(mean), std::move(var), s, session};
}

} // namespace

TEST_CASE("expand_samples repeats each solution by its counters")
{
    const std::vector<Vector> pop{{1.0}, {2.0}};
    const std::vector<std::size_t> v{2, 0}, l{0, 2};
    const auto s = expand_samples(pop, v, l);
    CHECK(s.winners == std::vector<Vector>{{1.0}, {1.0}});
    CHECK(s.losers == std::vector<Vector>{{2.0}, {2.0}});

    const std::vector<std::size_t> zero{0, 0};
    CHECK_THROWS_AS(expand_samples(pop, zero, zero), InsufficientFeedback);
    CHECK_THROWS_AS(expand_samples(pop, v, zero), InsufficientFeedback);
    CHECK_THROWS_AS(expand_samples(pop, std::vector<std::size_t>{1}, l), std::invalid_argument);

    Rng rng(3);
    std::uniform_int_distribution<std::size_t> count(0, 6);
    std::vector<Vector> many(30, Vector{0.0, 1.0});
    for (int t = 0; t < 20; ++t) {
        std::vector<std::size_t> wins(30), losses(30);
        for (auto& w : wins) w = count(rng);
        for (auto& x : losses) x = count(rng);
        wins[0] = losses[1] = 1;
        const auto e = expand_samples(many, wins, losses);
        CHECK(e.winners.size() == std::accumulate(wins.begin(), wins.end(), std::size_t{0}));
        CHECK(e.losers.size() == std::accumulate(losses.begin(), losses.end(), std::size_t{0}));
    }
}

TEST_CASE("moment features are stacked element-wise powers")
{
    CHECK(moment_features(Vector{0.5}, 2) == Vector{0.5, 0.25});
    CHECK(moment_features(Vector(4, 1.0), 3) == Vector(12, 1.0));
    CHECK_THROWS_AS(moment_features(Vector{1.0}, 0), std::invalid_argument);

    Rng rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    Vector x(5);
    for (auto& v : x) v = u(rng);
    const Vector phi = moment_features(x, 3);
    REQUIRE(phi.size() == 15);
    for (std::size_t order = 1; order <= 3; ++order)
        for (std::size_t d = 0; d < 5; ++d)
            CHECK(phi[(order - 1) * 5 + d] == doctest::Approx(std::pow(x[d], static_cast<double>(order))));
}

TEST_CASE("identical winning and losing sets give unit ratios")
{
    const std::vector<Vector> pts{{1.0, 2.0}, {2.0, 1.0}, {3.0, 3.0}, {1.0, 3.0}, {1.0, 2.0}};
    const auto est = estimate_density_ratio(pts, pts);
    CHECK_FALSE(est.fallback);
    REQUIRE(est.weights.size() == pts.size());
    for (double w : est.weights) CHECK(w == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("ratio weights are non-negative with a uniform fallback")
{
    Rng rng(17);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        std::vector<Vector> a(20, Vector(3)), b(15, Vector(3));
        for (auto& x : a)
            for (auto& v : x) v = n(rng);
        for (auto& x : b)
            for (auto& v : x) v = n(rng) + 1.0;
        const auto est = estimate_density_ratio(a, b);
        for (double w : est.weights) {
            CHECK(w >= 0.0);
            CHECK(std::isfinite(w));
        }
    }
    // All-zero features: every estimate is zero, so uniform weights take over.
    const std::vector<Vector> zeros(4, Vector{0.0, 0.0});
    const auto est = estimate_density_ratio(zeros, zeros);
    CHECK(est.fallback);
    CHECK(est.weights == Vector(4, 1.0));
    CHECK_THROWS_AS(estimate_density_ratio({}, zeros), std::invalid_argument);
}

TEST_CASE("1-D ratio-tilted mean matches the quadrature oracle")
{
    const double sd = 0.05;
    const double expected = testing::quadrature_tilted_mean(0.4, 0.6, sd);
    for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
        Rng rng(seed);
        std::normal_distribution<double> pl(0.4, sd), pv(0.6, sd);
        std::vector<Vector> xl(500), xv(500);
        for (auto& x : xl) x = {pl(rng)};
        for (auto& x : xv) x = {pv(rng)};
        const auto est = estimate_density_ratio(xl, xv, 2, default_ridge);
        const auto comp = fit_gaussian(est, 1);
        INFO("seed ", seed, " estimate ", comp.mean[0], " oracle ", expected);
        CHECK(std::fabs(comp.mean[0] - expected) <= 0.05);
        CHECK(comp.mean[0] > 0.4);
    }
}

TEST_CASE("swapping winners and losers flips the tilt")
{
    Rng rng(23);
    std::normal_distribution<double> n(0.0, 0.1);
    for (int t = 0; t < 20; ++t) {
        std::vector<Vector> a(60, Vector(2)), b(60, Vector(2));
        for (auto& x : a) x = {0.3 + n(rng), 0.5 + n(rng)};
        for (auto& x : b) x = {0.6 + n(rng), 0.4 + n(rng)};
        auto mean = [](const std::vector<Vector>& s) {
            Vector m(2, 0.0);
            for (const auto& x : s)
                for (std::size_t d = 0; d < 2; ++d) m[d] += x[d] / static_cast<double>(s.size());
            return m;
        };
        const Vector ma = mean(a), mb = mean(b);
        const Vector axis{mb[0] - ma[0], mb[1] - ma[1]};
        // Winners b, losers a: the fitted mean moves from a towards b.
        const auto toward_b = fit_gaussian(estimate_density_ratio(a, b), 1);
        const auto toward_a = fit_gaussian(estimate_density_ratio(b, a), 1);
        const double shift_b = (toward_b.mean[0] - ma[0]) * axis[0] + (toward_b.mean[1] - ma[1]) * axis[1];
        const double shift_a = (toward_a.mean[0] - mb[0]) * axis[0] + (toward_a.mean[1] - mb[1]) * axis[1];
        CHECK(shift_b > 0.0);
        CHECK(shift_a < 0.0);
    }
}

TEST_CASE("fit_gaussian moments")
{
    RatioEstimate one{{{0.2, 0.4}, {0.6, 0.8}, {1.0, 0.0}}, {0.0, 3.0, 0.0}, false};
    const auto c = fit_gaussian(one, 2);
    CHECK(c.session == 2);
    CHECK(c.mean[0] == doctest::Approx(0.6));
    CHECK(c.mean[1] == doctest::Approx(0.8));
    CHECK(c.variance == Vector{variance_floor, variance_floor});
    CHECK(c.sigma == variance_floor);

    Rng rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        RatioEstimate est;
        est.samples.assign(25, Vector(4));
        for (auto& x : est.samples)
            for (auto& v : x) v = u(rng);
        est.weights.assign(25, 2.5);
        const auto g = fit_gaussian(est, 1);
        for (std::size_t d = 0; d < 4; ++d) {
            double m = 0.0, s = 0.0;
            for (const auto& x : est.samples) m += x[d] / 25.0;
            for (const auto& x : est.samples) s += (x[d] - m) * (x[d] - m) / 25.0;
            CHECK(g.mean[d] == doctest::Approx(m));
            CHECK(g.variance[d] == doctest::Approx(s));
        }
        CHECK(g.sigma == *std::max_element(g.variance.begin(), g.variance.end()));
    }
    RatioEstimate zero{{{1.0}}, {0.0}, false};
    CHECK_THROWS_AS(fit_gaussian(zero, 1), std::invalid_argument);
}

TEST_CASE("mixture weights follow inverse sigma")
{
    PreferenceMixture mix;
    mix = mixture_update(mix, component({0.0}, {1.0}));
    CHECK(mix.weights() == Vector{1.0});
    mix = mixture_update(mix, component({1.0}, {3.0}, 2));
    CHECK(mix.weights()[0] == doctest::Approx(0.75));
    CHECK(mix.weights()[1] == doctest::Approx(0.25));
    CHECK(mix.normalizer() == doctest::Approx(1.0 + 1.0 / 3.0).epsilon(1e-12));

    PreferenceMixture eq;
    eq.add(component({0.0}, {0.5}));
    eq.add(component({2.0}, {0.5}));
    CHECK(eq.weights() == Vector{0.5, 0.5});

    GaussianComponent bad = component({0.0}, {1.0});
    bad.sigma = 0.0;
    CHECK_THROWS_AS(eq.add(bad), std::invalid_argument);
}

TEST_CASE("mixture density")
{
    PreferenceMixture empty;
    CHECK_THROWS_AS(mixture_density(empty, Vector{0.0}), std::logic_error);

    PreferenceMixture one;
    one.add(component({0.3, 0.6}, {0.02, 0.05}));
    const double at_mode = mixture_density(one, Vector{0.3, 0.6});
    Rng rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 1000; ++t) CHECK(mixture_density(one, Vector{u(rng), u(rng)}) <= at_mode);

    PreferenceMixture twice;
    twice.add(component({0.3, 0.6}, {0.02, 0.05}));
    twice.add(component({0.3, 0.6}, {0.02, 0.05}, 2));
    for (int t = 0; t < 50; ++t) {
        const Vector x{u(rng), u(rng)};
        CHECK(mixture_density(twice, x) == doctest::Approx(mixture_density(one, x)).epsilon(1e-12));
    }

    // Monte-Carlo integral over a box covering > 99.99% of the mass.
    PreferenceMixture two;
    two.add(component({0.3, 0.6}, {0.01, 0.02}));
    two.add(component({0.7, 0.2}, {0.03, 0.01}, 2));
    std::uniform_real_distribution<double> box(-1.0, 2.0);
    const int samples = 1000000;
    double sum = 0.0;
    for (int t = 0; t < samples; ++t) sum += mixture_density(two, Vector{box(rng), box(rng)});
    CHECK(sum / samples * 9.0 == doctest::Approx(1.0).epsilon(0.02));

    // Insertion order does not change the density.
    PreferenceMixture swapped;
    swapped.add(two.components()[1]);
    swapped.add(two.components()[0]);
    for (int t = 0; t < 20; ++t) {
        const Vector x{u(rng), u(rng)};
        CHECK(mixture_density(swapped, x) == doctest::Approx(mixture_density(two, x)).epsilon(1e-12));
    }
}

TEST_CASE("log density stays finite in high dimension")
{
    PreferenceMixture mix;
    mix.add(component(Vector(200, 0.5), Vector(200, 1e-6)));
    const Vector far(200, 0.0);
    CHECK(mix.density(far) == 0.0);
    CHECK(std::isfinite(mix.log_density(far)));
}

TEST_CASE("KL between sessions")
{
    Rng rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vector> samples(100, Vector(2));
    for (auto& x : samples) x = {u(rng), u(rng)};

    PreferenceMixture a;
    a.add(component({0.3, 0.3}, {0.01, 0.01}));
    CHECK(std::fabs(kl_between_sessions(a, a, samples)) <= 1e-12);

    PreferenceMixture far;
    far.add(component({0.3 + 10.0 * 0.1, 0.3}, {0.01, 0.01}));
    std::vector<Vector> around;
    for (int i = 0; i < 50; ++i) {
        around.push_back({0.3 + 0.1 * (u(rng) - 0.5), 0.3 + 0.1 * (u(rng) - 0.5)});
        around.push_back({1.3 + 0.1 * (u(rng) - 0.5), 0.3 + 0.1 * (u(rng) - 0.5)});
    }
    CHECK(kl_between_sessions(a, far, around) > 1.0);

    for (int t = 0; t < 100; ++t) {
        PreferenceMixture p, q;
        p.add(component({u(rng), u(rng)}, {0.01 + u(rng), 0.01 + u(rng)}));
        q.add(component({u(rng), u(rng)}, {0.01 + u(rng), 0.01 + u(rng)}));
        if (t % 2) q.add(component({u(rng), u(rng)}, {0.01 + u(rng), 0.01 + u(rng)}, 2));
        CHECK(kl_between_sessions(p, q, samples) >= -1e-9);
    }

    // Densities that underflow to zero still compare in log space.
    PreferenceMixture sharp;
    sharp.add(component({0.5, 0.5}, {1e-8, 1e-8}));
    const double d = kl_between_sessions(a, sharp, samples);
    CHECK(std::isfinite(d));
    CHECK(d > 0.0);

    CHECK_THROWS_AS(kl_between_sessions(PreferenceMixture{}, a, samples), std::invalid_argument);
    CHECK_THROWS_AS(kl_between_sessions(a, a, {}), std::invalid_argument);
}

TEST_CASE("termination threshold")
{
    CHECK(should_terminate(0.0, 1e-3));
    CHECK_FALSE(should_terminate(1e-2, 1e-3));
    CHECK(default_kl_threshold == 1e-3);
    CHECK(should_terminate(5e-4));
    CHECK_FALSE(should_terminate(0.0, 0.0));
}

TEST_CASE("snapshot carries each component and its weight")
{
    PreferenceMixture mix;
    mix.add(component({0.1, 0.2}, {0.01, 0.04}));
    mix.add(component({0.5, 0.5}, {0.02, 0.02}, 2));
    const auto s = mix.snapshot();
    REQUIRE(s["components"].size() == 2);
    CHECK(s["components"][0]["sigma"] == 0.04);
    CHECK(s["components"][1]["session"] == 2);
    const double w0 = s["components"][0]["weight"], w1 = s["components"][1]["weight"];
    CHECK(w0 + w1 == doctest::Approx(1.0));
    CHECK(s["normalizer"].get<double>() == doctest::Approx(25.0 + 50.0));
}
