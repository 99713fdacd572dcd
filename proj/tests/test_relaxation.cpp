#include "vpbgk/relaxation.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace vpbgk;
using vpbgk::testing::gaussian;
using vpbgk::testing::max_rel_diff;
using vpbgk::testing::random_field;

namespace {

Macro uniform_macro(Index n, double rho, double u, double temp) {
    return Macro{Field::Constant(n, rho), Field::Constant(n, u), Field::Constant(n, temp)};
}

// Rectangle-rule moments in long double, independent of discrete_moments.
struct Moments {
    long double rho, u, temp;
};

Moments reference_moments(const std::function<long double(long double)>& g, const Grid& grid) {
    long double m0 = 0, m1 = 0, m2 = 0;
    for (Index j = -grid.n_v; j <= grid.n_v; ++j) {
        const long double v = static_cast<long double>(j) * grid.dv;
        const long double f = g(v);
        m0 += f;
        m1 += v * f;
        m2 += v * v * f;
    }
    m0 *= grid.dv;
    m1 *= grid.dv;
    m2 *= grid.dv;
    const long double u = m1 / m0;
    long double c = 0;
    for (Index j = -grid.n_v; j <= grid.n_v; ++j) {
        const long double v = static_cast<long double>(j) * grid.dv;
        c += (v - u) * (v - u) * g(v);
    }
    return {m0, u, c * grid.dv / m0};
}

}  // namespace

TEST_CASE("discrete_moments of the unit Maxwellian on the (40, 80) grid") {
    const auto g = build_grid<double>(40, 80, 15.0);
    const Distribution f = discrete_maxwellian(uniform_macro(40, 1, 0, 1), g);
    const Macro m = discrete_moments(f, g);
    const auto ref = reference_moments(
        [](long double v) { return std::exp(-v * v / 2) / std::sqrt(2 * std::numbers::pi_v<long double>); }, g);
    CHECK(std::abs(static_cast<double>(ref.rho) - 1.0) < 1e-12);
    CHECK(std::abs(static_cast<double>(ref.temp) - 1.0) < 1e-12);
    for (Index i = 0; i < 40; ++i) {
        CHECK(std::abs(m.rho(i) - 1.0) <= 1e-10);
        CHECK(std::abs(m.u(i)) <= 1e-10);
        CHECK(std::abs(m.temp(i) - 1.0) <= 1e-10);
    }
}

TEST_CASE("discrete_moments: zero field is degenerate") {
    const auto g = build_grid<double>(4, 8, 3.0);
    Distribution f(g);
    CHECK_THROWS_AS(discrete_moments(f, g), DegenerateDensity);
}

TEST_CASE("discrete_moments: a single velocity row has zero temperature") {
    const auto g = build_grid<double>(4, 8, 3.0);
    Distribution f(g);
    for (Index i = 0; i < 4; ++i) f(i, 3) = 1.0;
    CHECK_THROWS_AS(discrete_moments(f, g), NegativeTemperature);
}

TEST_CASE("discrete_moments: shifted even profiles recover the shift") {
    const auto g = build_grid<double>(4, 80, 15.0);
    SUBCASE("Gaussian") {
        Distribution f(g);
        for (Index i = 0; i < 4; ++i)
            for (Index j = -g.n_v; j <= g.n_v; ++j) f(i, j) = std::exp(-0.5 * (g.v(j) - 2) * (g.v(j) - 2));
        const Macro m = discrete_moments(f, g);
        CHECK(m.u(0) == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(m.temp(0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("compact cosine bump") {
        auto bump = [](double w) { return std::abs(w) < 3 ? std::pow(std::cos(std::numbers::pi * w / 6), 2) : 0.0; };
        Distribution f(g);
        for (Index i = 0; i < 4; ++i)
            for (Index j = -g.n_v; j <= g.n_v; ++j) f(i, j) = bump(g.v(j) - 2);
        const Macro m = discrete_moments(f, g);
        CHECK(std::abs(m.u(0) - 2.0) <= g.dv * g.dv);
    }
}

TEST_CASE("discrete_moments: compensated summation agrees") {
    std::mt19937_64 rng(2);
    const auto g = build_grid<double>(6, 50, 5.0);
    const Distribution f = random_field(g, rng, 0.1, 1.0);
    const Macro a = discrete_moments(f, g, false);
    const Macro b = discrete_moments(f, g, true);
    CHECK(((a.rho - b.rho).abs() <= 1e-13).all());
    CHECK(((a.temp - b.temp).abs() <= 1e-12).all());
}

TEST_CASE("discrete_maxwellian: values") {
    const auto g = build_grid<double>(3, 16, 8.0);
    const Distribution m1 = discrete_maxwellian(uniform_macro(3, 1, 0, 1), g);
    CHECK(m1(0, 0) == doctest::Approx(0.3989422804).epsilon(1e-10));
    for (Index j = -g.n_v - 1; j <= g.n_v + 1; ++j)
        CHECK(m1(1, j) == doctest::Approx(gaussian(1, 0, 1, g.v(j))).epsilon(1e-14));

    const Distribution m2 = discrete_maxwellian(uniform_macro(3, 2, 0, 1), g);
    CHECK(((m2.storage() - 2.0 * m1.storage()).abs() <= 1e-15).all());

    // Translation by 3 = 6 velocity cells.
    const Distribution m3 = discrete_maxwellian(uniform_macro(3, 1, 3, 1), g);
    for (Index j = -g.n_v + 6; j <= g.n_v; ++j) CHECK(m3(2, j) == doctest::Approx(m1(2, j - 6)).epsilon(1e-13));

    // Ghosts sit at +-(v_max + dv).
    CHECK(m1(0, g.n_v + 1) == doctest::Approx(gaussian(1, 0, 1, g.v_max + g.dv)).epsilon(1e-13));
}

TEST_CASE("discrete_maxwellian: invalid moments") {
    const auto g = build_grid<double>(3, 4, 2.0);
    CHECK_THROWS_AS(discrete_maxwellian(uniform_macro(3, 0, 0, 1), g), DegenerateDensity);
    CHECK_THROWS_AS(discrete_maxwellian(uniform_macro(3, 1, 0, -1), g), NegativeTemperature);
}

TEST_CASE("imex_step: Maxwellian input is a fixed point") {
    const auto g = build_grid<double>(8, 80, 15.0);
    const Distribution m = discrete_maxwellian(uniform_macro(8, 1.3, 0.2, 0.9), g);
    const Distribution out = imex_step(m, g, 1.0, 1e-3);
    CHECK(max_rel_diff(out, m) <= 1e-12);
}

TEST_CASE("imex_step: relaxation limits") {
    std::mt19937_64 rng(4);
    const auto g = build_grid<double>(8, 20, 5.0);
    const Distribution f = random_field(g, rng, 0.1, 1.0);
    const Distribution slow = imex_step(f, g, 1e12, 1e-3);
    CHECK(max_rel_diff(slow, f) <= 1e-14);
    const Distribution fast = imex_step(f, g, 1e-12, 1e-3);
    const Distribution target = discrete_maxwellian(discrete_moments(f, g), g);
    CHECK(max_rel_diff(fast, target) <= 1e-8);
}

TEST_CASE("imex_step properties on random data") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 10; ++trial) {
        const auto g = build_grid<double>(2 + rng() % 10, 10 + rng() % 30, 6.0);
        const Distribution f = random_field(g, rng, 0.0, 1.0);
        const double eps = std::pow(10.0, -4.0 + (rng() % 50) / 10.0);
        const double dt = 1e-3;
        const Distribution out = imex_step(f, g, eps, dt);
        const Distribution m = discrete_maxwellian(discrete_moments(f, g), g);
        for (Index i = 0; i < g.n_x; ++i)
            for (Index j = -g.n_v; j <= g.n_v; ++j) {
                const double lo = std::min(f(i, j), m(i, j)), hi = std::max(f(i, j), m(i, j));
                REQUIRE(out(i, j) >= lo * (1 - 1e-15));
                REQUIRE(out(i, j) <= hi * (1 + 1e-15));
            }
        // Scaling: c f -> c out.
        Distribution scaled = f;
        scaled.storage() *= 3.5;
        const Distribution out_scaled = imex_step(scaled, g, eps, dt);
        Distribution expect = out;
        expect.storage() *= 3.5;
        CHECK(max_rel_diff(out_scaled, expect) <= 1e-13);
    }
}

TEST_CASE("imex_step: moment drift per step in the smooth near-equilibrium regime") {
    const auto g = build_grid<double>(16, 80, 15.0);
    Distribution f(g);
    for (Index i = 0; i < g.n_x; ++i) {
        const double x = g.x(i);
        for (Index j = -g.n_v; j <= g.n_v; ++j)
            f(i, j) = (1 + 0.01 * std::cos(2 * std::numbers::pi * x)) *
                      (0.7 * gaussian(1, 0.1, 1, g.v(j)) + 0.3 * gaussian(1, -0.2, 1.2, g.v(j)));
    }
    f.refresh_ghosts();
    const Macro before = discrete_moments(f, g);
    const Macro after = discrete_moments(imex_step(f, g, 0.01, 1e-3), g);
    CHECK((((after.rho - before.rho) / before.rho).abs() <= 1e-9).all());
    CHECK(((after.u - before.u).abs() <= 1e-9).all());
    CHECK((((after.temp - before.temp) / before.temp).abs() <= 1e-9).all());
}
