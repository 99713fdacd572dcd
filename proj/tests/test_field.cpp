#include "vpbgk/field.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <omp.h>

#include <random>

using namespace vpbgk;
using vpbgk::testing::cosine_field;

TEST_CASE("green_kernel branches") {
    CHECK(green_kernel(0.5, 0.25) == 0.25);
    CHECK(green_kernel(0.5, 0.75) == -0.25);
    CHECK(green_kernel(0.5, 0.5) == 0.5);
    for (double x : {0.0, 0.3, 1.0}) CHECK(green_kernel(x, 0.0) == 0.0);
    CHECK_THROWS_AS(green_kernel(1.5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(green_kernel(0.5, -0.1), std::invalid_argument);
}

TEST_CASE("electric_field: uniform density gives exactly zero") {
    const auto g = build_grid<double>(64, 4, 1.0);
    const Field e = electric_field(g, Field::Ones(64));
    CHECK((e == 0.0).all());
}

TEST_CASE("electric_field: single nonzero summand") {
    const auto g = build_grid<double>(16, 4, 1.0);
    const Index k0 = 5;
    const double a = 0.37;
    Field rho = Field::Ones(16);
    rho(k0) += a;
    const Field e = electric_field(g, rho);
    for (Index i = 0; i < 16; ++i) CHECK(e(i) == doctest::Approx(green_kernel(g.x(i), g.x(k0)) * a * g.dx).epsilon(1e-14));
}

TEST_CASE("electric_field: cosine density matches the analytic field") {
    const auto g = build_grid<double>(640, 4, 1.0);
    Field rho(640);
    for (Index i = 0; i < 640; ++i) rho(i) = 1.0 + 0.01 * std::cos(2.0 * std::numbers::pi * g.x(i));
    const Field e = electric_field(g, rho);
    double err = 0;
    for (Index i = 0; i < 640; ++i) err = std::max(err, std::abs(e(i) - cosine_field(0.01, g.x(i))));
    CHECK(err <= 5.0 * g.dx * 0.01);
}

TEST_CASE("electric_field: length mismatch") {
    const auto g = build_grid<double>(8, 4, 1.0);
    CHECK_THROWS_AS(electric_field(g, Field::Ones(7)), std::invalid_argument);
}

TEST_CASE("electric_field properties on random densities") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Index n = 2 + static_cast<Index>(rng() % 200);
        const auto g = build_grid<double>(n, 2, 1.0);
        const Field gvec = testing::random_vector(n, rng, -1.0, 1.0);
        const Field hvec = testing::random_vector(n, rng, -1.0, 1.0);
        const double a = 0.7, b = -1.3;

        const Field eg = electric_field(g, Field(1.0 + gvec));
        const Field eh = electric_field(g, Field(1.0 + hvec));
        const Field ecomb = electric_field(g, Field(1.0 + a * gvec + b * hvec));
        CHECK(((ecomb - (a * eg + b * eh)).abs() <= 1e-13).all());

        const double bound = gvec.abs().sum() * g.dx;
        CHECK((eg.abs() <= bound * (1 + 1e-14)).all());

        const Field ep = electric_field(g, Field(1.0 + gvec), FieldMethod::Prefix);
        CHECK(((ep - eg).abs() <= 1e-13).all());
    }
}

TEST_CASE("electric_field is bit-identical across thread counts") {
    std::mt19937_64 rng(3);
    const auto g = build_grid<double>(257, 2, 1.0);
    const Field rho = 1.0 + testing::random_vector(257, rng, -0.5, 0.5);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const Field e1 = electric_field(g, rho);
    omp_set_num_threads(4);
    const Field e4 = electric_field(g, rho);
    omp_set_num_threads(saved);
    CHECK((e1 == e4).all());
}
