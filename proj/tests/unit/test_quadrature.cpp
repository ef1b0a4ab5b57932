#include <cmath>

#include <doctest.h>

#include "blochlab/quadrature.hpp"

using namespace blochlab;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("polynomial integrals are near machine accurate") {
    const double v = integrate_real([](double t) { return t * t * t; }, 0.0, 1.0, 1e-12);
    CHECK(v == doctest::Approx(0.25).epsilon(1e-14));

    const double w = integrate_real([](double t) { return 5.0 * std::pow(t, 4); }, -1.0, 2.0, 1e-12);
    CHECK(w == doctest::Approx(33.0).epsilon(1e-13));
}

TEST_CASE("complex integrand") {
    const auto f = [](double t) { return std::exp(Cplx{0.0, t}); };
    const auto r = integrate(f, 0.0, M_PI, 1e-12);
    CHECK(std::abs(r.value - Cplx{0.0, 2.0}) < 1e-11);
    CHECK(r.error_estimate <= 1e-12);
}

TEST_CASE("steep but integrable integrand converges by subdivision") {
    // 1/sqrt(1 - t) on [0, 1 - 1e-8]; value 2 (1 - 1e-4).
    const double r = 1.0 - 1e-8;
    const double v = integrate_real(
        [](double t) { return 1.0 / std::sqrt(1.0 - t); }, 0.0, r, 1e-9);
    CHECK(v == doctest::Approx(2.0 * (1.0 - 1e-4)).epsilon(1e-10));
}

TEST_CASE("orientation and degenerate interval") {
    CHECK(integrate_real([](double t) { return t; }, 1.0, 0.0, 1e-12) ==
          doctest::Approx(-0.5));
    CHECK(integrate_real([](double t) { return t; }, 0.3, 0.3, 1e-12) == 0.0);
}

TEST_CASE("tolerance failure reports the achieved error") {
    // A discontinuity placed at an irrational point defeats bisection at
    // shallow depth, so the requested budget cannot be certified.
    const auto step = [](double t) { return t < 1.0 / M_PI ? 0.0 : 1.0; };
    try {
        integrate_real(step, 0.0, 1.0, 1e-15, 6);
        FAIL("expected AccuracyError");
    } catch (const AccuracyError& e) {
        CHECK(e.achieved > 1e-15);
    }
}

TEST_CASE("endpoints are never sampled") {
    // Integrand undefined at 0; all Kronrod nodes are interior so this must work.
    const double v = integrate_real(
        [](double t) { return std::sin(t) / t; }, 0.0, 1.0, 1e-10);
    CHECK(v == doctest::Approx(0.9460830703671830).epsilon(1e-11));
}

TEST_SUITE_END();
