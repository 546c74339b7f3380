#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pramloop/integrator.hpp"
#include "support/oracles.hpp"

using namespace pramloop;

TEST_CASE("zero derivative leaves state unchanged") {
    std::array<double, 3> x{1.0, -2.0, 3.5};
    const auto out = rk4_step<3>(
        x, [](const std::array<double, 3>&) { return std::array<double, 3>{0.0, 0.0, 0.0}; },
        10.0, 4);
    CHECK(out == x);
}

TEST_CASE("scalar decay matches the exponential") {
    const double k = 0.1;
    std::array<double, 1> x{1.0};
    const auto out = rk4_step<1>(
        x, [k](const std::array<double, 1>& s) { return std::array<double, 1>{-k * s[0]}; }, 5.0,
        5);
    CHECK(out[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
}

TEST_CASE("two-compartment chain matches the closed form over 100 min") {
    const double k1 = 0.05, k2 = 0.02;
    std::array<double, 2> x{1.0, 0.0};
    double t = 0.0;
    for (int step = 0; step < 20; ++step) {
        x = rk4_step<2>(
            x,
            [&](const std::array<double, 2>& s) {
                return std::array<double, 2>{-k1 * s[0], k1 * s[0] - k2 * s[1]};
            },
            5.0, 5);
        t += 5.0;
        CHECK(x[0] == doctest::Approx(std::exp(-k1 * t)).epsilon(1e-6));
        CHECK(x[1] == doctest::Approx(oracles::chain_second(k1, k2, 1.0, t)).epsilon(1e-6));
    }
}

TEST_CASE("step-halving convergence is fourth order") {
    const auto run = [](int substeps) {
        std::array<double, 1> x{1.0};
        return rk4_step<1>(
            x, [](const std::array<double, 1>& s) { return std::array<double, 1>{-0.5 * s[0]}; },
            4.0, substeps)[0];
    };
    const double exact = std::exp(-2.0);
    const double e1 = std::fabs(run(2) - exact);
    const double e2 = std::fabs(run(4) - exact);
    CHECK(e2 < e1 / 12.0); // ~16x for a 4th-order method
}

TEST_CASE("argument validation") {
    std::array<double, 1> x{1.0};
    const auto deriv = [](const std::array<double, 1>&) { return std::array<double, 1>{0.0}; };
    CHECK_THROWS_AS(rk4_step<1>(x, deriv, 0.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(rk4_step<1>(x, deriv, 5.0, 0), std::invalid_argument);
}

TEST_CASE("non-finite state is an integration fault") {
    std::array<double, 1> x{1.0};
    CHECK_THROWS_AS(rk4_step<1>(
                        x,
                        [](const std::array<double, 1>& s) {
                            return std::array<double, 1>{s[0] * 1e308};
                        },
                        5.0, 5),
                    std::runtime_error);
}
