#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pramloop/integrator.hpp"
#include "pramloop/patient.hpp"
#include "support/oracles.hpp"

using namespace pramloop;
using patient::PatientParams;

namespace {

PatientParams test_patient() {
    PatientParams p;
    p.patient_id = "test";
    p.k_ra = 30.0;
    return p;
}

} // namespace

TEST_CASE("parameter validation") {
    auto p = test_patient();
    CHECK_NOTHROW(p.validate(5.0));
    p.g_b = 60.0;
    CHECK_THROWS_AS(p.validate(5.0), std::invalid_argument);
    p = test_patient();
    p.input_delay = 7.0; // not a multiple of 5
    CHECK_THROWS_AS(p.validate(5.0), std::invalid_argument);
    p = test_patient();
    p.u_b = 0.0;
    CHECK_THROWS_AS(p.validate(5.0), std::invalid_argument);
}

TEST_CASE("rest fixed point holds exactly") {
    const auto p = test_patient();
    patient::GlucosePlant plant(p, 5.0);
    for (int k = 0; k < 1000; ++k) {
        const double g = plant.step(p.u_b, 0.0, 1.0);
        CHECK(g == doctest::Approx(p.g_b).epsilon(1e-14));
    }
}

TEST_CASE("insulin channel DC gain") {
    const auto p = test_patient();
    patient::GlucosePlant plant(p, 5.0);
    const double delta_u = 0.05; // small enough that glucose stays physical
    double g = p.g_b;
    for (int k = 0; k < 6000; ++k) {
        g = plant.step(p.u_b + delta_u, 0.0, 1.0);
    }
    CHECK(g == doctest::Approx(p.g_b - delta_u * p.k_u).epsilon(1e-9));
}

TEST_CASE("Ra channel step response matches the continuous oracle") {
    const auto p = test_patient();
    patient::GlucosePlant plant(p, 5.0);
    const int delay_steps = plant.delay_steps();
    double g = p.g_b;
    for (int k = 1; k <= 400; ++k) {
        g = plant.step(p.u_b, 1.0, 1.0);
        const double t_eff = (k - delay_steps) * 5.0;
        if (t_eff <= 0) {
            CHECK(g == doctest::Approx(p.g_b).epsilon(1e-12));
        } else {
            const double ref =
                p.g_b + oracles::third_order_step(p.k_ra, p.tau1_ra, p.tau2_ra, t_eff);
            CHECK(g == doctest::Approx(ref).epsilon(0.005).scale(1.0));
        }
    }
    const double settle = 10.0 * (2.0 * p.tau1_ra + p.tau2_ra);
    for (double t = 0.0; t < settle; t += 5.0) g = plant.step(p.u_b, 1.0, 1.0);
    CHECK(g == doctest::Approx(p.g_b + p.k_ra).epsilon(0.005));
}

TEST_CASE("input changes are silent for exactly the delay") {
    const auto p = test_patient();
    patient::GlucosePlant base(p, 5.0);
    patient::GlucosePlant bumped(p, 5.0);
    const int delay_steps = base.delay_steps();
    REQUIRE(delay_steps == 3);
    std::vector<double> g_base, g_bumped;
    for (int k = 0; k < 12; ++k) {
        g_base.push_back(base.step(p.u_b, 0.0, 1.0));
        g_bumped.push_back(bumped.step(k == 0 ? p.u_b + 2.0 : p.u_b, 0.0, 1.0));
    }
    for (int k = 0; k < delay_steps; ++k) {
        CHECK(g_bumped[static_cast<std::size_t>(k)] == g_base[static_cast<std::size_t>(k)]);
    }
    CHECK(g_bumped[static_cast<std::size_t>(delay_steps)] !=
          g_base[static_cast<std::size_t>(delay_steps)]);
}

TEST_CASE("more insulin never raises glucose") {
    const auto p = test_patient();
    patient::GlucosePlant base(p, 5.0);
    patient::GlucosePlant dosed(p, 5.0);
    for (int k = 0; k < 500; ++k) {
        const double ra = (k > 10 && k < 50) ? 0.5 : 0.0;
        const double gb = base.step(p.u_b, ra, 1.0);
        const double gd = dosed.step(p.u_b + 0.2, ra, 1.0);
        CHECK(gd <= gb + 1e-12);
    }
}

TEST_CASE("circadian factor") {
    CHECK(patient::circadian_factor(123.0, 0.0, 0.0) == 1.0);
    // extremum: sin argument pi/2
    const double t_peak = 1440.0 / 4.0;
    CHECK(patient::circadian_factor(t_peak, 0.3, 0.0) == doctest::Approx(1.3).epsilon(1e-12));
    double mean = 0.0;
    const int n = 1440;
    for (int i = 0; i < n; ++i) mean += patient::circadian_factor(i, 0.25, 1.0);
    mean /= n;
    CHECK(mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(patient::circadian_factor(0.0, 0.3, 0.5) ==
          patient::circadian_factor(1440.0, 0.3, 0.5));
    CHECK_THROWS_AS(patient::circadian_factor(0.0, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("variability sampling") {
    patient::VariabilityConfig cfg;

    SUBCASE("degenerate bounds give exact unit multipliers") {
        patient::VariabilityConfig zero;
        zero.kabs_pct = zero.f_pct = zero.insulin_pk_pct = zero.circadian_amp_max = 0.0;
        auto rng = Rng(1);
        const auto s = patient::sample_variability(rng, zero);
        CHECK(s.kabs_mult == 1.0);
        CHECK(s.f_mult == 1.0);
        CHECK(s.tau1u_mult == 1.0);
        CHECK(s.tau2u_mult == 1.0);
        CHECK(s.circadian_amp == 0.0);
    }

    SUBCASE("fixed seed reproduces the sample") {
        auto a = Rng(7);
        auto b = Rng(7);
        const auto sa = patient::sample_variability(a, cfg);
        const auto sb = patient::sample_variability(b, cfg);
        CHECK(sa.kabs_mult == sb.kabs_mult);
        CHECK(sa.circadian_phase == sb.circadian_phase);
    }

    SUBCASE("draws stay inside bounds with the right mean") {
        auto rng = Rng(11);
        double lo = 10.0, hi = -10.0, sum = 0.0;
        const int n = 10000;
        for (int i = 0; i < n; ++i) {
            const auto s = patient::sample_variability(rng, cfg);
            lo = std::min(lo, s.kabs_mult);
            hi = std::max(hi, s.kabs_mult);
            sum += s.kabs_mult;
            CHECK(s.circadian_amp >= 0.0);
            CHECK(s.circadian_amp <= 0.3);
        }
        CHECK(lo >= 0.70);
        CHECK(hi <= 1.30);
        CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("cgm sensor") {
    SUBCASE("zero noise passes the value through, clamped") {
        patient::CgmSensor sensor(Rng(3), 0.0);
        CHECK(sensor.sample(150.0) == 150.0);
        CHECK(sensor.sample(30.0) == 40.0);
        CHECK(sensor.sample(500.0) == 400.0);
    }

    SUBCASE("stationary SD is close to the configured one") {
        patient::CgmSensor sensor(Rng(5), 5.0, 0.7);
        const int n = 10000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = sensor.sample(150.0) - 150.0;
            sum += v;
            sq += v * v;
        }
        const double mean = sum / n;
        const double sd = std::sqrt(sq / n - mean * mean);
        CHECK(sd == doctest::Approx(5.0).epsilon(0.10));
    }

    SUBCASE("deterministic per stream") {
        patient::CgmSensor a(Rng(9), 5.0);
        patient::CgmSensor b(Rng(9), 5.0);
        for (int i = 0; i < 50; ++i) {
            CHECK(a.sample(120.0) == b.sample(120.0));
        }
    }
}

TEST_CASE("Ra gain calibration hits the target excursion") {
    auto p = test_patient();
    p.k_ra = patient::calibrate_ra_gain(p, 5.0, 5, 120.0, 50.0);
    CHECK(p.k_ra > 0.0);

    // replay the reference meal through the plant; peak should be near +120
    patient::GlucosePlant plant(p, 5.0);
    pkpd::MealState meal;
    meal.q_sto1 = 50000.0;
    meal.d_active = meal.q_sto1;
    double peak = 0.0;
    std::array<double, 4> x{meal.q_sto1, 0.0, 0.0, 0.0};
    for (int k = 0; k < 288; ++k) {
        x = rk4_step<4>(
            x,
            [&](const std::array<double, 4>& s) {
                const pkpd::MealState ms{s[0], s[1], s[2], meal.d_active};
                const auto dm = pkpd::meal_derivatives(ms, 0.0, 1.0, p.meal);
                return std::array<double, 4>{dm[0], dm[1], dm[2],
                                             pkpd::ra_of_appearance(ms, p.meal)};
            },
            5.0, 5);
        const double ra_avg = x[3] / 5.0;
        x[3] = 0.0;
        peak = std::max(peak, plant.step(p.u_b, ra_avg, 1.0));
    }
    CHECK(peak - p.g_b == doctest::Approx(120.0).epsilon(0.02));
}
