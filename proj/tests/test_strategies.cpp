#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pramloop/strategies.hpp"

using namespace pramloop;
using strategy::DosingState;
using strategy::Mode;
using strategy::StrategyConfig;

namespace {

StrategyConfig s1_config() {
    StrategyConfig cfg;
    cfg.mode = Mode::S1;
    cfg.lambda_ug = 30.0;
    cfg.z1 = 1.5;
    cfg.z2 = 0.5;
    cfg.z3 = 12;
    return cfg;
}

} // namespace

TEST_CASE("slopes are plain backward differences") {
    const auto s = strategy::slopes(1.5, 1.0, 150.0, 120.0, 5.0);
    CHECK(s.m_u == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.m_g == doctest::Approx(6.0).epsilon(1e-12));
    const auto zero = strategy::slopes(2.0, 2.0, 99.0, 99.0, 5.0);
    CHECK(zero.m_u == 0.0);
    CHECK(zero.m_g == 0.0);
    CHECK_THROWS_AS(strategy::slopes(1.0, 1.0, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("strategy 1 exhaustive truth table") {
    const auto cfg = s1_config();
    const double u_b = 0.1;
    // one concrete input per truth value of each condition
    const double m_u_km1[2] = {-0.05, 0.05};    // false, true  (> 0)
    const double m_u_k[2] = {0.05, -0.05};      // false, true  (< 0)
    const double u_k[2] = {0.9 * 1.5 * u_b, 2.0 * 1.5 * u_b}; // vs z1*u_b
    const double m_g[2] = {0.1, 1.0};           // vs z2 = 0.5
    const long dkp[2] = {12, 13};               // vs z3 = 12, strict

    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            for (int c = 0; c < 2; ++c) {
                for (int d = 0; d < 2; ++d) {
                    for (int e = 0; e < 2; ++e) {
                        DosingState st;
                        st.steps_since_bolus = dkp[e];
                        const auto cmd = strategy::strategy1_step(st, u_k[c], u_b, m_u_k[b],
                                                                  m_u_km1[a], m_g[d], cfg);
                        const bool expect = (a == 1 && b == 1) && (c == 1 && d == 1 && e == 1);
                        CHECK(cmd.p_bolus_ug == (expect ? cfg.lambda_ug : 0.0));
                        CHECK(cmd.p_infusion_ug == 0.0);
                        CHECK(st.steps_since_bolus == (expect ? 0 : dkp[e] + 1));
                    }
                }
            }
        }
    }
}

TEST_CASE("strategy 1 boundary: spacing is strict") {
    const auto cfg = s1_config();
    DosingState st;
    st.steps_since_bolus = *cfg.z3; // exactly z3: blocked
    const auto cmd = strategy::strategy1_step(st, 1.0, 0.1, -0.05, 0.05, 2.0, cfg);
    CHECK(cmd.p_bolus_ug == 0.0);
    CHECK(st.steps_since_bolus == *cfg.z3 + 1); // now above threshold
    const auto cmd2 = strategy::strategy1_step(st, 1.0, 0.1, -0.05, 0.05, 2.0, cfg);
    CHECK(cmd2.p_bolus_ug == cfg.lambda_ug);
    CHECK(st.steps_since_bolus == 0);
}

TEST_CASE("strategy 1 inter-bolus spacing invariant") {
    const auto cfg = s1_config();
    DosingState st; // large initial count: first detection may fire
    long last_bolus = -1000;
    int boluses = 0;
    for (long k = 0; k < 200; ++k) {
        // permanently bolus-friendly conditions
        const auto cmd = strategy::strategy1_step(st, 1.0, 0.1, -0.05, 0.05, 2.0, cfg);
        if (cmd.p_bolus_ug > 0.0) {
            if (boluses > 0) {
                CHECK(k - last_bolus > *cfg.z3);
            }
            last_bolus = k;
            ++boluses;
        }
    }
    CHECK(boluses > 2);
}

TEST_CASE("strategy 1 requires thresholds") {
    StrategyConfig cfg;
    cfg.mode = Mode::S1;
    cfg.lambda_ug = 30.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    DosingState st;
    CHECK_THROWS_AS(strategy::strategy1_step(st, 1.0, 0.1, -1.0, 1.0, 2.0, cfg),
                    std::invalid_argument);
}

TEST_CASE("strategy 2 is proportional to delivered insulin") {
    StrategyConfig cfg;
    cfg.mode = Mode::S2;
    cfg.rho_ug_per_u = 10.0;
    CHECK(strategy::strategy2_step(0.0, cfg).p_infusion_ug == 0.0);
    const auto cmd = strategy::strategy2_step(1.2, cfg);
    CHECK(cmd.p_infusion_ug == doctest::Approx(12.0).epsilon(1e-12));
    CHECK(cmd.p_bolus_ug == 0.0);
    cfg.rho_ug_per_u = 0.0;
    CHECK(strategy::strategy2_step(5.0, cfg).p_infusion_ug == 0.0);
}

TEST_CASE("strategy 3 fires on announcements only") {
    StrategyConfig cfg;
    cfg.mode = Mode::S3;
    cfg.phi_ug = 15.0;
    CHECK(strategy::strategy3_step(50.0, cfg).p_bolus_ug == 15.0);
    CHECK(strategy::strategy3_step(0.0, cfg).p_bolus_ug == 0.0);
    CHECK(strategy::strategy3_step(50.0, cfg).p_infusion_ug == 0.0);
    // two announcements in a day are two separate boluses
    int fired = 0;
    for (double cho : {50.0, 0.0, 80.0}) {
        if (strategy::strategy3_step(cho, cfg).p_bolus_ug > 0.0) ++fired;
    }
    CHECK(fired == 2);
}

TEST_CASE("strategy 4 ratios on both channels") {
    StrategyConfig cfg;
    cfg.mode = Mode::S4;
    cfg.delta_ug_per_u = 10.0;
    const auto cmd = strategy::strategy4_step(0.91, 0.09, 1.6, cfg);
    CHECK(cmd.p_infusion_ug == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(cmd.p_bolus_ug == doctest::Approx(16.0).epsilon(1e-12));
    cfg.delta_ug_per_u = 0.0;
    const auto off = strategy::strategy4_step(0.91, 0.09, 1.6, cfg);
    CHECK(off.p_infusion_ug == 0.0);
    CHECK(off.p_bolus_ug == 0.0);
}

TEST_CASE("announcement policy by mode") {
    StrategyConfig cfg;
    cfg.sma_assumed_cho = 25.0;
    CHECK(strategy::announcement_policy(Mode::InsNMA, false, 80.0, cfg) == 0.0);
    CHECK(strategy::announcement_policy(Mode::S1, false, 80.0, cfg) == 0.0);
    CHECK(strategy::announcement_policy(Mode::S2, false, 80.0, cfg) == 0.0);
    CHECK(strategy::announcement_policy(Mode::InsSMA, false, 80.0, cfg) == 25.0);
    CHECK(strategy::announcement_policy(Mode::S4, false, 80.0, cfg) == 25.0);
    CHECK(strategy::announcement_policy(Mode::InsSMA, true, 20.0, cfg) == 0.0);
    CHECK(strategy::announcement_policy(Mode::S4, true, 20.0, cfg) == 0.0);
    CHECK(strategy::announcement_policy(Mode::InsMA, false, 77.5, cfg) == 77.5);
    CHECK(strategy::announcement_policy(Mode::S3, true, 21.0, cfg) == 21.0);
}

TEST_CASE("mode names round trip") {
    for (const auto mode : {Mode::S1, Mode::S2, Mode::S3, Mode::S4, Mode::InsMA, Mode::InsSMA,
                            Mode::InsNMA}) {
        CHECK(strategy::mode_from_name(strategy::mode_name(mode)) == mode);
    }
    CHECK_THROWS_AS(strategy::mode_from_name("bogus"), std::invalid_argument);
}
