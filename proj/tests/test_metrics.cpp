#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pramloop/metrics.hpp"
#include "pramloop/rng.hpp"

using namespace pramloop;
using analytics::GlycemicMetrics;

TEST_CASE("constant in-range trace") {
    const std::vector<double> g(100, 100.0);
    const auto m = analytics::glucose_percentages(g);
    CHECK(m.pct_in_70_180 == 100.0);
    CHECK(m.pct_below_70 == 0.0);
    CHECK(m.pct_above_180 == 0.0);
    CHECK(m.pct_below_54 == 0.0);
    CHECK(m.pct_above_250 == 0.0);
}

TEST_CASE("constructed half-and-half partition") {
    std::vector<double> g(50, 60.0);
    g.insert(g.end(), 50, 200.0);
    const auto m = analytics::glucose_percentages(g);
    CHECK(m.pct_below_70 == 50.0);
    CHECK(m.pct_above_180 == 50.0);
    CHECK(m.pct_in_70_180 == 0.0);
}

TEST_CASE("percentages match a brute-force counter on random traces") {
    auto rng = Rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> g;
        for (int i = 0; i < 500; ++i) g.push_back(rng.uniform(30.0, 350.0));
        const auto m = analytics::glucose_percentages(g);

        int b54 = 0, b70 = 0, in = 0, a180 = 0, a250 = 0;
        for (double v : g) {
            b54 += v < 54.0;
            b70 += v < 70.0;
            in += v >= 70.0 && v <= 180.0;
            a180 += v > 180.0;
            a250 += v > 250.0;
        }
        CHECK(m.pct_below_54 == doctest::Approx(100.0 * b54 / 500.0).epsilon(1e-12));
        CHECK(m.pct_below_70 == doctest::Approx(100.0 * b70 / 500.0).epsilon(1e-12));
        CHECK(m.pct_in_70_180 == doctest::Approx(100.0 * in / 500.0).epsilon(1e-12));
        CHECK(m.pct_above_180 == doctest::Approx(100.0 * a180 / 500.0).epsilon(1e-12));
        CHECK(m.pct_above_250 == doctest::Approx(100.0 * a250 / 500.0).epsilon(1e-12));

        // partition identity and threshold ordering
        CHECK(m.pct_below_70 + m.pct_in_70_180 + m.pct_above_180 ==
              doctest::Approx(100.0).epsilon(1e-12));
        CHECK(m.pct_below_70 >= m.pct_below_54);
        CHECK(m.pct_above_180 >= m.pct_above_250);
    }
}

TEST_CASE("risk indices") {
    SUBCASE("the neutral glucose carries no risk") {
        const std::vector<double> g(10, 112.517);
        const auto [lbgi, hbgi] = analytics::lbgi_hbgi(g);
        CHECK(lbgi < 1e-6);
        CHECK(hbgi < 1e-6);
    }
    SUBCASE("hypoglycemic trace against the scalar oracle") {
        const std::vector<double> g(10, 50.0);
        const auto [lbgi, hbgi] = analytics::lbgi_hbgi(g);
        // independent evaluation of the risk transform at 50 mg/dL
        const double f = 1.509 * (std::pow(std::log(50.0), 1.084) - 5.381);
        CHECK(f < 0.0);
        CHECK(lbgi == doctest::Approx(10.0 * f * f).epsilon(1e-12));
        CHECK(lbgi == doctest::Approx(22.5).epsilon(0.025));
        CHECK(hbgi == 0.0);
    }
    SUBCASE("no sample contributes to both sides") {
        auto rng = Rng(77);
        std::vector<double> g;
        for (int i = 0; i < 200; ++i) g.push_back(rng.uniform(40.0, 400.0));
        const auto [lbgi, hbgi] = analytics::lbgi_hbgi(g);
        double lo = 0.0, hi = 0.0;
        for (double v : g) {
            const double f = 1.509 * (std::pow(std::log(v), 1.084) - 5.381);
            (f < 0 ? lo : hi) += 10.0 * f * f;
        }
        CHECK(lbgi + hbgi == doctest::Approx((lo + hi) / 200.0).epsilon(1e-12));
    }
    SUBCASE("pointwise-lower traces never decrease LBGI") {
        auto rng = Rng(78);
        std::vector<double> g, lower;
        for (int i = 0; i < 200; ++i) {
            const double v = rng.uniform(45.0, 300.0);
            g.push_back(v);
            lower.push_back(v - 4.0);
        }
        CHECK(analytics::lbgi_hbgi(lower).first >= analytics::lbgi_hbgi(g).first);
    }
    SUBCASE("nonpositive glucose is a domain error") {
        CHECK_THROWS_AS(analytics::lbgi_hbgi(std::vector<double>{100.0, 0.0}),
                        std::invalid_argument);
    }
}

TEST_CASE("empty trace is a domain error") {
    CHECK_THROWS_AS(analytics::glucose_percentages({}), std::invalid_argument);
    CHECK_THROWS_AS(analytics::lbgi_hbgi({}), std::invalid_argument);
}

namespace {

std::map<engine::BatchKey, GlycemicMetrics> tir_table(const std::vector<double>& comparator,
                                                      const std::vector<double>& strat) {
    std::map<engine::BatchKey, GlycemicMetrics> m;
    for (std::size_t i = 0; i < comparator.size(); ++i) {
        GlycemicMetrics a;
        a.pct_in_70_180 = comparator[i];
        m[{static_cast<int>(i), strategy::Mode::InsNMA}] = a;
        GlycemicMetrics b;
        b.pct_in_70_180 = strat[i];
        m[{static_cast<int>(i), strategy::Mode::S2}] = b;
    }
    return m;
}

} // namespace

TEST_CASE("paired differences") {
    SUBCASE("identical results give zero with a degenerate CI") {
        const auto table = tir_table({90.0, 85.0, 80.0}, {90.0, 85.0, 80.0});
        auto rng = Rng(1);
        const auto c = analytics::paired_differences(table, strategy::Mode::InsNMA,
                                                     strategy::Mode::S2, "pct_in_70_180", 1000,
                                                     rng);
        CHECK(c.mean_diff == 0.0);
        CHECK(c.ci_lo == 0.0);
        CHECK(c.ci_hi == 0.0);
    }
    SUBCASE("constant differences give a point CI") {
        std::vector<double> comp(10, 80.0), strat(10, 81.0);
        auto rng = Rng(2);
        const auto c = analytics::paired_differences(tir_table(comp, strat),
                                                     strategy::Mode::InsNMA, strategy::Mode::S2,
                                                     "pct_in_70_180", 1000, rng);
        CHECK(c.mean_diff == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.ci_lo == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.ci_hi == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("exhaustive bootstrap over two subjects") {
        // strategy-minus-comparator differences are {0, 2}; all 4 resamples
        // have means {0, 1, 1, 2}; interpolated 2.5%/97.5% quantiles follow
        const auto table = tir_table({80.0, 80.0}, {80.0, 82.0});
        auto rng = Rng(3);
        const auto c = analytics::paired_differences(table, strategy::Mode::InsNMA,
                                                     strategy::Mode::S2, "pct_in_70_180", 0, rng);
        CHECK(c.mean_diff == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(c.ci_lo == doctest::Approx(0.075).epsilon(1e-12));
        CHECK(c.ci_hi == doctest::Approx(1.925).epsilon(1e-12));
    }
    SUBCASE("swapping comparator and strategy mirrors the estimate") {
        const auto table = tir_table({80.0, 85.0, 91.0, 79.0}, {88.0, 84.0, 97.0, 90.0});
        auto r1 = Rng(4);
        auto r2 = Rng(4);
        const auto fwd = analytics::paired_differences(table, strategy::Mode::InsNMA,
                                                       strategy::Mode::S2, "pct_in_70_180", 0, r1);
        const auto rev = analytics::paired_differences(table, strategy::Mode::S2,
                                                       strategy::Mode::InsNMA, "pct_in_70_180", 0,
                                                       r2);
        CHECK(fwd.mean_diff == doctest::Approx(-rev.mean_diff).epsilon(1e-12));
        CHECK(fwd.ci_lo == doctest::Approx(-rev.ci_hi).epsilon(1e-12));
        CHECK(fwd.ci_hi == doctest::Approx(-rev.ci_lo).epsilon(1e-12));
    }
    SUBCASE("missing pair names the patient") {
        auto table = tir_table({80.0, 85.0}, {88.0, 84.0});
        table.erase({1, strategy::Mode::S2});
        auto rng = Rng(5);
        CHECK_THROWS_WITH_AS(analytics::paired_differences(table, strategy::Mode::InsNMA,
                                                           strategy::Mode::S2, "pct_in_70_180",
                                                           100, rng),
                             doctest::Contains("patient 1"), std::invalid_argument);
    }
}

TEST_CASE("quantile endpoints") {
    CHECK(analytics::quantile({3.0, 1.0, 2.0}, 0.0) == 1.0);
    CHECK(analytics::quantile({3.0, 1.0, 2.0}, 1.0) == 3.0);
    CHECK(analytics::quantile({3.0, 1.0, 2.0}, 0.5) == 2.0);
    CHECK(analytics::quantile({1.0, 2.0}, 0.5) == doctest::Approx(1.5));
    CHECK_THROWS_AS(analytics::quantile({}, 0.5), std::invalid_argument);
}

TEST_CASE("tuning selection") {
    using analytics::CandidateStats;

    SUBCASE("single candidate wins by default") {
        CHECK(analytics::tuning_select({CandidateStats{{1.0}, 80.0, 0.0, 10.0}}) == 0);
    }
    SUBCASE("TIR dominates") {
        std::vector<CandidateStats> stats{
            {{1.0}, 85.0, 0.0, 10.0},
            {{2.0}, 90.0, 1.0, 50.0},
        };
        CHECK(analytics::tuning_select(stats) == 1);
    }
    SUBCASE("hypo breaks TIR ties") {
        std::vector<CandidateStats> stats{
            {{1.0}, 95.0, 0.5, 10.0},
            {{2.0}, 95.2, 0.1, 50.0},
        };
        CHECK(analytics::tuning_select(stats) == 1);
    }
    SUBCASE("pramlintide breaks remaining ties") {
        std::vector<CandidateStats> stats{
            {{1.0}, 95.0, 0.10, 60.0},
            {{2.0}, 95.1, 0.15, 30.0},
        };
        CHECK(analytics::tuning_select(stats) == 1);
    }
    SUBCASE("ordering does not matter") {
        std::vector<CandidateStats> stats{
            {{15.0}, 92.0, 0.2, 15.0},
            {{30.0}, 95.0, 0.1, 30.0},
            {{45.0}, 94.9, 0.1, 45.0},
            {{60.0}, 91.0, 0.4, 60.0},
        };
        const auto full = analytics::tuning_select(stats);
        CHECK(stats[full].tiebreak_key[0] == 30.0);
        std::swap(stats[0], stats[3]);
        std::swap(stats[1], stats[2]);
        const auto swapped = analytics::tuning_select(stats);
        CHECK(stats[swapped].tiebreak_key[0] == 30.0);
    }
    SUBCASE("empty table is a domain error") {
        CHECK_THROWS_AS(analytics::tuning_select({}), std::invalid_argument);
    }
}
