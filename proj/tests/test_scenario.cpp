#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pramloop/scenario.hpp"

using namespace pramloop;
using scenario::MealType;
using scenario::Scenario;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

} // namespace

TEST_CASE("degenerate tuning scenario is the nominal schedule") {
    scenario::TuningScenarioConfig cfg;
    cfg.time_sd_min = 0.0;
    cfg.grams_cv = 0.0;
    auto rng = Rng(1);
    const auto sc = scenario::gen_tuning_scenario(rng, 2, cfg);
    REQUIRE(sc.meals.size() == 6);
    CHECK(sc.duration_days == 2);
    CHECK(sc.meals[0].time_min == 480);
    CHECK(sc.meals[0].grams == 35.0);
    CHECK(sc.meals[0].type == MealType::Breakfast);
    CHECK(sc.meals[1].time_min == 780);
    CHECK(sc.meals[1].grams == 50.0);
    CHECK(sc.meals[2].time_min == 1200);
    CHECK(sc.meals[2].grams == 85.0);
    CHECK(sc.meals[3].day == 2);
}

TEST_CASE("same seed reproduces the scenario") {
    scenario::TuningScenarioConfig cfg;
    auto a = Rng(42);
    auto b = Rng(42);
    const auto sa = scenario::gen_tuning_scenario(a, 14, cfg);
    const auto sb = scenario::gen_tuning_scenario(b, 14, cfg);
    REQUIRE(sa.meals.size() == sb.meals.size());
    for (std::size_t i = 0; i < sa.meals.size(); ++i) {
        CHECK(sa.meals[i].time_min == sb.meals[i].time_min);
        CHECK(sa.meals[i].grams == sb.meals[i].grams);
    }
}

TEST_CASE("lunch gram distribution over many days") {
    scenario::TuningScenarioConfig cfg;
    auto rng = Rng(7);
    const auto sc = scenario::gen_tuning_scenario(rng, 1000, cfg);
    double sum = 0.0, sq = 0.0;
    int n = 0;
    for (const auto& m : sc.meals) {
        if (m.type == MealType::Lunch) {
            sum += m.grams;
            sq += m.grams * m.grams;
            ++n;
        }
    }
    REQUIRE(n == 1000);
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    CHECK(mean > 48.0);
    CHECK(mean < 52.0);
    CHECK(sd > 12.0);
    CHECK(sd < 18.0);
    for (const auto& m : sc.meals) CHECK(m.grams >= 5.0);
}

TEST_CASE("meals are strictly ordered in time") {
    scenario::TuningScenarioConfig cfg;
    auto rng = Rng(3);
    const auto sc = scenario::gen_tuning_scenario(rng, 100, cfg);
    for (std::size_t i = 1; i < sc.meals.size(); ++i) {
        CHECK(sc.meals[i].abs_time() > sc.meals[i - 1].abs_time());
    }
}

TEST_CASE("validation scenario loads faithfully") {
    const auto sc = scenario::load_scenario(std::string(PRAMLOOP_DATA_DIR) +
                                            "/validation_scenario.csv");
    CHECK(sc.duration_days == 14);
    REQUIRE(sc.meals.size() == 60);
    CHECK(sc.meals[0].day == 1);
    CHECK(sc.meals[0].type == MealType::Breakfast);
    CHECK(sc.meals[0].time_min == 10 * 60 + 5);
    CHECK(sc.meals[0].grams == doctest::Approx(64.88));

    // daily carbohydrate totals: mean 168.58 g, sample SD 57.14 g
    std::array<double, 14> daily{};
    for (const auto& m : sc.meals) daily[static_cast<std::size_t>(m.day - 1)] += m.grams;
    double mean = 0.0;
    for (double d : daily) mean += d;
    mean /= 14.0;
    double var = 0.0;
    for (double d : daily) var += (d - mean) * (d - mean);
    const double sd = std::sqrt(var / 13.0);
    CHECK(mean == doctest::Approx(168.58).epsilon(0.01));
    CHECK(sd == doctest::Approx(57.14).epsilon(0.01));
}

TEST_CASE("load errors name the offending row") {
    const auto write = [](const std::string& path, const std::string& body) {
        std::ofstream out(path);
        out << body;
    };

    SUBCASE("malformed row") {
        const auto p = temp_path("pramloop_bad1.csv");
        write(p, "day,meal_type,HH:MM,grams\n1,breakfast,oops\n");
        CHECK_THROWS_WITH_AS(scenario::load_scenario(p),
                             doctest::Contains("row 2"), std::runtime_error);
    }
    SUBCASE("non-positive grams") {
        const auto p = temp_path("pramloop_bad2.csv");
        write(p, "day,meal_type,HH:MM,grams\n1,breakfast,08:00,50.0\n1,lunch,13:00,0.0\n");
        CHECK_THROWS_WITH_AS(scenario::load_scenario(p),
                             doctest::Contains("row 3"), std::runtime_error);
    }
    SUBCASE("duplicate day and time") {
        const auto p = temp_path("pramloop_bad3.csv");
        write(p, "day,meal_type,HH:MM,grams\n1,breakfast,08:00,50.0\n1,snack,08:00,10.0\n");
        CHECK_THROWS_WITH_AS(scenario::load_scenario(p),
                             doctest::Contains("duplicate"), std::runtime_error);
    }
    SUBCASE("bad meal type") {
        const auto p = temp_path("pramloop_bad4.csv");
        write(p, "day,meal_type,HH:MM,grams\n1,brunch,08:00,50.0\n");
        CHECK_THROWS_AS(scenario::load_scenario(p), std::runtime_error);
    }
    SUBCASE("empty file") {
        const auto p = temp_path("pramloop_bad5.csv");
        write(p, "");
        CHECK_THROWS_AS(scenario::load_scenario(p), std::runtime_error);
    }
}

TEST_CASE("export and reload round trip") {
    scenario::TuningScenarioConfig cfg;
    auto rng = Rng(17);
    const auto sc = scenario::gen_tuning_scenario(rng, 14, cfg);
    const auto path = temp_path("pramloop_roundtrip.csv");
    scenario::export_scenario(sc, path);
    const auto back = scenario::load_scenario(path);
    REQUIRE(back.meals.size() == sc.meals.size());
    CHECK(back.duration_days == sc.duration_days);
    for (std::size_t i = 0; i < sc.meals.size(); ++i) {
        CHECK(back.meals[i].day == sc.meals[i].day);
        CHECK(back.meals[i].time_min == sc.meals[i].time_min);
        CHECK(back.meals[i].grams == sc.meals[i].grams);
        CHECK(back.meals[i].type == sc.meals[i].type);
    }
}

TEST_CASE("carbohydrate misestimation") {
    scenario::MisestimationConfig cfg;

    SUBCASE("zero bounds are the identity") {
        cfg.error_lo = cfg.error_hi = 0.0;
        auto rng = Rng(5);
        CHECK(scenario::misestimate_cho(50.0, rng, cfg) == 50.0);
    }
    SUBCASE("draws stay inside the configured bounds") {
        auto rng = Rng(6);
        for (int i = 0; i < 10000; ++i) {
            const double r = scenario::misestimate_cho(100.0, rng, cfg) / 100.0;
            CHECK(r >= 0.7);
            CHECK(r <= 1.3);
        }
    }
    SUBCASE("fixed seed reproduces the error sequence") {
        auto a = Rng(8);
        auto b = Rng(8);
        for (int i = 0; i < 20; ++i) {
            CHECK(scenario::misestimate_cho(60.0, a, cfg) ==
                  scenario::misestimate_cho(60.0, b, cfg));
        }
    }
    SUBCASE("non-positive grams are rejected") {
        auto rng = Rng(9);
        CHECK_THROWS_AS(scenario::misestimate_cho(0.0, rng, cfg), std::invalid_argument);
    }
}

TEST_CASE("canonical validation file checksum is pinned") {
    std::ifstream in(std::string(PRAMLOOP_DATA_DIR) + "/validation_scenario.csv",
                     std::ios::binary);
    REQUIRE(in.good());
    std::uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    CAPTURE(h);
    CHECK(h == 0x9c080ee15136e587ull);
}
