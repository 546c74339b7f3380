#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pramloop/rng.hpp"

using namespace pramloop;

TEST_CASE("identical keys give identical streams") {
    auto a = derive_stream(42, "meal", 1, 1, 0);
    auto b = derive_stream(42, "meal", 1, 1, 0);
    for (int i = 0; i < 100; ++i) {
        CHECK(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("keys differing in one field diverge quickly") {
    int collisions = 0;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        auto a = derive_stream(7, "meal", k, 3, 1);
        auto b = derive_stream(7, "meal", k + 1, 3, 1);
        bool differs = false;
        for (int i = 0; i < 10 && !differs; ++i) {
            differs = a.next_u64() != b.next_u64();
        }
        if (!differs) ++collisions;
    }
    CHECK(collisions == 0);

    auto p1 = derive_stream(7, "meal", 0, 0, 0);
    auto p2 = derive_stream(7, "noise", 0, 0, 0);
    CHECK(p1.next_u64() != p2.next_u64());
    auto d1 = derive_stream(7, "meal", 0, 1, 0);
    auto d2 = derive_stream(7, "meal", 0, 2, 0);
    CHECK(d1.next_u64() != d2.next_u64());
}

TEST_CASE("golden derivation value") {
    // Pinned at build time; a change here means every seeded artifact changes.
    const std::uint64_t seed = derive_seed(42, "meal", 1, 1, 0);
    auto rng = Rng(seed);
    const double first = rng.uniform();
    CAPTURE(seed);
    CAPTURE(first);
    CHECK(seed == 0xf1e065c3bc52b12cull);
    CHECK(first == doctest::Approx(0.63045872873179853).epsilon(1e-12));
}

TEST_CASE("uniform bounds and mean") {
    auto rng = Rng(123);
    double sum = 0.0;
    double lo = 1.0, hi = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        sum += u;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
    auto rng = Rng(99);
    double sum = 0.0, sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(0.0).epsilon(1.0).scale(0.02));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
