#include "pramloop/rng.hpp"

#include <cmath>

namespace pramloop {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    for (auto& word : s_) {
        word = splitmix64(seed);
    }
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

double Rng::normal() {
    // u1 must be nonzero for the log.
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::normal(double mean, double sd) {
    return mean + sd * normal();
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view purpose,
                          std::uint64_t subject, std::uint64_t day, std::uint64_t index) {
    std::uint64_t x = master_seed;
    std::uint64_t h = splitmix64(x);
    x ^= fnv1a(purpose);
    h ^= splitmix64(x);
    x ^= subject * 0x9e3779b97f4a7c15ull;
    h ^= splitmix64(x);
    x ^= day * 0xd1b54a32d192ed03ull;
    h ^= splitmix64(x);
    x ^= index * 0x8cb92ba72f3d8dd7ull;
    h ^= splitmix64(x);
    return h;
}

Rng derive_stream(std::uint64_t master_seed, std::string_view purpose,
                  std::uint64_t subject, std::uint64_t day, std::uint64_t index) {
    return Rng(derive_seed(master_seed, purpose, subject, day, index));
}

} // namespace pramloop
