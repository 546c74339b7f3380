#pragma once

#include <cstdint>
#include <string_view>

namespace pramloop {

/// Deterministic, platform-independent random stream.
///
/// The generator is xoshiro256** seeded through splitmix64; all
/// distributions are implemented here (never std::*_distribution, whose
/// algorithms are implementation-defined) so that a given seed produces
/// the same draw sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform on [0, 1).
    double uniform();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double normal();

    double normal(double mean, double sd);

private:
    std::uint64_t s_[4];
};

/// Derives an independent child stream from a master seed and a
/// hierarchical key. Identical keys give identical streams; keys
/// differing in any field give unrelated streams.
Rng derive_stream(std::uint64_t master_seed, std::string_view purpose,
                  std::uint64_t subject, std::uint64_t day, std::uint64_t index);

/// Seed value the above derivation produces (exposed for golden-value tests).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view purpose,
                          std::uint64_t subject, std::uint64_t day, std::uint64_t index);

} // namespace pramloop
