// Random-number plumbing: a single engine type used across the library and a
// tiny mixing function for deriving independent, reproducible seed streams.
#pragma once

#include <cstdint>
#include <random>

namespace graphgp {

using rng_t = std::mt19937_64;

// One step of the splitmix64 generator; good avalanche, used only for seed
// derivation (never as the main generator).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derive a child seed from a base seed and one or more salts. Deterministic,
// order-sensitive, and well mixed, so grid points / subcomponents can each own
// an independent stream regardless of scheduling.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t state = base;
    (void)splitmix64(state);
    state ^= 0x6a09e667f3bcc909ULL + salt * 0x9e3779b97f4a7c15ULL;
    return splitmix64(state);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt1,
                                 std::uint64_t salt2) {
    return derive_seed(derive_seed(base, salt1), salt2);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt1,
                                 std::uint64_t salt2, std::uint64_t salt3) {
    return derive_seed(derive_seed(base, salt1, salt2), salt3);
}

// Poisson(nu) sample with the nu == 0 point mass handled explicitly;
// std::poisson_distribution requires a strictly positive mean.
inline int draw_example_count(rng_t& rng, double nu) {
    if (nu <= 0.0) {
        return 0;
    }
    std::poisson_distribution<int> count(nu);
    return count(rng);
}

} // namespace graphgp
