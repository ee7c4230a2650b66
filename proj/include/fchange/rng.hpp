#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "fchange/common.hpp"

// Deterministic, platform-independent randomness. Everything downstream
// (permutations, noise draws, mask draws) is keyed by a 64-bit seed plus a
// stream index, so any single draw can be reproduced without replaying the
// run that produced it. std:: distributions are avoided on purpose: their
// output is implementation-defined and would break cross-platform
// reproducibility of seeded runs.

namespace fchange {

// SplitMix64: tiny, fast, passes BigCrush as a 64-bit mixer.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1): 53 random bits scaled, so every value is exact.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, m) by rejection (Lemire's method).
    std::uint64_t next_below(std::uint64_t m) {
        if (m == 0) throw LogicError("next_below: bound must be positive");
        while (true) {
            std::uint64_t x = next_u64();
            unsigned __int128 prod = static_cast<unsigned __int128>(x) * m;
            auto lo = static_cast<std::uint64_t>(prod);
            if (lo >= m || lo >= (0ULL - m) % m) {
                return static_cast<std::uint64_t>(prod >> 64);
            }
        }
    }

    // Standard normal via Box-Muller (pairs cached).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        // Guard the log: next_double can return exactly 0.
        while (u1 == 0.0) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives an independent stream seed from (seed, index). Used to key
// permutation b of a plan, replicate r of a study, row i of a noise draw.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL + index * 0xbf58476d1ce4e5b9ULL));
    g.next_u64();
    return g.next_u64();
}

// Fisher-Yates shuffle of 0..n-1 driven by the given generator.
inline std::vector<int> random_permutation(int n, SplitMix64& g) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) {
        auto j = static_cast<int>(g.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
    }
    return p;
}

}  // namespace fchange
