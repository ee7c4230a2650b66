#pragma once

#include <cstdint>
#include <vector>

#include "fchange/cusum.hpp"
#include "fchange/rng.hpp"

namespace fchange {

// Lazy stream of i.i.d. uniform row permutations: index b >= 1 yields the
// same permutation for the same (seed, b, n) on every platform and at any
// thread count, so permutation b never depends on whether b-1 was drawn.
struct PermutationPlan {
    std::uint64_t seed = 0;
    int n = 0;

    std::vector<int> permutation(std::int64_t b) const {
        if (b < 1) throw LogicError("permutation plan: index starts at 1");
        SplitMix64 g(mix_seed(seed, static_cast<std::uint64_t>(b)));
        return random_permutation(n, g);
    }
};

struct ExactResult {
    double p = 0.0;
    std::uint64_t exceed = 0;  // permutations with T(permuted) > T(identity)
    std::uint64_t total = 0;   // n!
};

// Exact permutation p-value by full enumeration: the fraction of all n!
// row permutations whose statistic strictly exceeds the identity value.
// Refuses n above the cap (default 8, i.e. 40320 evaluations).
ExactResult exact_p(StatisticEval& eval, int max_n = 8);

enum class PValueMode {
    Plain,  // #{T > t} / B
    Valid   // (1 + #{T >= t}) / (B + 1): never 0, conservative under ties
};

struct VanillaResult {
    double p = 0.0;
    std::uint64_t exceed = 0;
    std::uint64_t draws = 0;
    PValueMode mode = PValueMode::Plain;
};

// Plain Monte-Carlo p-value over B permutations drawn from the plan.
VanillaResult vanilla_p(StatisticEval& eval, const PermutationPlan& plan,
                        std::int64_t draws, PValueMode mode = PValueMode::Plain);

}  // namespace fchange
