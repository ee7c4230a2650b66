#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "fchange/common.hpp"

namespace fchange {

// Stopping boundaries for the sequential test of one split point s: after
// consuming l Bernoulli indicators with partial sum S_l, the walk stops with
// "p > s" once S_l >= upper[l-1] and with "p < s" once S_l <= lower[l-1].
// Construction keeps each side's total crossing probability under
// Bernoulli(s) within the spending sequence eps*l/(l + spend_offset), half
// per side, so the overall wrong-conclusion risk is at most eps.
struct Boundaries {
    double split = 0.0;
    double eps = 0.0;
    double spend_offset = 1000.0;
    std::vector<std::int32_t> lower;  // entry l-1 holds L_l (may be negative: unreachable)
    std::vector<std::int32_t> upper;  // entry l-1 holds U_l (may exceed l: unreachable)

    std::int64_t horizon() const { return static_cast<std::int64_t>(lower.size()); }
    std::int32_t lower_at(std::int64_t l) const { return lower[static_cast<std::size_t>(l - 1)]; }
    std::int32_t upper_at(std::int64_t l) const { return upper[static_cast<std::size_t>(l - 1)]; }
};

// Incremental greedy construction. The exact distribution of the partial sum
// restricted to not-yet-stopped paths is carried along; at each step the
// boundaries are pushed as close to the walk as the remaining per-side
// budget allows, then clamped to keep both sequences nondecreasing and, when
// a floor table from a smaller split is supplied, to keep cross-split
// monotonicity. Clamps cut at the recorded boundary, so the spent-mass
// accounting always matches what the walk would do.
class BoundaryBuilder {
public:
    BoundaryBuilder(double split, double eps, double spend_offset = 1000.0);

    // Extends the table to at least target steps. floor, when given, must
    // be a table for a smaller split already extended to target.
    void extend(std::int64_t target, const Boundaries* floor = nullptr);

    const Boundaries& table() const { return tbl_; }

private:
    void step(const Boundaries* floor);

    Boundaries tbl_;
    std::vector<double> mass_;  // surviving distribution; mass_[i] = P(S = base_ + i)
    std::int64_t base_ = 0;
    double spent_lo_ = 0.0, spent_hi_ = 0.0;
    std::int32_t prev_lower_ = std::numeric_limits<std::int32_t>::min();
    std::int32_t prev_upper_ = std::numeric_limits<std::int32_t>::min();
};

// One-shot construction for a single split (no cross-split floor).
Boundaries build_boundaries(double split, double eps, std::int64_t horizon,
                            double spend_offset = 1000.0);

// Process-wide cache of boundary families. A family is the set of tables
// for all split points of one bucket set, built jointly in ascending split
// order so that each table is clamped against its smaller neighbour.
// Families are keyed by (eps, spend_offset, splits) and grow lazily;
// returned snapshots are immutable and safe to read from any thread.
class BoundaryCache {
public:
    using Family = std::vector<std::shared_ptr<const Boundaries>>;

    // All tables extended to at least horizon, parallel to the sorted,
    // deduplicated splits vector.
    Family family(const std::vector<double>& splits, double eps,
                  std::int64_t horizon, double spend_offset = 1000.0);

    static BoundaryCache& global();

private:
    struct Entry {
        std::vector<std::unique_ptr<BoundaryBuilder>> builders;
        Family snapshot;
        std::int64_t horizon = 0;
    };
    using Key = std::tuple<double, double, std::vector<double>>;
    std::mutex mu_;
    std::map<Key, Entry> entries_;
};

}  // namespace fchange
