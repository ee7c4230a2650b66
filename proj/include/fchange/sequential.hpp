#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fchange/boundaries.hpp"
#include "fchange/pvalue.hpp"

namespace fchange {

// One p-value bucket: an interval open in the subspace topology of [0,1],
// i.e. (lo, hi) with the endpoint included when it is 0 or 1.
struct Bucket {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double p) const {
        const bool above = p > lo || (lo == 0.0 && p == 0.0);
        const bool below = p < hi || (hi == 1.0 && p == 1.0);
        return above && below;
    }
    bool operator==(const Bucket&) const = default;
    std::string label() const;  // e.g. "[0,0.05)", "(0.04,0.06)"
};

// Overlapping buckets covering [0,1]. Consecutive buckets (in lo order)
// must overlap; this is what keeps the sequential procedure's expected run
// time finite when the true p-value sits at a split point.
class BucketSet {
public:
    // {[0,0.05), (0.04,0.06), (0.05,1]}
    static BucketSet defaults();
    // Seven buckets refining [0,0.05) down to the significance-star scale:
    // {[0,1e-3), (1e-3,0.01), (0.01,0.05), (0.05,1]} plus the three bridge
    // buckets (5e-4,2e-3), (8e-3,1.2e-2), (4.5e-2,6.5e-2).
    static BucketSet stars();
    static BucketSet from_buckets(std::vector<Bucket> buckets);

    const std::vector<Bucket>& buckets() const { return buckets_; }
    // Interior endpoints, sorted, deduplicated: one boundary pair per entry.
    const std::vector<double>& split_points() const { return splits_; }

private:
    BucketSet() = default;
    std::vector<Bucket> buckets_;
    std::vector<double> splits_;
};

struct TraceEntry {
    std::int64_t step = 0;
    std::int64_t partial_sum = 0;
    double c_lo = 0.0, c_hi = 1.0;  // live interval after this step's crossings
};

struct Decision {
    Bucket bucket;
    std::int64_t tau = 0;        // permutation samples consumed
    std::int64_t s_tau = 0;      // final partial sum
    bool flagged = false;        // true when the tau_max cap forced the output
    double c_lo = 0.0, c_hi = 1.0;
    std::vector<TraceEntry> trace;  // filled only when requested
};

struct SeqOptions {
    std::int64_t tau_max = 10'000'000;
    std::int64_t initial_horizon = 4096;
    bool want_trace = false;
    BoundaryCache* cache = nullptr;           // defaults to the process cache
    const BoundaryCache::Family* imported = nullptr;  // pre-built tables to use as-is
};

// Core sequential procedure on an indicator stream: consumes indicator(b)
// for b = 1, 2, ... strictly in order, maintains the live interval
// C = (c_lo, c_hi) of p-values not yet excluded, and stops once C fits
// inside a bucket (first fitting bucket in lo order on ties). Hitting
// tau_max instead returns the first bucket containing the midpoint of C,
// flagged. When options.imported supplies tables, they must be one per
// split point in ascending order and long enough for the whole run.
Decision seq_decide_stream(const std::function<bool(std::int64_t)>& indicator,
                           const BucketSet& buckets, double eps,
                           const SeqOptions& options = {});

// Permutation-test front end: indicator(b) = 1[T(pi_b rows) > T(identity)].
Decision seq_decide(StatisticEval& eval, const PermutationPlan& plan,
                    const BucketSet& buckets, double eps,
                    const SeqOptions& options = {});

}  // namespace fchange
