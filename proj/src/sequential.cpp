#include "fchange/sequential.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace fchange {

namespace {

std::string format_endpoint(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string Bucket::label() const {
    std::string s;
    s += lo == 0.0 ? "[" : "(";
    s += format_endpoint(lo);
    s += ",";
    s += format_endpoint(hi);
    s += hi == 1.0 ? "]" : ")";
    return s;
}

BucketSet BucketSet::defaults() {
    return from_buckets({{0.0, 0.05}, {0.04, 0.06}, {0.05, 1.0}});
}

BucketSet BucketSet::stars() {
    return from_buckets({{0.0, 1e-3},
                         {5e-4, 2e-3},
                         {1e-3, 1e-2},
                         {8e-3, 1.2e-2},
                         {1e-2, 5e-2},
                         {4.5e-2, 6.5e-2},
                         {5e-2, 1.0}});
}

BucketSet BucketSet::from_buckets(std::vector<Bucket> buckets) {
    if (buckets.empty()) throw InputError("buckets: empty set");
    std::sort(buckets.begin(), buckets.end(),
              [](const Bucket& a, const Bucket& b) {
                  return a.lo != b.lo ? a.lo < b.lo : a.hi < b.hi;
              });
    for (const Bucket& b : buckets) {
        if (!(b.lo >= 0.0 && b.hi <= 1.0 && b.lo < b.hi))
            throw InputError("buckets: each bucket needs 0 <= lo < hi <= 1");
    }
    if (buckets.front().lo != 0.0 || buckets.back().hi != 1.0)
        throw InputError("buckets: set must span [0,1]");
    for (std::size_t i = 1; i < buckets.size(); ++i) {
        if (!(buckets[i].lo < buckets[i - 1].hi))
            throw InputError("buckets: consecutive buckets must overlap (cover [0,1])");
        if (buckets[i].hi <= buckets[i - 1].hi)
            throw InputError("buckets: no bucket may contain another");
    }
    BucketSet set;
    set.buckets_ = std::move(buckets);
    for (const Bucket& b : set.buckets_) {
        if (b.lo != 0.0) set.splits_.push_back(b.lo);
        if (b.hi != 1.0) set.splits_.push_back(b.hi);
    }
    std::sort(set.splits_.begin(), set.splits_.end());
    set.splits_.erase(std::unique(set.splits_.begin(), set.splits_.end()),
                      set.splits_.end());
    return set;
}

namespace {

// (c_lo, c_hi) as an open interval fits inside the bucket
bool interval_fits(const Bucket& b, double c_lo, double c_hi) {
    return b.lo <= c_lo && c_hi <= b.hi;
}

const Bucket* first_fit(const BucketSet& buckets, double c_lo, double c_hi) {
    for (const Bucket& b : buckets.buckets())
        if (interval_fits(b, c_lo, c_hi)) return &b;
    return nullptr;
}

const Bucket* first_containing(const BucketSet& buckets, double p) {
    // prefer a bucket holding p strictly inside
    for (const Bucket& b : buckets.buckets())
        if (b.lo < p && p < b.hi) return &b;
    for (const Bucket& b : buckets.buckets())
        if (b.contains(p)) return &b;
    return &buckets.buckets().front();
}

}  // namespace

Decision seq_decide_stream(const std::function<bool(std::int64_t)>& indicator,
                           const BucketSet& buckets, double eps,
                           const SeqOptions& options) {
    if (!(eps > 0.0 && eps < 0.5))
        throw InputError("sequential: epsilon must lie in (0, 0.5)");
    const std::vector<double>& splits = buckets.split_points();
    const std::size_t m = splits.size();

    BoundaryCache& cache = options.cache ? *options.cache : BoundaryCache::global();
    BoundaryCache::Family family;
    std::int64_t horizon = 0;
    if (options.imported) {
        if (options.imported->size() != m)
            throw InputError("sequential: imported tables do not match the split points");
        family = *options.imported;
        for (std::size_t i = 0; i < m; ++i) {
            if (family[i]->split != splits[i])
                throw InputError("sequential: imported table split mismatch");
            if (family[i]->eps != eps)
                throw InputError("sequential: imported table epsilon mismatch");
        }
        horizon = m == 0 ? 0 : family.front()->horizon();
        for (const auto& t : family) horizon = std::min(horizon, t->horizon());
    } else if (m > 0) {
        family = cache.family(splits, eps, options.initial_horizon);
        horizon = options.initial_horizon;
    }

    Decision d;
    d.c_lo = 0.0;
    d.c_hi = 1.0;
    std::vector<char> active(m, 1);

    if (const Bucket* b = first_fit(buckets, d.c_lo, d.c_hi)) {
        d.bucket = *b;  // a bucket spans (0,1): nothing to resolve
        return d;
    }

    std::int64_t s = 0;
    for (std::int64_t l = 1; l <= options.tau_max; ++l) {
        if (l > horizon) {
            if (options.imported)
                throw InputError("sequential: imported tables shorter than the run");
            horizon = std::max<std::int64_t>(horizon * 2, 1024);
            family = cache.family(splits, eps, horizon);
        }
        s += indicator(l) ? 1 : 0;
        bool changed = false;
        for (std::size_t i = 0; i < m; ++i) {
            if (!active[i]) continue;
            const double sp = splits[i];
            if (!(d.c_lo < sp && sp < d.c_hi)) {
                active[i] = 0;  // already excluded by earlier crossings
                continue;
            }
            if (s >= family[i]->upper_at(l)) {
                d.c_lo = sp;  // p > split
                active[i] = 0;
                changed = true;
            } else if (s <= family[i]->lower_at(l)) {
                d.c_hi = sp;  // p < split
                active[i] = 0;
                changed = true;
            }
        }
        if (changed) {
            if (options.want_trace)
                d.trace.push_back({l, s, d.c_lo, d.c_hi});
            if (const Bucket* b = first_fit(buckets, d.c_lo, d.c_hi)) {
                d.bucket = *b;
                d.tau = l;
                d.s_tau = s;
                return d;
            }
        }
    }

    d.tau = options.tau_max;
    d.s_tau = s;
    d.flagged = true;
    d.bucket = *first_containing(buckets, 0.5 * (d.c_lo + d.c_hi));
    return d;
}

Decision seq_decide(StatisticEval& eval, const PermutationPlan& plan,
                    const BucketSet& buckets, double eps,
                    const SeqOptions& options) {
    if (plan.n != eval.size())
        throw LogicError("sequential: plan and statistic sample sizes differ");
    std::vector<int> identity(static_cast<std::size_t>(eval.size()));
    std::iota(identity.begin(), identity.end(), 0);
    const double t = eval(identity);
    return seq_decide_stream(
        [&](std::int64_t b) { return eval(plan.permutation(b)) > t; }, buckets,
        eps, options);
}

}  // namespace fchange
