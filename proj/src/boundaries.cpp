#include "fchange/boundaries.hpp"

#include <algorithm>

namespace fchange {

BoundaryBuilder::BoundaryBuilder(double split, double eps, double spend_offset) {
    if (!(split > 0.0 && split < 1.0))
        throw InputError("boundaries: split must lie in (0, 1)");
    if (!(eps > 0.0 && eps < 0.5))
        throw InputError("boundaries: epsilon must lie in (0, 0.5)");
    if (!(spend_offset >= 0.0))
        throw InputError("boundaries: spending offset must be nonnegative");
    tbl_.split = split;
    tbl_.eps = eps;
    tbl_.spend_offset = spend_offset;
    mass_ = {1.0};  // S_0 = 0 with certainty
}

void BoundaryBuilder::extend(std::int64_t target, const Boundaries* floor) {
    if (target > (std::int64_t{1} << 30))
        throw InputError("boundaries: horizon too large");
    if (floor && floor->horizon() < target)
        throw LogicError("boundaries: floor table shorter than the target horizon");
    while (tbl_.horizon() < target) step(floor);
}

void BoundaryBuilder::step(const Boundaries* floor) {
    const double s = tbl_.split;
    const std::int64_t l = tbl_.horizon() + 1;

    // Bernoulli update of the surviving distribution, in place from the top.
    mass_.push_back(0.0);
    for (std::size_t i = mass_.size() - 1; i > 0; --i)
        mass_[i] = (1.0 - s) * mass_[i] + s * mass_[i - 1];
    mass_[0] *= 1.0 - s;

    const double budget =
        0.5 * tbl_.eps * static_cast<double>(l) / (static_cast<double>(l) + tbl_.spend_offset);

    // Upper candidate: smallest U with spent + P(S >= U) within budget.
    // Walking down from just above the support, the tail is extended while
    // it stays affordable.
    std::size_t ucut = mass_.size();
    double utail = 0.0;
    while (ucut > 0 && spent_hi_ + utail + mass_[ucut - 1] <= budget) {
        utail += mass_[ucut - 1];
        --ucut;
    }
    // Lower candidate symmetrically: largest L with spent + P(S <= L) affordable.
    std::size_t lcut = 0;
    double ltail = 0.0;
    while (lcut < mass_.size() && spent_lo_ + ltail + mass_[lcut] <= budget) {
        ltail += mass_[lcut];
        ++lcut;
    }

    auto upper = static_cast<std::int32_t>(base_ + static_cast<std::int64_t>(ucut));
    auto lower = static_cast<std::int32_t>(base_ + static_cast<std::int64_t>(lcut) - 1);
    upper = std::max(upper, prev_upper_);
    lower = std::max(lower, prev_lower_);
    if (floor) {
        upper = std::max(upper, floor->upper_at(l));
        lower = std::max(lower, floor->lower_at(l));
    }

    // Truncate at the recorded boundaries and account for the removed mass.
    while (!mass_.empty() &&
           base_ + static_cast<std::int64_t>(mass_.size()) - 1 >= upper) {
        spent_hi_ += mass_.back();
        mass_.pop_back();
    }
    std::size_t drop = 0;
    while (drop < mass_.size() && base_ + static_cast<std::int64_t>(drop) <= lower) {
        spent_lo_ += mass_[drop];
        ++drop;
    }
    if (drop > 0) {
        mass_.erase(mass_.begin(), mass_.begin() + static_cast<std::ptrdiff_t>(drop));
        base_ += static_cast<std::int64_t>(drop);
    }
    if (mass_.empty())
        throw LogicError("boundaries: surviving mass exhausted");

    tbl_.lower.push_back(lower);
    tbl_.upper.push_back(upper);
    prev_lower_ = lower;
    prev_upper_ = upper;
}

Boundaries build_boundaries(double split, double eps, std::int64_t horizon,
                            double spend_offset) {
    if (horizon < 1) throw InputError("boundaries: horizon must be positive");
    BoundaryBuilder b(split, eps, spend_offset);
    b.extend(horizon);
    return b.table();
}

BoundaryCache::Family BoundaryCache::family(const std::vector<double>& splits,
                                            double eps, std::int64_t horizon,
                                            double spend_offset) {
    std::vector<double> sorted = splits;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) return {};
    if (horizon < 1) horizon = 1;

    std::lock_guard<std::mutex> lock(mu_);
    Entry& e = entries_[Key{eps, spend_offset, sorted}];
    if (e.builders.empty()) {
        for (double s : sorted)
            e.builders.push_back(std::make_unique<BoundaryBuilder>(s, eps, spend_offset));
    }
    if (e.horizon < horizon) {
        // Grow geometrically so repeated small requests stay cheap, in
        // ascending split order so each floor is long enough when used.
        const std::int64_t target = std::max(horizon, e.horizon * 2);
        for (std::size_t i = 0; i < e.builders.size(); ++i) {
            const Boundaries* floor = i > 0 ? &e.builders[i - 1]->table() : nullptr;
            e.builders[i]->extend(target, floor);
        }
        e.horizon = target;
        e.snapshot.clear();
        for (auto& b : e.builders)
            e.snapshot.push_back(std::make_shared<const Boundaries>(b->table()));
    }
    return e.snapshot;
}

BoundaryCache& BoundaryCache::global() {
    static BoundaryCache cache;
    return cache;
}

}  // namespace fchange
