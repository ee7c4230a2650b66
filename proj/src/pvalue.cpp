#include "fchange/pvalue.hpp"

#include <algorithm>
#include <numeric>

namespace fchange {

ExactResult exact_p(StatisticEval& eval, int max_n) {
    const int n = eval.size();
    if (n < 1) throw LogicError("exact_p: empty sample");
    if (n > max_n)
        throw InputError("exact_p: n exceeds the enumeration cap");
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    const double t = eval(order);
    ExactResult r;
    do {
        ++r.total;
        if (eval(order) > t) ++r.exceed;
    } while (std::next_permutation(order.begin(), order.end()));
    r.p = static_cast<double>(r.exceed) / static_cast<double>(r.total);
    return r;
}

VanillaResult vanilla_p(StatisticEval& eval, const PermutationPlan& plan,
                        std::int64_t draws, PValueMode mode) {
    if (draws < 1) throw InputError("vanilla_p: needs at least one draw");
    if (plan.n != eval.size())
        throw LogicError("vanilla_p: plan and statistic sample sizes differ");
    std::vector<int> identity(static_cast<std::size_t>(eval.size()));
    std::iota(identity.begin(), identity.end(), 0);
    const double t = eval(identity);
    VanillaResult r;
    r.draws = static_cast<std::uint64_t>(draws);
    r.mode = mode;
    for (std::int64_t b = 1; b <= draws; ++b) {
        const double v = eval(plan.permutation(b));
        if (mode == PValueMode::Plain ? v > t : v >= t) ++r.exceed;
    }
    if (mode == PValueMode::Plain)
        r.p = static_cast<double>(r.exceed) / static_cast<double>(draws);
    else
        r.p = static_cast<double>(1 + r.exceed) / static_cast<double>(draws + 1);
    return r;
}

}  // namespace fchange
