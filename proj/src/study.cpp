#include "fchange/study.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "fchange/cusum.hpp"
#include "fchange/rng.hpp"

namespace fchange {

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct RepOutcome {
    bool rejected = false;
    bool borderline = false;
    bool flagged = false;
    double tau = 0.0;
    double khat_frac = 0.0;
};

std::string describe_delta(const ScenarioSpec& s) {
    if (s.null_flag) return "0";
    char buf[64];
    switch (s.delta.kind) {
        case DeltaSpec::Kind::Constant:
            std::snprintf(buf, sizeof buf, "%g", s.delta.a);
            return buf;
        case DeltaSpec::Kind::ExpDecay:
            std::snprintf(buf, sizeof buf, "%g*exp(-%g*u)", s.delta.a, s.delta.b);
            return buf;
        case DeltaSpec::Kind::Normalized:
            return "normalized";
    }
    return "?";
}

}  // namespace

std::string MethodSpec::label() const {
    switch (kind) {
        case Kind::Seq:
            return "seq";
        case Kind::Vanilla: {
            char buf[32];
            std::snprintf(buf, sizeof buf, "vanilla:%lld",
                          static_cast<long long>(draws));
            return buf;
        }
        case Kind::Exact:
            return "exact";
    }
    return "?";
}

std::vector<StudyRow> run_study(const StudyConfig& config) {
    config.scenario.validate();
    if (config.reps < 1) throw InputError("study: reps must be positive");
    if (config.stats.empty()) throw InputError("study: no statistics configured");
    for (const StatChoice& sc : config.stats) sc.wspec.validate();
    const Grid grid = Grid::equidistant(config.q);
    const int n = config.scenario.n;
    const std::size_t n_stats = config.stats.size();

    // Warm the boundary cache before the parallel region so worker threads
    // only ever extend it, never race to create it.
    if (config.method.kind == MethodSpec::Kind::Seq)
        BoundaryCache::global().family(config.method.buckets.split_points(),
                                       config.method.eps, 4096);

    std::vector<RepOutcome> outcomes(static_cast<std::size_t>(config.reps) * n_stats);
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mu;

    parallel_for(config.reps, [&](std::int64_t rep) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            const std::uint64_t rep_seed =
                mix_seed(config.seed, static_cast<std::uint64_t>(rep));
            const FunctionalDataset ds = gen_dataset(
                config.scenario, config.missing, config.noise, grid, rep_seed);
            for (std::size_t si = 0; si < n_stats; ++si) {
                PreparedStatistic stat(ds, config.stats[si].shape,
                                       config.stats[si].wspec);
                RepOutcome& out =
                    outcomes[static_cast<std::size_t>(rep) * n_stats + si];
                out.khat_frac = static_cast<double>(stat.k_hat()) / n;
                const PermutationPlan plan{mix_seed(rep_seed, 1000 + si), n};
                switch (config.method.kind) {
                    case MethodSpec::Kind::Seq: {
                        SeqOptions opts;
                        opts.tau_max = config.method.tau_max;
                        const Decision d = seq_decide(stat, plan, config.method.buckets,
                                                      config.method.eps, opts);
                        out.rejected = d.bucket.hi <= 0.05;
                        out.borderline = d.bucket.lo < 0.05 && 0.05 < d.bucket.hi;
                        out.flagged = d.flagged;
                        out.tau = static_cast<double>(d.tau);
                        break;
                    }
                    case MethodSpec::Kind::Vanilla: {
                        const VanillaResult r =
                            vanilla_p(stat, plan, config.method.draws);
                        out.rejected = r.p < 0.05;
                        out.borderline = r.p > 0.04 && r.p < 0.06;
                        out.tau = static_cast<double>(config.method.draws);
                        break;
                    }
                    case MethodSpec::Kind::Exact: {
                        const ExactResult r = exact_p(stat);
                        out.rejected = r.p < 0.05;
                        out.borderline = r.p > 0.04 && r.p < 0.06;
                        out.tau = static_cast<double>(r.total);
                        break;
                    }
                }
            }
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(failure_mu);
            failed.store(true, std::memory_order_relaxed);
            if (failure.empty())
                failure = "rep " + std::to_string(rep) + ": " + e.what();
        }
    });
    if (failed.load()) throw InputError("study failed at " + failure);

    std::vector<StudyRow> rows;
    rows.reserve(n_stats);
    for (std::size_t si = 0; si < n_stats; ++si) {
        StudyRow row;
        row.n = n;
        row.q = config.q;
        row.kappa = config.scenario.kappa;
        row.data_shape = config.scenario.null_flag ? "null" : config.scenario.shape.label();
        row.delta = describe_delta(config.scenario);
        row.missingness = config.missing.label();
        row.stat_shape = config.stats[si].shape.label();
        row.gamma = config.stats[si].wspec.gamma;
        row.weights = config.stats[si].wspec.label();
        row.method = config.method.label();
        row.eps = config.method.kind == MethodSpec::Kind::Seq ? config.method.eps : 0.0;
        row.reps = config.reps;
        row.seed = config.seed;

        std::vector<double> taus, khat_sig;
        taus.reserve(static_cast<std::size_t>(config.reps));
        int rejected = 0, borderline = 0, flagged = 0;
        for (int rep = 0; rep < config.reps; ++rep) {
            const RepOutcome& out =
                outcomes[static_cast<std::size_t>(rep) * n_stats + si];
            rejected += out.rejected;
            borderline += out.borderline;
            flagged += out.flagged;
            taus.push_back(out.tau);
            if (out.rejected) khat_sig.push_back(out.khat_frac);
        }
        row.reject_frac = static_cast<double>(rejected) / config.reps;
        row.borderline_frac = static_cast<double>(borderline) / config.reps;
        row.flagged = flagged;
        row.tau_min = *std::min_element(taus.begin(), taus.end());
        row.tau_max = *std::max_element(taus.begin(), taus.end());
        double mean = 0.0;
        for (double t : taus) mean += t;
        mean /= static_cast<double>(taus.size());
        row.tau_mean = mean;
        row.tau_median = median_of(taus);
        double ss = 0.0;
        for (double t : taus) ss += (t - mean) * (t - mean);
        row.tau_sd = taus.size() > 1 ? std::sqrt(ss / (static_cast<double>(taus.size()) - 1.0)) : 0.0;
        row.significant = rejected;
        row.khat_median_frac = median_of(khat_sig);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string study_table_header() {
    return "n\tq\tkappa\tdata_shape\tdelta\tmissingness\tstat_shape\tgamma\t"
           "weights\tmethod\teps\treps\tseed\treject_frac\tborderline_frac\t"
           "flagged\ttau_min\ttau_median\ttau_mean\ttau_max\ttau_sd\t"
           "significant\tkhat_median_frac";
}

std::string study_table_line(const StudyRow& r) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%d\t%d\t%g\t%s\t%s\t%s\t%s\t%g\t%s\t%s\t%g\t%d\t%llu\t"
                  "%.6g\t%.6g\t%d\t%g\t%g\t%.6g\t%g\t%.6g\t%d\t%.6g",
                  r.n, r.q, r.kappa, r.data_shape.c_str(), r.delta.c_str(),
                  r.missingness.c_str(), r.stat_shape.c_str(), r.gamma,
                  r.weights.c_str(), r.method.c_str(), r.eps, r.reps,
                  static_cast<unsigned long long>(r.seed), r.reject_frac,
                  r.borderline_frac, r.flagged, r.tau_min, r.tau_median,
                  r.tau_mean, r.tau_max, r.tau_sd, r.significant,
                  r.khat_median_frac);
    return buf;
}

}  // namespace fchange
