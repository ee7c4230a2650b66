#pragma once

#include <string>
#include <vector>

#include "fchange/sequential.hpp"
#include "fchange/simulate.hpp"

namespace fchange {

struct StatChoice {
    ChangeShape shape = ChangeShape::abrupt();
    WeightSpec wspec;
};

struct MethodSpec {
    enum class Kind { Seq, Vanilla, Exact } kind = Kind::Seq;
    double eps = 1e-3;              // Seq
    BucketSet buckets = BucketSet::defaults();  // Seq
    std::int64_t draws = 10'000;    // Vanilla
    std::int64_t tau_max = 10'000'000;

    std::string label() const;
};

struct StudyConfig {
    ScenarioSpec scenario;
    MissingnessSpec missing;
    NoiseSpec noise;
    int q = 100;  // equidistant grid size
    std::vector<StatChoice> stats;
    MethodSpec method;
    int reps = 500;
    std::uint64_t seed = 1;
};

// One aggregate row per StatChoice.
struct StudyRow {
    // configuration echo
    int n = 0, q = 0;
    double kappa = 0.0;
    std::string data_shape;   // change shape of the generated data ("null" under H0)
    std::string delta;        // signal amplitude description
    std::string missingness;
    std::string stat_shape;   // shape used by the statistic
    double gamma = 0.0;
    std::string weights;
    std::string method;
    double eps = 0.0;
    int reps = 0;
    std::uint64_t seed = 0;

    // results
    double reject_frac = 0.0;      // significant outcome (bucket [0,0.05) or p < 0.05)
    double borderline_frac = 0.0;  // bucket straddling 0.05
    int flagged = 0;               // runs stopped by the tau cap
    double tau_min = 0.0, tau_median = 0.0, tau_mean = 0.0, tau_max = 0.0,
           tau_sd = 0.0;
    int significant = 0;           // count of significant runs
    double khat_median_frac = 0.0; // median k_hat/n over significant runs (NaN if none)
};

// Monte-Carlo study: reps independent datasets, every statistic evaluated on
// each, significance assessed by the configured method. The whole table is a
// pure function of the config; rep-level parallelism cannot change it
// because each rep derives its seeds from (seed, rep index) alone. Any rep
// failure propagates as an exception (no silent skips).
std::vector<StudyRow> run_study(const StudyConfig& config);

// Stable column header plus one line per row, tab-separated.
std::string study_table_header();
std::string study_table_line(const StudyRow& row);

}  // namespace fchange
