#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "fchange/matrix_io.hpp"
#include "fchange/records.hpp"
#include "fchange/scenario.hpp"

using namespace fchange;

namespace {

ChangeShape shape_from_flags(const std::string& shape, double r, bool r_given) {
    if (shape == "pol" && r_given) return ChangeShape::polynomial(r);
    return parse_shape(shape);
}

int cmd_test(const std::string& input, const std::string& shape_text, double gamma,
             const std::string& weights_text, const std::string& method_text,
             double eps, const std::string& buckets_text, std::uint64_t seed,
             bool drop_empty, std::int64_t tau_max) {
    const CurveMatrix cm = read_curve_matrix_file(input);
    const FunctionalDataset ds = cm.to_dataset(drop_empty);

    const ChangeShape shape = parse_shape(shape_text);
    WeightSpec wspec;
    wspec.gamma = gamma;
    wspec.mode = parse_weight_mode(weights_text);
    wspec.validate();
    MethodSpec method = parse_method(method_text);
    method.eps = eps;
    method.tau_max = tau_max;

    PreparedStatistic prep(ds, shape, wspec);

    ResultRecord rec;
    rec.n = ds.n();
    rec.q = ds.q();
    rec.shape = shape.label();
    rec.gamma = gamma;
    rec.weights = wspec.label();
    rec.method = method.label();
    rec.seed = seed;
    rec.statistic = prep.observed();
    rec.k_hat = prep.k_hat();

    const PermutationPlan plan{seed, ds.n()};
    bool flagged = false;
    switch (method.kind) {
        case MethodSpec::Kind::Seq: {
            const BucketSet buckets = parse_bucket_spec(buckets_text);
            SeqOptions opts;
            opts.tau_max = method.tau_max;
            const Decision d = seq_decide(prep, plan, buckets, eps, opts);
            rec.eps = eps;
            rec.buckets = buckets_text;
            rec.bucket_lo = d.bucket.lo;
            rec.bucket_hi = d.bucket.hi;
            rec.bucket = d.bucket.label();
            rec.tau = d.tau;
            rec.flagged = d.flagged;
            flagged = d.flagged;
            break;
        }
        case MethodSpec::Kind::Vanilla: {
            const VanillaResult v = vanilla_p(prep, plan, method.draws);
            rec.p = v.p;
            rec.tau = static_cast<std::int64_t>(v.draws);
            break;
        }
        case MethodSpec::Kind::Exact: {
            const ExactResult e = exact_p(prep);
            rec.p = e.p;
            rec.tau = static_cast<std::int64_t>(e.total);
            break;
        }
    }

    std::cout << result_record_header() << '\n' << result_record_line(rec) << '\n';
    return flagged ? 3 : 0;
}

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    const StudyConfig cfg = read_study_config_file(config_path);
    std::cerr << "running " << cfg.reps << " reps x " << cfg.stats.size()
              << " statistics (n=" << cfg.scenario.n << ", q=" << cfg.q << ")\n";
    const std::vector<StudyRow> rows = run_study(cfg);
    std::string table = study_table_header() + "\n";
    for (const auto& row : rows) table += study_table_line(row) + "\n";
    std::cout << table;
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw InputError(out_path + ": cannot open for writing");
        out << table;
        out.flush();
        if (!out) throw InputError(out_path + ": write failed");
    }
    std::cerr << "done\n";
    return 0;
}

int cmd_gen(int n, int q, double kappa, const std::string& shape_text, double r,
            bool r_given, const std::string& delta_text,
            const std::string& missingness_text, std::uint64_t seed,
            const std::string& out_path) {
    ScenarioSpec scenario;
    scenario.n = n;
    scenario.kappa = kappa;
    scenario.shape = shape_from_flags(shape_text, r, r_given);
    scenario.delta = parse_delta(delta_text, scenario.null_flag);
    scenario.validate();
    if (q < 1) throw InputError("gen: q must be at least 1");
    const MissingnessSpec mspec = parse_missingness(missingness_text);

    const FunctionalDataset ds =
        gen_dataset(scenario, mspec, NoiseSpec{}, Grid::equidistant(q), seed);
    if (out_path.empty())
        write_curve_matrix(std::cout, ds);
    else
        write_curve_matrix_file(out_path, ds);
    return 0;
}

int cmd_boundaries(double split, double eps, std::int64_t horizon, double offset,
                   const std::string& out_path) {
    const Boundaries tbl = build_boundaries(split, eps, horizon, offset);
    if (out_path.empty())
        write_boundary_table(std::cout, tbl);
    else
        write_boundary_table_file(out_path, tbl);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-change tests for partially observed functional data"};
    app.require_subcommand(1);

    // test
    auto* test = app.add_subcommand(
        "test", "Run a change test on a curve matrix file and print the record");
    std::string t_input, t_shape = "abrupt", t_weights = "sum", t_method = "seq",
                t_buckets = "default";
    double t_gamma = 0.0, t_eps = 0.001;
    std::uint64_t t_seed = 1;
    bool t_drop = false;
    std::int64_t t_tau_max = 10'000'000;
    test->add_option("input", t_input, "curve matrix file")->required();
    test->add_option("--shape", t_shape, "change shape: abrupt|lin|pol:<r>");
    test->add_option("--gamma", t_gamma, "weight exponent in [0, 0.5]");
    test->add_option("--weights", t_weights, "weight mode: sum|integral");
    test->add_option("--method", t_method, "seq|vanilla:<B>|exact");
    test->add_option("--eps", t_eps, "sequential resampling risk bound");
    test->add_option("--buckets", t_buckets, "default|stars|<bucket file>");
    test->add_option("--seed", t_seed, "permutation seed");
    test->add_flag("--drop-empty-columns", t_drop,
                   "drop grid columns with no observations");
    test->add_option("--tau-max", t_tau_max, "sequential sample cap");

    // simulate
    auto* simulate =
        app.add_subcommand("simulate", "Run a Monte-Carlo study from a scenario file");
    std::string s_config, s_out;
    simulate->add_option("config", s_config, "scenario file")->required();
    simulate->add_option("--out", s_out, "also write the table to this path");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic curve matrix file");
    int g_n = 0, g_q = 100;
    double g_kappa = 0.5, g_r = 1.0;
    std::string g_shape = "abrupt", g_delta = "none", g_missingness = "C", g_out;
    std::uint64_t g_seed = 1;
    gen->add_option("--n", g_n, "number of curves")->required();
    gen->add_option("--q", g_q, "equidistant grid size");
    gen->add_option("--kappa", g_kappa, "change point in rescaled time");
    gen->add_option("--shape", g_shape, "change shape: abrupt|lin|pol:<r>|pol (with --r)");
    auto* g_r_opt = gen->add_option("--r", g_r, "polynomial exponent for --shape pol");
    gen->add_option("--delta", g_delta, "none|<number>|exp:<a>,<b>|normalized");
    gen->add_option("--missingness", g_missingness, "M1|M2|M3|C|M2drift");
    gen->add_option("--seed", g_seed, "generation seed");
    gen->add_option("--out", g_out, "output path (default: standard output)");

    // boundaries
    auto* boundaries = app.add_subcommand(
        "boundaries", "Build and export a sequential stopping-boundary table");
    double b_split = 0.05, b_eps = 0.001, b_offset = 1000.0;
    std::int64_t b_horizon = 1000;
    std::string b_out;
    boundaries->add_option("--split", b_split, "p-value split point in (0,1)")->required();
    boundaries->add_option("--eps", b_eps, "total crossing-risk budget");
    boundaries->add_option("--horizon", b_horizon, "number of steps")->required();
    boundaries->add_option("--offset", b_offset, "risk spending offset");
    boundaries->add_option("--out", b_out, "output path (default: standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (test->parsed())
            return cmd_test(t_input, t_shape, t_gamma, t_weights, t_method, t_eps,
                            t_buckets, t_seed, t_drop, t_tau_max);
        if (simulate->parsed()) return cmd_simulate(s_config, s_out);
        if (gen->parsed())
            return cmd_gen(g_n, g_q, g_kappa, g_shape, g_r, !g_r_opt->empty(), g_delta,
                           g_missingness, g_seed, g_out);
        if (boundaries->parsed())
            return cmd_boundaries(b_split, b_eps, b_horizon, b_offset, b_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
