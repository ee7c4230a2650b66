#include "fchange/simulate.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fchange/rng.hpp"

namespace fchange {

void NoiseSpec::validate() const {
    if (terms < 1) throw InputError("noise: needs at least one term");
}

std::string MissingnessSpec::label() const {
    switch (pattern) {
        case MissingPattern::M1: return "M1";
        case MissingPattern::M2: return "M2";
        case MissingPattern::M3: return "M3";
        case MissingPattern::Complete: return "C";
        case MissingPattern::M2Drift: return "M2drift";
    }
    return "?";
}

MissingnessSpec parse_missingness(const std::string& name) {
    if (name == "M1" || name == "m1") return {MissingPattern::M1};
    if (name == "M2" || name == "m2") return {MissingPattern::M2};
    if (name == "M3" || name == "m3") return {MissingPattern::M3};
    if (name == "C" || name == "c" || name == "complete")
        return {MissingPattern::Complete};
    if (name == "M2drift" || name == "m2drift" || name == "M2Drift")
        return {MissingPattern::M2Drift};
    throw InputError("missingness: unknown pattern '" + name +
                     "' (expected M1, M2, M3, C, or M2drift)");
}

double DeltaSpec::value(double u, double kappa, const ChangeShape& shape) const {
    switch (kind) {
        case Kind::Constant:
            return a;
        case Kind::ExpDecay:
            return a * std::exp(-b * u);
        case Kind::Normalized: {
            double r = 0.0;  // abrupt: plain unit jump
            if (shape.kind() == ShapeKind::Polynomial) r = shape.exponent();
            else if (shape.kind() == ShapeKind::Tabulated)
                throw InputError("delta: normalized mode is undefined for tabulated shapes");
            return std::pow(1.0 - kappa, -r);
        }
    }
    return 0.0;
}

void ScenarioSpec::validate() const {
    if (n < 2) throw InputError("scenario: n must be at least 2");
    if (!(kappa > 0.0 && kappa < 1.0))
        throw InputError("scenario: kappa must lie in (0, 1)");
    if (!null_flag) {
        if (!std::isfinite(delta.a) || !std::isfinite(delta.b))
            throw InputError("scenario: delta parameters must be finite");
    }
}

Eigen::MatrixXd gen_noise(const NoiseSpec& nspec, const Grid& grid, int n,
                          std::uint64_t seed) {
    nspec.validate();
    const int q = grid.size();
    const int terms = nspec.terms;
    // cosine basis and per-term scales, shared across rows
    Eigen::MatrixXd basis(terms, q);
    for (int t = 0; t < terms; ++t) {
        const double scale = std::sqrt(nspec.lambda(t));
        for (int j = 0; j < q; ++j)
            basis(t, j) = scale * std::cos(t * std::numbers::pi * grid.points()[static_cast<std::size_t>(j)]);
    }
    Eigen::MatrixXd out(n, q);
    std::vector<double> coef(static_cast<std::size_t>(terms));
    for (int i = 0; i < n; ++i) {
        SplitMix64 g(mix_seed(seed, static_cast<std::uint64_t>(i)));
        for (int t = 0; t < terms; ++t) coef[static_cast<std::size_t>(t)] = g.next_normal();
        for (int j = 0; j < q; ++j) {
            double acc = 0.0;
            for (int t = 0; t < terms; ++t)
                acc += coef[static_cast<std::size_t>(t)] * basis(t, j);
            out(i, j) = acc;
        }
    }
    return out;
}

namespace {

// One observation-set draw; returns the row mask over the grid points.
// The per-row uniform draw order is fixed and documented here because it is
// part of the reproducibility contract.
void draw_mask_row(const MissingnessSpec& mspec, const Grid& grid, int row,
                   int n, SplitMix64& g, Eigen::MatrixXi& mask) {
    const int q = grid.size();
    const std::vector<double>& u = grid.points();
    auto set_all = [&](int v) {
        for (int j = 0; j < q; ++j) mask(row, j) = v;
    };
    switch (mspec.pattern) {
        case MissingPattern::Complete:
            set_all(1);
            return;
        case MissingPattern::M1: {
            const double u1 = g.next_double();  // draw order: U1, U2
            const double u2 = g.next_double();
            const double mid = 1.5 * std::sqrt(u1);
            const double lo = mid - 0.5 * u2, hi = mid + 0.5 * u2;
            for (int j = 0; j < q; ++j)
                mask(row, j) = (u[static_cast<std::size_t>(j)] >= lo &&
                                u[static_cast<std::size_t>(j)] <= hi)
                                   ? 0 : 1;
            return;
        }
        case MissingPattern::M2:
        case MissingPattern::M2Drift: {
            double p_gap = 0.7;
            if (mspec.pattern == MissingPattern::M2Drift && 2 * (row + 1) > n)
                p_gap = 0.9;
            const bool has_gap = g.next_double() < p_gap;  // draw order: A, then V1, V2, U2
            if (!has_gap) {
                set_all(1);
                return;
            }
            const double v1 = g.next_double();
            const double v2 = g.next_double();
            const double u2 = g.next_double();
            const double mid = std::sqrt(0.5 * (v1 + v2));
            const double lo = mid - 0.2 * u2, hi = mid + 0.2 * u2;
            for (int j = 0; j < q; ++j)
                mask(row, j) = (u[static_cast<std::size_t>(j)] >= lo &&
                                u[static_cast<std::size_t>(j)] <= hi)
                                   ? 0 : 1;
            return;
        }
        case MissingPattern::M3: {
            if (g.next_double() < 0.3) {  // draw order: A1, then A2, U
                set_all(1);
                return;
            }
            const bool left_piece = g.next_double() < 0.5;
            const double root = std::sqrt(g.next_double());
            if (left_piece) {
                const double hi = 0.5 * (1.0 + root);
                for (int j = 0; j < q; ++j)
                    mask(row, j) = u[static_cast<std::size_t>(j)] <= hi ? 1 : 0;
            } else {
                const double lo = 0.5 * (1.0 - root);
                for (int j = 0; j < q; ++j)
                    mask(row, j) = u[static_cast<std::size_t>(j)] >= lo ? 1 : 0;
            }
            return;
        }
    }
}

bool columns_covered(const Eigen::MatrixXi& mask) {
    for (Eigen::Index j = 0; j < mask.cols(); ++j) {
        if (mask.col(j).sum() == 0) return false;
    }
    return true;
}

}  // namespace

Eigen::MatrixXi gen_mask(const MissingnessSpec& mspec, const Grid& grid, int n,
                         std::uint64_t seed, int* redraw_count) {
    if (n < 1) throw InputError("mask: n must be positive");
    Eigen::MatrixXi mask(n, grid.size());
    for (int attempt = 0;; ++attempt) {
        if (attempt > 1000)
            throw InputError("mask: could not satisfy column coverage after 1000 redraws");
        SplitMix64 g(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
        for (int i = 0; i < n; ++i) draw_mask_row(mspec, grid, i, n, g, mask);
        if (columns_covered(mask)) {
            if (redraw_count) *redraw_count = attempt;
            return mask;
        }
    }
}

FunctionalDataset gen_dataset(const ScenarioSpec& scenario,
                              const MissingnessSpec& mspec,
                              const NoiseSpec& nspec, const Grid& grid,
                              std::uint64_t seed) {
    scenario.validate();
    const int n = scenario.n, q = grid.size();
    FunctionalDataset ds;
    ds.grid = grid;
    ds.values = gen_noise(nspec, grid, n, mix_seed(seed, 1));
    ds.mask = gen_mask(mspec, grid, n, mix_seed(seed, 2));
    if (!scenario.null_flag) {
        for (int i = 0; i < n; ++i) {
            const double hv =
                scenario.shape(static_cast<double>(i + 1) / n - scenario.kappa);
            if (hv == 0.0) continue;
            for (int j = 0; j < q; ++j)
                ds.values(i, j) +=
                    hv * scenario.delta.value(grid.points()[static_cast<std::size_t>(j)],
                                              scenario.kappa, scenario.shape);
        }
    }
    // NaN-poison the unobserved cells; downstream code must consult the mask.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < q; ++j)
            if (!ds.mask(i, j))
                ds.values(i, j) = std::numeric_limits<double>::quiet_NaN();
    return ds;
}

}  // namespace fchange
