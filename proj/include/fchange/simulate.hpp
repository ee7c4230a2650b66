#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "fchange/dataset.hpp"
#include "fchange/change_shape.hpp"

namespace fchange {

// Gaussian noise curves eta_i(u) = sum_{j=0..J} sqrt(lambda_j) xi_ij cos(j pi u)
// with independent standard normal coefficients xi_ij and geometrically
// decaying variances lambda_j = 0.5 * 3^-j.
struct NoiseSpec {
    int terms = 21;  // j = 0..20

    double lambda(int j) const { return 0.5 * std::pow(3.0, -j); }
    void validate() const;
};

enum class MissingPattern { M1, M2, M3, Complete, M2Drift };

// Random observation sets, one interval construction per row (u in [0,1]):
//   M1: everything outside [L, H] with L = 1.5 sqrt(U1) - U2/2,
//       H = 1.5 sqrt(U1) + U2/2 (the interval often leaves [0,1] entirely,
//       giving a complete profile with probability ~0.30).
//   M2: with probability 0.7 everything outside [L, H] where
//       L = sqrt((V1+V2)/2) - U2/5, H = sqrt((V1+V2)/2) + U2/5; otherwise
//       complete.
//   M3: complete with probability 0.3; otherwise a left piece [0, H] or a
//       right piece [L, 1] with equal probability, H = (1+sqrt(U))/2,
//       L = (1-sqrt(U))/2.
//   M2Drift: M2 whose gap probability rises from 0.7 to 0.9 after the
//       first half of the rows (more missing late in the sample).
struct MissingnessSpec {
    MissingPattern pattern = MissingPattern::Complete;

    std::string label() const;
};

MissingnessSpec parse_missingness(const std::string& name);

// Mean-change scenario: X_i(u) = delta(u) * h(i/n - kappa) + eta_i(u).
struct DeltaSpec {
    enum class Kind { Constant, ExpDecay, Normalized } kind = Kind::Constant;
    double a = 0.0, b = 0.0;  // Constant: a; ExpDecay: a * exp(-b u)

    // Normalized resolves to the constant making delta * (1-kappa)^r = 1.
    double value(double u, double kappa, const ChangeShape& shape) const;
};

struct ScenarioSpec {
    int n = 0;
    double kappa = 0.5;
    ChangeShape shape = ChangeShape::abrupt();
    DeltaSpec delta;
    bool null_flag = false;

    void validate() const;
};

// All generation is keyed by (seed, row) so that any single row can be
// reproduced independently; two calls with equal arguments are identical.
Eigen::MatrixXd gen_noise(const NoiseSpec& nspec, const Grid& grid, int n,
                          std::uint64_t seed);

// Masks violating the per-column coverage requirement N(u_j) >= 1 are
// redrawn wholesale from the next sub-seed; redraw_count reports how often.
Eigen::MatrixXi gen_mask(const MissingnessSpec& mspec, const Grid& grid, int n,
                         std::uint64_t seed, int* redraw_count = nullptr);

FunctionalDataset gen_dataset(const ScenarioSpec& scenario,
                              const MissingnessSpec& mspec,
                              const NoiseSpec& nspec, const Grid& grid,
                              std::uint64_t seed);

}  // namespace fchange
