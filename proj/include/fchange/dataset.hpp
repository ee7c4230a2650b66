#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fchange/grid.hpp"

namespace fchange {

// A sample of n curves evaluated on a common grid, each observed only on a
// subset of the grid. mask(i,j) = 1 where curve i is observed at point j;
// values(i,j) is meaningful only there and is NaN elsewhere, so accidental
// reads of unobserved cells poison the result instead of passing silently.
struct FunctionalDataset {
    Grid grid = Grid::equidistant(1);
    Eigen::MatrixXd values;  // n x q
    Eigen::MatrixXi mask;    // n x q, entries in {0,1}

    int n() const { return static_cast<int>(values.rows()); }
    int q() const { return static_cast<int>(values.cols()); }

    // Enforces: matching dimensions, n >= 2, mask entries in {0,1}, finite
    // values wherever observed, and at least one observation per column.
    void validate() const;

    // Rows rearranged so that row i of the result is row order[i] of this
    // dataset; values and mask move together.
    FunctionalDataset permuted(const std::vector<int>& order) const;
};

// Per-column observation counts.
struct ColumnCounts {
    Eigen::VectorXi total;   // N(u_j), length q
    Eigen::MatrixXi prefix;  // (n+1) x q; prefix(k, j) = count among first k rows
};

ColumnCounts counts(const Eigen::MatrixXi& mask);

// Pooled per-column mean over observed entries (observation counts are
// positive after validate()).
Eigen::VectorXd pooled_mean(const FunctionalDataset& ds);

}  // namespace fchange
