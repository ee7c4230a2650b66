#include "fchange/dataset.hpp"

#include <cmath>
#include <string>

namespace fchange {

void FunctionalDataset::validate() const {
    const int rows = n(), cols = q();
    if (rows < 2) throw InputError("dataset: needs at least two curves");
    if (mask.rows() != rows || mask.cols() != cols)
        throw InputError("dataset: mask and values dimensions differ");
    if (cols != grid.size())
        throw InputError("dataset: grid size does not match the number of columns");
    for (int j = 0; j < cols; ++j) {
        int nj = 0;
        for (int i = 0; i < rows; ++i) {
            const int m = mask(i, j);
            if (m != 0 && m != 1)
                throw InputError("dataset: mask entries must be 0 or 1");
            if (m == 1) {
                ++nj;
                if (!std::isfinite(values(i, j)))
                    throw InputError("dataset: non-finite value at an observed cell");
            }
        }
        if (nj == 0)
            throw InputError("dataset: column " + std::to_string(j) +
                             " has no observations");
    }
}

FunctionalDataset FunctionalDataset::permuted(const std::vector<int>& order) const {
    if (static_cast<int>(order.size()) != n())
        throw LogicError("dataset: permutation length does not match row count");
    FunctionalDataset out;
    out.grid = grid;
    out.values.resize(values.rows(), values.cols());
    out.mask.resize(mask.rows(), mask.cols());
    for (int i = 0; i < n(); ++i) {
        out.values.row(i) = values.row(order[static_cast<std::size_t>(i)]);
        out.mask.row(i) = mask.row(order[static_cast<std::size_t>(i)]);
    }
    return out;
}

ColumnCounts counts(const Eigen::MatrixXi& mask) {
    const auto rows = mask.rows();
    const auto cols = mask.cols();
    ColumnCounts c;
    c.total.resize(cols);
    c.prefix.resize(rows + 1, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        int running = 0;
        c.prefix(0, j) = 0;
        for (Eigen::Index i = 0; i < rows; ++i) {
            running += mask(i, j);
            c.prefix(i + 1, j) = running;
        }
        c.total(j) = running;
    }
    return c;
}

Eigen::VectorXd pooled_mean(const FunctionalDataset& ds) {
    const int rows = ds.n(), cols = ds.q();
    Eigen::VectorXd mean(cols);
    for (int j = 0; j < cols; ++j) {
        double sum = 0.0;
        int nj = 0;
        for (int i = 0; i < rows; ++i) {
            if (ds.mask(i, j)) {
                sum += ds.values(i, j);
                ++nj;
            }
        }
        if (nj == 0)
            throw InputError("dataset: column without observations in pooled mean");
        mean(j) = sum / nj;
    }
    return mean;
}

}  // namespace fchange
