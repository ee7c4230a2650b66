#pragma once

#include <vector>

#include "fchange/common.hpp"

namespace fchange {

// Evaluation grid on [0,1] together with its midpoint quadrature rule.
// Integrals over [0,1] are approximated by cell sums: cell j spans the
// midpoints between neighbouring grid points, with the first cell starting
// at 0 and the last ending at 1. Cell lengths are positive and sum to 1.
class Grid {
public:
    // Points must be strictly increasing and lie in [0,1]. A single-point
    // grid is allowed; its one cell is the whole interval.
    static Grid from_points(std::vector<double> points);

    // q equally spaced points 0, 1/(q-1), ..., 1. For q >= 2 the cell
    // lengths are 1/(q-1) except the two boundary cells, which are half
    // that. q = 1 gives the single point 1/2.
    static Grid equidistant(int q);

    int size() const { return static_cast<int>(points_.size()); }
    const std::vector<double>& points() const { return points_; }
    const std::vector<double>& cell_lengths() const { return cells_; }

private:
    Grid() = default;
    std::vector<double> points_;
    std::vector<double> cells_;
};

inline Grid Grid::from_points(std::vector<double> points) {
    if (points.empty()) throw InputError("grid: needs at least one point");
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (!(points[j] >= 0.0 && points[j] <= 1.0))
            throw InputError("grid: points must lie in [0,1]");
        if (j > 0 && !(points[j] > points[j - 1]))
            throw InputError("grid: points must be strictly increasing");
    }
    Grid g;
    g.points_ = std::move(points);
    const auto q = g.points_.size();
    g.cells_.resize(q);
    double prev = 0.0;
    for (std::size_t j = 0; j < q; ++j) {
        double next = (j + 1 < q) ? 0.5 * (g.points_[j] + g.points_[j + 1]) : 1.0;
        g.cells_[j] = next - prev;
        prev = next;
    }
    return g;
}

inline Grid Grid::equidistant(int q) {
    if (q < 1) throw InputError("grid: q must be at least 1");
    std::vector<double> pts(static_cast<std::size_t>(q));
    if (q == 1) {
        pts[0] = 0.5;
    } else {
        for (int j = 0; j < q; ++j)
            pts[static_cast<std::size_t>(j)] = static_cast<double>(j) / (q - 1);
    }
    return from_points(std::move(pts));
}

}  // namespace fchange
