#pragma once

#include <string>
#include <vector>

#include "fchange/common.hpp"

namespace fchange {

enum class ShapeKind { Abrupt, Polynomial, Tabulated };

// Temporal profile h of the mean change: h(x) = 0 for x <= 0 and h is
// nondecreasing. Row i of a sample of size n carries the signal
// delta(u) * h(i/n - kappa).
//
//   Abrupt:       h(x) = 1 for x > 0 (step change).
//   Polynomial r: h(x) = x^r for x > 0, r > 0; r = 1 is the linear ramp.
//   Tabulated:    piecewise linear interpolation through user knots;
//                 constant 0 left of the first knot, constant at the last
//                 value to the right.
class ChangeShape {
public:
    static ChangeShape abrupt();
    static ChangeShape polynomial(double r);
    static ChangeShape linear() { return polynomial(1.0); }
    // Knots as (x, value) pairs: x strictly increasing, values
    // nondecreasing and nonnegative, first value 0 at x <= 0, last value
    // positive.
    static ChangeShape tabulated(std::vector<std::pair<double, double>> knots);

    double operator()(double x) const;

    ShapeKind kind() const { return kind_; }
    double exponent() const { return r_; }  // Polynomial only
    // h evaluated on the lattice d/n for d = 0..n (entry 0 is always 0).
    std::vector<double> lattice(int n) const;

    // Short tag used in records and flags: "abr", "lin", "pol:<r>", "tab".
    std::string label() const;

private:
    ChangeShape() = default;
    ShapeKind kind_ = ShapeKind::Abrupt;
    double r_ = 0.0;
    std::vector<std::pair<double, double>> knots_;
};

}  // namespace fchange
