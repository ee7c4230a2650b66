#include "fchange/change_shape.hpp"

#include <cmath>
#include <cstdio>

namespace fchange {

ChangeShape ChangeShape::abrupt() {
    ChangeShape s;
    s.kind_ = ShapeKind::Abrupt;
    return s;
}

ChangeShape ChangeShape::polynomial(double r) {
    if (!(r > 0.0) || !std::isfinite(r))
        throw InputError("change shape: polynomial exponent must be positive"
                         " (use abrupt for a step change)");
    ChangeShape s;
    s.kind_ = ShapeKind::Polynomial;
    s.r_ = r;
    return s;
}

ChangeShape ChangeShape::tabulated(std::vector<std::pair<double, double>> knots) {
    if (knots.size() < 2)
        throw InputError("change shape: tabulated form needs at least two knots");
    if (!(knots.front().first <= 0.0) || knots.front().second != 0.0)
        throw InputError("change shape: first knot must sit at x <= 0 with value 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!std::isfinite(knots[i].first) || !std::isfinite(knots[i].second))
            throw InputError("change shape: knots must be finite");
        if (knots[i].second < 0.0)
            throw InputError("change shape: knot values must be nonnegative");
        if (i > 0) {
            if (!(knots[i].first > knots[i - 1].first))
                throw InputError("change shape: knot x values must be strictly increasing");
            if (knots[i].second < knots[i - 1].second)
                throw InputError("change shape: knot values must be nondecreasing");
        }
    }
    if (!(knots.back().second > 0.0))
        throw InputError("change shape: tabulated profile is identically zero");
    ChangeShape s;
    s.kind_ = ShapeKind::Tabulated;
    s.knots_ = std::move(knots);
    return s;
}

double ChangeShape::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    switch (kind_) {
        case ShapeKind::Abrupt:
            return 1.0;
        case ShapeKind::Polynomial:
            return std::pow(x, r_);
        case ShapeKind::Tabulated: {
            if (x <= knots_.front().first) return 0.0;
            if (x >= knots_.back().first) return knots_.back().second;
            std::size_t hi = 1;
            while (knots_[hi].first < x) ++hi;
            const auto& [x0, v0] = knots_[hi - 1];
            const auto& [x1, v1] = knots_[hi];
            return v0 + (v1 - v0) * (x - x0) / (x1 - x0);
        }
    }
    return 0.0;
}

std::vector<double> ChangeShape::lattice(int n) const {
    if (n < 1) throw LogicError("change shape: lattice needs n >= 1");
    std::vector<double> h(static_cast<std::size_t>(n) + 1);
    h[0] = 0.0;
    for (int d = 1; d <= n; ++d)
        h[static_cast<std::size_t>(d)] = (*this)(static_cast<double>(d) / n);
    return h;
}

std::string ChangeShape::label() const {
    switch (kind_) {
        case ShapeKind::Abrupt:
            return "abr";
        case ShapeKind::Polynomial: {
            if (r_ == 1.0) return "lin";
            char buf[32];
            std::snprintf(buf, sizeof buf, "pol:%g", r_);
            return buf;
        }
        case ShapeKind::Tabulated:
            return "tab";
    }
    return "?";
}

}  // namespace fchange
