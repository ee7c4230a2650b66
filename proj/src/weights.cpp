#include "fchange/weights.hpp"

#include <cmath>

namespace fchange {

namespace {

// branch-free power for the common exponents -2*gamma with gamma in
// {0, 1/4, 1/2}; falls back to std::pow otherwise
double neg_two_gamma_pow(double base, double gamma) {
    if (gamma == 0.0) return 1.0;
    if (gamma == 0.25) return 1.0 / std::sqrt(base);
    if (gamma == 0.5) return 1.0 / base;
    return std::pow(base, -2.0 * gamma);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
    if (b <= a) return 0.0;
    if (panels % 2 != 0) ++panels;
    const double step = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i)
        acc += f(a + i * step) * (i % 2 ? 4.0 : 2.0);
    return acc * step / 3.0;
}

}  // namespace

void WeightSpec::validate() const {
    if (!(gamma >= 0.0 && gamma <= 0.5))
        throw InputError("weights: gamma must lie in [0, 0.5]");
}

std::string WeightSpec::label() const {
    return mode == WeightMode::SumType ? "sum" : "integral";
}

Eigen::VectorXd sum_weights(const Eigen::MatrixXi& mask, const ChangeShape& shape,
                            double gamma, int k) {
    const auto n = static_cast<int>(mask.rows());
    const auto q = static_cast<int>(mask.cols());
    if (k < 1 || k > n - 1) throw LogicError("sum_weights: k out of range");
    const std::vector<double> h = shape.lattice(n);
    Eigen::VectorXd w(q);
    for (int j = 0; j < q; ++j) {
        double s1 = 0.0, s2 = 0.0;
        int nj = 0;
        for (int i = 0; i < n; ++i) {
            if (!mask(i, j)) continue;
            ++nj;
            const int d = i + 1 - k;  // rows are 1-based in the h argument
            if (d > 0) {
                const double hv = h[static_cast<std::size_t>(d)];
                s1 += hv;
                s2 += hv * hv;
            }
        }
        const double braced = s2 / nj - (s1 / nj) * (s1 / nj);
        w(j) = braced > 0.0 ? neg_two_gamma_pow(braced, gamma)
                            : (gamma == 0.0 ? 1.0 : 0.0);
    }
    return w;
}

double omega_weight(const ChangeShape& shape, double gamma, double t,
                    int panels_hint) {
    if (!(t >= 0.0 && t < 1.0)) throw LogicError("omega_weight: t must lie in [0,1)");
    const double s = 1.0 - t;  // integration upper limit
    double braced = 0.0;
    switch (shape.kind()) {
        case ShapeKind::Abrupt:
            braced = s - s * s;
            break;
        case ShapeKind::Polynomial: {
            const double r = shape.exponent();
            braced = std::pow(s, 2.0 * r + 1.0) *
                     (1.0 / (2.0 * r + 1.0) - s / ((r + 1.0) * (r + 1.0)));
            break;
        }
        case ShapeKind::Tabulated: {
            const int panels = 10 * std::max(panels_hint, 1);
            const double m1 = simpson([&](double x) { return shape(x); }, 0.0, s, panels);
            const double m2 = simpson([&](double x) { double v = shape(x); return v * v; },
                                      0.0, s, panels);
            braced = m2 - m1 * m1;
            break;
        }
    }
    return braced > 0.0 ? neg_two_gamma_pow(braced, gamma)
                        : (gamma == 0.0 ? 1.0 : 0.0);
}

double integral_weight(const ChangeShape& shape, double gamma, int k, int n) {
    if (k < 0 || k > n - 1) throw LogicError("integral_weight: k out of range");
    return omega_weight(shape, gamma, static_cast<double>(k) / n, n);
}

std::vector<double> integral_weight_table(const ChangeShape& shape, double gamma,
                                          int n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        w[static_cast<std::size_t>(k)] = integral_weight(shape, gamma, k, n);
    return w;
}

}  // namespace fchange
