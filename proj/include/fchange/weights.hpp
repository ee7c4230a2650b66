#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fchange/change_shape.hpp"
#include "fchange/dataset.hpp"

namespace fchange {

enum class WeightMode { SumType, IntegralType };

// Weighting of the CUSUM process. gamma = 0 is the unweighted statistic;
// larger gamma boosts sensitivity near the sample edges. SumType uses the
// exact per-column weight driven by the realized missingness; IntegralType
// uses the location-free integral approximation, which is cheaper and
// identical under complete observation in the large-sample limit.
struct WeightSpec {
    double gamma = 0.0;
    WeightMode mode = WeightMode::SumType;

    void validate() const;
    std::string label() const;  // "sum" or "integral"
};

// Exact per-column weights at split k: with hbar the masked mean of
// h((i-k)/n) over the observed rows of the column, the weight is
//   { mean of h^2 over observed  -  hbar^2 } ^ (-2 gamma).
// A zero braced term means every observed h value in the column is equal;
// together with the observed/unobserved indicator this forces the matching
// CUSUM value to 0, so the weight is defined as 0 for gamma > 0 (and is 1
// when gamma = 0). Returns a length-q vector; k must lie in 1..n-1.
Eigen::VectorXd sum_weights(const Eigen::MatrixXi& mask, const ChangeShape& shape,
                            double gamma, int k);

// Integral-approximation weight as a function of t = k/n:
//   { int_0^{1-t} h(x)^2 dx  -  (int_0^{1-t} h(x) dx)^2 } ^ (-2 gamma),
// closed-form for abrupt and polynomial shapes, composite Simpson on
// 10*panels_hint panels for tabulated ones. Degenerate rule as above.
double omega_weight(const ChangeShape& shape, double gamma, double t,
                    int panels_hint = 100);

// omega_weight at t = k/n; valid for k = 0..n-1.
double integral_weight(const ChangeShape& shape, double gamma, int k, int n);

// integral_weight for all k = 0..n-1 (index k).
std::vector<double> integral_weight_table(const ChangeShape& shape, double gamma,
                                          int n);

}  // namespace fchange
