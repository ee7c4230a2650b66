#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fchange/dataset.hpp"
#include "fchange/weights.hpp"

namespace fchange {

// Weighted CUSUM machinery for a candidate split after row k (k = 1..n-1):
// rows 1..k against rows k+1..n, with the comparison shaped by h and
// restricted per grid column to the rows actually observed there.

// Centered h-weighted partial-sum process at split k:
//   Y_k(u_j) = N(u_j)^{-1/2} * sum_i h((i-k)/n) * O_ij * (X_ij - Xbar_j)
// with Xbar the pooled column mean.
Eigen::VectorXd y_process(const FunctionalDataset& ds, const ChangeShape& shape,
                          int k);

// Weighted process Z_k = sqrt(w) * Y_k * 1[0 < N_k(u_j) < N(u_j)], where w
// comes from sum_weights or integral_weight per the WeightSpec. The
// indicator removes columns whose observations fall entirely on one side of
// the split.
Eigen::VectorXd z_process(const FunctionalDataset& ds, const ChangeShape& shape,
                          const WeightSpec& wspec, int k);

// Specialized abrupt-change process written as a scaled two-sample mean
// difference,
//   sqrt(N) * (N_k (N - N_k) / N^2)^(1-gamma) * (mean before - mean after),
// computed from prefix sums of the masked values with 0/0 treated as 0.
// Coincides with z_process(Abrupt, SumType) up to a sign flip.
Eigen::VectorXd abrupt_z(const FunctionalDataset& ds, double gamma, int k);

// All splits at once. Row k-1 of z holds the process at split k; profile[k-1]
// is its squared norm under the grid's cell quadrature.
struct CusumField {
    Eigen::MatrixXd z;        // (n-1) x q
    Eigen::VectorXd profile;  // n-1
};

CusumField cusum_field(const FunctionalDataset& ds, const ChangeShape& shape,
                       const WeightSpec& wspec);

struct TestResult {
    double statistic = 0.0;
    int k_hat = 0;            // smallest maximizing split, in 1..n-1
    Eigen::VectorXd profile;  // length n-1, entry k-1 for split k
};

// Test statistic: max over k of the quadrature-weighted squared norm of Z_k.
TestResult statistic(const FunctionalDataset& ds, const ChangeShape& shape,
                     const WeightSpec& wspec);

// Change-point estimate: the profile argmax (smallest index on ties).
// Meaningful only when the test rejects.
int estimate_changepoint(const TestResult& result);

// Contract used by the permutation engine: a statistic evaluated on a row
// permutation of the data. order[i] names the source row placed at position
// i; order must be a permutation of 0..n-1.
class StatisticEval {
public:
    virtual ~StatisticEval() = default;
    virtual int size() const = 0;
    virtual double operator()(const std::vector<int>& order) = 0;
};

// Permutation-ready statistic. Everything invariant under row permutation
// is computed once: pooled column means and centered values, column counts,
// quadrature cells, the h lattice, and IntegralType weights. Each eval then
// costs O(n q) for abrupt and linear shapes (single sweep per column using
// prefix/suffix accumulators) and O(n^2 q) otherwise.
class PreparedStatistic final : public StatisticEval {
public:
    PreparedStatistic(const FunctionalDataset& ds, const ChangeShape& shape,
                      const WeightSpec& wspec);

    int size() const override { return n_; }
    double operator()(const std::vector<int>& order) override;

    // Identity-permutation results, cached at construction.
    double observed() const { return observed_; }
    int k_hat() const { return k_hat_; }
    const Eigen::VectorXd& identity_profile() const { return identity_profile_; }
    TestResult result() const { return {observed_, k_hat_, identity_profile_}; }

private:
    enum class Path { Abrupt, Linear, Generic };

    void accumulate_profile(const std::vector<int>& order);
    double profile_max();

    int n_ = 0, q_ = 0;
    double gamma_ = 0.0;
    WeightMode mode_ = WeightMode::SumType;
    Path path_ = Path::Generic;

    Eigen::MatrixXd centered_;      // n x q: mask ? value - column mean : 0
    Eigen::MatrixXd obs_;           // n x q mask as doubles
    Eigen::VectorXd col_total_;     // N per column
    Eigen::VectorXd centered_sum_;  // per-column sum of centered_ (0 up to rounding)
    std::vector<double> cells_;
    std::vector<double> h_;         // h(d/n), d = 0..n
    std::vector<double> iweights_;  // IntegralType: omega(k/n), k = 0..n-1

    std::vector<double> profile_;   // workspace, length n-1
    std::vector<double> col_a_;     // workspace: permuted centered column
    std::vector<double> col_o_;     // workspace: permuted mask column

    double observed_ = 0.0;
    int k_hat_ = 1;
    Eigen::VectorXd identity_profile_;
};

}  // namespace fchange
