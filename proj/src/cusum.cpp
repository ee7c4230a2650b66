#include "fchange/cusum.hpp"

#include <cmath>
#include <numeric>

namespace fchange {

namespace {

double pow_neg_two_gamma(double base, double gamma) {
    if (gamma == 0.0) return 1.0;
    if (gamma == 0.25) return 1.0 / std::sqrt(base);
    if (gamma == 0.5) return 1.0 / base;
    return std::pow(base, -2.0 * gamma);
}

// base^(2 - 2*gamma) for base in (0,1]; the abrupt-path scaling factor
double pow_two_minus_two_gamma(double base, double gamma) {
    if (gamma == 0.0) return base * base;
    if (gamma == 0.25) return base * std::sqrt(base);
    if (gamma == 0.5) return base;
    return std::pow(base, 2.0 - 2.0 * gamma);
}

}  // namespace

Eigen::VectorXd y_process(const FunctionalDataset& ds, const ChangeShape& shape,
                          int k) {
    const int n = ds.n(), q = ds.q();
    if (k < 1 || k > n - 1) throw LogicError("y_process: k out of range");
    const Eigen::VectorXd mean = pooled_mean(ds);
    const std::vector<double> h = shape.lattice(n);
    Eigen::VectorXd y(q);
    for (int j = 0; j < q; ++j) {
        double acc = 0.0;
        int nj = 0;
        for (int i = 0; i < n; ++i) {
            if (!ds.mask(i, j)) continue;
            ++nj;
            const int d = i + 1 - k;
            if (d > 0)
                acc += h[static_cast<std::size_t>(d)] * (ds.values(i, j) - mean(j));
        }
        y(j) = acc / std::sqrt(static_cast<double>(nj));
    }
    return y;
}

Eigen::VectorXd z_process(const FunctionalDataset& ds, const ChangeShape& shape,
                          const WeightSpec& wspec, int k) {
    wspec.validate();
    const int n = ds.n(), q = ds.q();
    if (k < 1 || k > n - 1) throw LogicError("z_process: k out of range");
    const Eigen::VectorXd y = y_process(ds, shape, k);
    const ColumnCounts cc = counts(ds.mask);
    Eigen::VectorXd z(q);
    Eigen::VectorXd w;
    double scalar_w = 1.0;
    if (wspec.mode == WeightMode::SumType)
        w = sum_weights(ds.mask, shape, wspec.gamma, k);
    else
        scalar_w = integral_weight(shape, wspec.gamma, k, n);
    for (int j = 0; j < q; ++j) {
        const int nk = cc.prefix(k, j), nj = cc.total(j);
        if (nk <= 0 || nk >= nj) {
            z(j) = 0.0;
            continue;
        }
        const double wj = wspec.mode == WeightMode::SumType ? w(j) : scalar_w;
        z(j) = std::sqrt(wj) * y(j);
    }
    return z;
}

Eigen::VectorXd abrupt_z(const FunctionalDataset& ds, double gamma, int k) {
    const int n = ds.n(), q = ds.q();
    if (k < 1 || k > n - 1) throw LogicError("abrupt_z: k out of range");
    if (!(gamma >= 0.0 && gamma <= 0.5))
        throw InputError("abrupt_z: gamma must lie in [0, 0.5]");
    Eigen::VectorXd z(q);
    for (int j = 0; j < q; ++j) {
        double sum_before = 0.0, sum_total = 0.0;
        int nk = 0, nj = 0;
        for (int i = 0; i < n; ++i) {
            if (!ds.mask(i, j)) continue;
            sum_total += ds.values(i, j);
            ++nj;
            if (i < k) {
                sum_before += ds.values(i, j);
                ++nk;
            }
        }
        if (nk == 0 || nk == nj) {
            z(j) = 0.0;  // 0/0 convention: a one-sided column contributes nothing
            continue;
        }
        const double mean_before = sum_before / nk;
        const double mean_after = (sum_total - sum_before) / (nj - nk);
        const double frac = static_cast<double>(nk) * (nj - nk) /
                            (static_cast<double>(nj) * nj);
        z(j) = std::sqrt(static_cast<double>(nj)) *
               std::pow(frac, 1.0 - gamma) * (mean_before - mean_after);
    }
    return z;
}

CusumField cusum_field(const FunctionalDataset& ds, const ChangeShape& shape,
                       const WeightSpec& wspec) {
    ds.validate();
    wspec.validate();
    const int n = ds.n(), q = ds.q();
    const std::vector<double>& cells = ds.grid.cell_lengths();
    CusumField f;
    f.z.resize(n - 1, q);
    f.profile.resize(n - 1);
    for (int k = 1; k <= n - 1; ++k) {
        const Eigen::VectorXd zk = z_process(ds, shape, wspec, k);
        f.z.row(k - 1) = zk.transpose();
        double acc = 0.0;
        for (int j = 0; j < q; ++j)
            acc += zk(j) * zk(j) * cells[static_cast<std::size_t>(j)];
        f.profile(k - 1) = acc;
    }
    return f;
}

TestResult statistic(const FunctionalDataset& ds, const ChangeShape& shape,
                     const WeightSpec& wspec) {
    return PreparedStatistic(ds, shape, wspec).result();
}

int estimate_changepoint(const TestResult& result) {
    if (result.profile.size() == 0)
        throw LogicError("estimate_changepoint: empty profile");
    return result.k_hat;
}

PreparedStatistic::PreparedStatistic(const FunctionalDataset& ds,
                                     const ChangeShape& shape,
                                     const WeightSpec& wspec) {
    ds.validate();
    wspec.validate();
    n_ = ds.n();
    q_ = ds.q();
    gamma_ = wspec.gamma;
    mode_ = wspec.mode;
    if (shape.kind() == ShapeKind::Abrupt)
        path_ = Path::Abrupt;
    else if (shape.kind() == ShapeKind::Polynomial && shape.exponent() == 1.0)
        path_ = Path::Linear;
    else
        path_ = Path::Generic;

    centered_.resize(n_, q_);
    obs_.resize(n_, q_);
    col_total_.resize(q_);
    centered_sum_.resize(q_);
    const Eigen::VectorXd mean = pooled_mean(ds);
    for (int j = 0; j < q_; ++j) {
        int nj = 0;
        double csum = 0.0;
        for (int i = 0; i < n_; ++i) {
            if (ds.mask(i, j)) {
                ++nj;
                obs_(i, j) = 1.0;
                centered_(i, j) = ds.values(i, j) - mean(j);
                csum += centered_(i, j);
            } else {
                obs_(i, j) = 0.0;
                centered_(i, j) = 0.0;
            }
        }
        col_total_(j) = nj;
        centered_sum_(j) = csum;
    }
    cells_ = ds.grid.cell_lengths();
    h_ = shape.lattice(n_);
    if (mode_ == WeightMode::IntegralType)
        iweights_ = integral_weight_table(shape, gamma_, n_);

    profile_.assign(static_cast<std::size_t>(n_ - 1), 0.0);
    col_a_.assign(static_cast<std::size_t>(n_), 0.0);
    col_o_.assign(static_cast<std::size_t>(n_), 0.0);

    std::vector<int> identity(static_cast<std::size_t>(n_));
    std::iota(identity.begin(), identity.end(), 0);
    observed_ = (*this)(identity);
    identity_profile_.resize(n_ - 1);
    for (int k = 0; k < n_ - 1; ++k)
        identity_profile_(k) = profile_[static_cast<std::size_t>(k)];
    k_hat_ = 1;
    for (int k = 1; k < n_ - 1; ++k)
        if (profile_[static_cast<std::size_t>(k)] >
            profile_[static_cast<std::size_t>(k_hat_ - 1)])
            k_hat_ = k + 1;
}

double PreparedStatistic::operator()(const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != n_)
        throw LogicError("prepared statistic: permutation length mismatch");
    accumulate_profile(order);
    return profile_max();
}

void PreparedStatistic::accumulate_profile(const std::vector<int>& order) {
    std::fill(profile_.begin(), profile_.end(), 0.0);
    const int n = n_;
    for (int j = 0; j < q_; ++j) {
        const double* acol = centered_.col(j).data();
        const double* ocol = obs_.col(j).data();
        double* a = col_a_.data();
        double* o = col_o_.data();
        for (int p = 0; p < n; ++p) {
            const int src = order[static_cast<std::size_t>(p)];
            a[p] = acol[src];
            o[p] = ocol[src];
        }
        const double total = col_total_(j);
        const double cell = cells_[static_cast<std::size_t>(j)];
        switch (path_) {
            case Path::Abrupt: {
                const double a_total = centered_sum_(j);
                const double inv_total2 = 1.0 / (total * total);
                double a_prefix = 0.0, n_prefix = 0.0;
                if (mode_ == WeightMode::SumType) {
                    for (int k = 1; k <= n - 1; ++k) {
                        a_prefix += a[k - 1];
                        n_prefix += o[k - 1];
                        if (n_prefix <= 0.0 || n_prefix >= total) continue;
                        const double n_suffix = total - n_prefix;
                        const double diff = a_prefix / n_prefix -
                                            (a_total - a_prefix) / n_suffix;
                        const double frac = n_prefix * n_suffix * inv_total2;
                        const double zsq = total *
                                           pow_two_minus_two_gamma(frac, gamma_) *
                                           diff * diff;
                        profile_[static_cast<std::size_t>(k - 1)] += zsq * cell;
                    }
                } else {
                    const double inv_total = 1.0 / total;
                    for (int k = 1; k <= n - 1; ++k) {
                        a_prefix += a[k - 1];
                        n_prefix += o[k - 1];
                        if (n_prefix <= 0.0 || n_prefix >= total) continue;
                        const double y = (a_total - a_prefix);
                        profile_[static_cast<std::size_t>(k - 1)] +=
                            y * y * inv_total * cell;
                    }
                }
                break;
            }
            case Path::Linear: {
                // Single descending sweep with shifted suffix moments: with
                // d = i - k, all five accumulators update additively, which
                // avoids the cancellation of expanding (i-k)^2 around large i.
                //   ta = sum a_i, q1 = sum d a_i, so = sum o_i,
                //   p1 = sum d o_i, p2 = sum d^2 o_i   (sums over i > k)
                double ta = 0.0, q1 = 0.0, so = 0.0, p1 = 0.0, p2 = 0.0;
                const double inv_n = 1.0 / n;
                const double inv_total = 1.0 / total;
                for (int k = n - 1; k >= 1; --k) {
                    ta += a[k];
                    q1 += ta;
                    so += o[k];
                    p2 += 2.0 * p1 + so;
                    p1 += so;
                    if (so <= 0.0 || so >= total) continue;
                    const double y = q1 * inv_n;  // times 1/sqrt(total) later
                    double term;
                    if (mode_ == WeightMode::SumType) {
                        const double m1 = p1 * inv_n * inv_total;
                        const double braced = p2 * inv_n * inv_n * inv_total - m1 * m1;
                        if (braced <= 0.0) {
                            if (gamma_ != 0.0) continue;
                            term = y * y * inv_total;
                        } else {
                            term = pow_neg_two_gamma(braced, gamma_) * y * y * inv_total;
                        }
                    } else {
                        term = y * y * inv_total;
                    }
                    profile_[static_cast<std::size_t>(k - 1)] += term * cell;
                }
                break;
            }
            case Path::Generic: {
                const double inv_total = 1.0 / total;
                for (int k = 1; k <= n - 1; ++k) {
                    double ya = 0.0, s1 = 0.0, s2 = 0.0, n_suffix = 0.0;
                    for (int p = k; p < n; ++p) {
                        const double hv = h_[static_cast<std::size_t>(p + 1 - k)];
                        ya += hv * a[p];
                        s1 += hv * o[p];
                        s2 += hv * hv * o[p];
                        n_suffix += o[p];
                    }
                    if (n_suffix <= 0.0 || n_suffix >= total) continue;
                    double term;
                    const double ysq = ya * ya * inv_total;
                    if (mode_ == WeightMode::SumType) {
                        const double m1 = s1 * inv_total;
                        const double braced = s2 * inv_total - m1 * m1;
                        if (braced <= 0.0) {
                            if (gamma_ != 0.0) continue;
                            term = ysq;
                        } else {
                            term = pow_neg_two_gamma(braced, gamma_) * ysq;
                        }
                    } else {
                        term = ysq;
                    }
                    profile_[static_cast<std::size_t>(k - 1)] += term * cell;
                }
                break;
            }
        }
    }
    if (mode_ == WeightMode::IntegralType) {
        for (int k = 1; k <= n - 1; ++k)
            profile_[static_cast<std::size_t>(k - 1)] *= iweights_[static_cast<std::size_t>(k)];
    }
}

double PreparedStatistic::profile_max() {
    double best = profile_[0];
    for (std::size_t k = 1; k < profile_.size(); ++k)
        if (profile_[k] > best) best = profile_[k];
    return best;
}

}  // namespace fchange
