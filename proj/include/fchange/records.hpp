#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace fchange {

// One test outcome with the full parameterization echoed, so that the run
// can be reproduced from the record alone. Emitted as two tab-separated
// lines: the stable header and the values. p is NaN for sequential runs;
// bucket_lo/bucket_hi are NaN for the others. tau is the number of
// permutations consumed (the draw count for vanilla, the enumeration size
// for exact).
struct ResultRecord {
    int n = 0, q = 0;
    std::string shape;
    double gamma = 0.0;
    std::string weights;
    std::string method;
    double eps = std::numeric_limits<double>::quiet_NaN();
    std::string buckets = "-";
    std::uint64_t seed = 0;

    double statistic = 0.0;
    int k_hat = 0;
    double p = std::numeric_limits<double>::quiet_NaN();
    double bucket_lo = std::numeric_limits<double>::quiet_NaN();
    double bucket_hi = std::numeric_limits<double>::quiet_NaN();
    std::string bucket = "-";
    std::int64_t tau = 0;
    bool flagged = false;
};

std::string result_record_header();
std::string result_record_line(const ResultRecord& r);

}  // namespace fchange
