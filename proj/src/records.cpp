#include "fchange/records.hpp"

#include <sstream>

#include "fchange/matrix_io.hpp"

namespace fchange {

std::string result_record_header() {
    return "n\tq\tshape\tgamma\tweights\tmethod\teps\tbuckets\tseed\t"
           "statistic\tk_hat\tp\tbucket_lo\tbucket_hi\tbucket\ttau\tflagged";
}

std::string result_record_line(const ResultRecord& r) {
    std::ostringstream os;
    os << r.n << '\t' << r.q << '\t' << r.shape << '\t' << format_double(r.gamma)
       << '\t' << r.weights << '\t' << r.method << '\t' << format_double(r.eps)
       << '\t' << r.buckets << '\t' << r.seed << '\t' << format_double(r.statistic)
       << '\t' << r.k_hat << '\t' << format_double(r.p) << '\t'
       << format_double(r.bucket_lo) << '\t' << format_double(r.bucket_hi) << '\t'
       << r.bucket << '\t' << r.tau << '\t' << (r.flagged ? 1 : 0);
    return os.str();
}

}  // namespace fchange
