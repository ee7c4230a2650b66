#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fchange/study.hpp"

namespace fchange {

// Flag grammars shared by the command line and the scenario file.
//
//   shape:   abrupt | abr | linear | lin | pol:<r>
//   delta:   none | <number> | exp:<a>,<b> | normalized
//   weights: sum | integral
//   method:  seq | vanilla:<B> | exact
//   buckets: default | stars | <path to a bucket file>
ChangeShape parse_shape(const std::string& text);
DeltaSpec parse_delta(const std::string& text, bool& null_flag);
WeightMode parse_weight_mode(const std::string& text);
MethodSpec parse_method(const std::string& text);
BucketSet parse_bucket_spec(const std::string& text);

// Bucket file: one "lo hi" pair per line, '#' comments and blank lines
// ignored; the set must satisfy the overlapping-cover invariants.
BucketSet read_bucket_file(const std::string& path);

// Scenario file: "key = value" lines, '#' comments, blank lines. Unknown or
// duplicate keys are errors. Keys (all but n optional):
//   n, q, kappa, shape, r, data_shape, delta, missingness,
//   gamma, weights, method, eps, buckets, tau_max, reps, seed
// gamma, weights and shape accept comma-separated lists; the study runs
// their cross product (shape, then weights, then gamma fastest). data_shape
// names the generated change when it differs from the tested one; with a
// single tested shape it defaults to that shape. r supplies the polynomial
// exponent for a bare "pol".
StudyConfig parse_study_config(std::istream& in, const std::string& name);
StudyConfig read_study_config_file(const std::string& path);

}  // namespace fchange
