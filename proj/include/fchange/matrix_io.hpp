#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fchange/boundaries.hpp"
#include "fchange/dataset.hpp"

namespace fchange {

// Shortest decimal form that parses back to the same double. All text output
// goes through this so that write -> read round-trips are bit-exact.
std::string format_double(double x);

// A parsed curve matrix file: header row of grid locations, one row per
// curve, missing cells written as NA (empty fields are accepted on input).
// Locations are kept as read, except that a header of integer week indices
// outside [0,1] is mapped linearly onto [0,1] (first -> 0, last -> 1).
struct CurveMatrix {
    std::vector<double> locations;
    Eigen::MatrixXd values;  // NaN where missing
    Eigen::MatrixXi mask;
    bool week_normalized = false;

    // Columns with no observed entry are rejected, or dropped (with the
    // quadrature cells recomputed from the surviving locations) when
    // drop_empty_columns is set.
    FunctionalDataset to_dataset(bool drop_empty_columns = false) const;
};

// Field separator is detected from the header line: tab, comma or semicolon
// if present, otherwise runs of spaces. name is used in diagnostics.
CurveMatrix read_curve_matrix(std::istream& in, const std::string& name);
CurveMatrix read_curve_matrix_file(const std::string& path);

// Comma-separated, header row of locations, NA for missing cells.
void write_curve_matrix(std::ostream& out, const FunctionalDataset& ds);
void write_curve_matrix_file(const std::string& path, const FunctionalDataset& ds);

// Stopping-boundary table as columnar text: a metadata line carrying
// (split, eps, offset), a header, then one (step, lower, upper) row per
// step. Read back, the table drives the sequential procedure unchanged.
void write_boundary_table(std::ostream& out, const Boundaries& tbl);
void write_boundary_table_file(const std::string& path, const Boundaries& tbl);
Boundaries read_boundary_table(std::istream& in, const std::string& name);
Boundaries read_boundary_table_file(const std::string& path);

}  // namespace fchange
