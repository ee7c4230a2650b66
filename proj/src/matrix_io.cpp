#include "fchange/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fchange {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string trimmed(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

// One line split into fields. delim == ' ' means "runs of whitespace", in
// which case empty fields cannot occur.
std::vector<std::string> split_fields(const std::string& line, char delim) {
    std::vector<std::string> out;
    if (delim == ' ') {
        std::istringstream is(line);
        std::string tok;
        while (is >> tok) out.push_back(tok);
        return out;
    }
    std::string cur;
    for (char c : line) {
        if (c == delim) {
            out.push_back(trimmed(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trimmed(cur));
    return out;
}

char detect_delimiter(const std::string& header) {
    if (header.find('\t') != std::string::npos) return '\t';
    if (header.find(',') != std::string::npos) return ',';
    if (header.find(';') != std::string::npos) return ';';
    return ' ';
}

bool parse_double_strict(const std::string& field, double& out) {
    const char* b = field.data();
    const char* e = b + field.size();
    const auto res = std::from_chars(b, e, out);
    return res.ec == std::errc() && res.ptr == e && std::isfinite(out);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& what) {
    throw InputError(name + ":" + std::to_string(line) + ": " + what);
}

[[noreturn]] void fail_at(const std::string& name, int line, int column,
                          const std::string& what) {
    throw InputError(name + ":" + std::to_string(line) + ", column " +
                     std::to_string(column) + ": " + what);
}

}  // namespace

CurveMatrix read_curve_matrix(std::istream& in, const std::string& name) {
    std::string line;
    int lineno = 0;
    // header: first non-blank line
    std::vector<std::string> head;
    char delim = ' ';
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        delim = detect_delimiter(line);
        head = split_fields(line, delim);
        break;
    }
    if (head.empty()) throw InputError(name + ": empty file, expected a header of grid locations");
    const int header_line = lineno;
    const int q = static_cast<int>(head.size());

    std::vector<double> loc(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        if (!parse_double_strict(head[static_cast<std::size_t>(j)], loc[static_cast<std::size_t>(j)]))
            fail_at(name, header_line, j + 1,
                    "cannot parse grid location '" + head[static_cast<std::size_t>(j)] + "'");
    }
    for (int j = 1; j < q; ++j) {
        if (loc[static_cast<std::size_t>(j)] == loc[static_cast<std::size_t>(j - 1)])
            fail_at(name, header_line, j + 1, "duplicate column label");
        if (loc[static_cast<std::size_t>(j)] < loc[static_cast<std::size_t>(j - 1)])
            fail_at(name, header_line, j + 1, "grid locations must be strictly increasing");
    }

    CurveMatrix m;
    bool in_unit = true;
    for (double v : loc) in_unit = in_unit && v >= 0.0 && v <= 1.0;
    if (!in_unit) {
        // week-index header: integers, normalized linearly onto [0,1]
        bool integral = true;
        for (double v : loc) integral = integral && v == std::floor(v);
        if (!integral || q < 2)
            fail(name, header_line,
                 "grid locations must lie in [0,1], or be integer week indices (at least two)");
        const double lo = loc.front(), hi = loc.back();
        for (double& v : loc) v = (v - lo) / (hi - lo);
        loc.front() = 0.0;
        loc.back() = 1.0;
        m.week_normalized = true;
    }
    m.locations = std::move(loc);

    std::vector<std::vector<std::string>> rows;
    std::vector<int> row_lines;
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        auto fields = split_fields(line, delim);
        if (static_cast<int>(fields.size()) != q)
            fail(name, lineno, "expected " + std::to_string(q) + " fields, got " +
                                   std::to_string(fields.size()));
        rows.push_back(std::move(fields));
        row_lines.push_back(lineno);
    }
    if (rows.size() < 2)
        throw InputError(name + ": needs at least two curve rows, got " +
                         std::to_string(rows.size()));

    const int n = static_cast<int>(rows.size());
    m.values.resize(n, q);
    m.mask.resize(n, q);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < q; ++j) {
            const std::string& f = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (f.empty() || f == "NA") {
                m.mask(i, j) = 0;
                m.values(i, j) = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            double v;
            if (!parse_double_strict(f, v))
                fail_at(name, row_lines[static_cast<std::size_t>(i)], j + 1,
                        "cannot parse value '" + f + "'");
            m.mask(i, j) = 1;
            m.values(i, j) = v;
        }
    }
    return m;
}

CurveMatrix read_curve_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open for reading");
    return read_curve_matrix(in, path);
}

FunctionalDataset CurveMatrix::to_dataset(bool drop_empty_columns) const {
    const int n = static_cast<int>(values.rows());
    const int q = static_cast<int>(values.cols());
    std::vector<int> keep;
    keep.reserve(static_cast<std::size_t>(q));
    for (int j = 0; j < q; ++j) {
        if (mask.col(j).sum() > 0) {
            keep.push_back(j);
        } else if (!drop_empty_columns) {
            throw InputError("column " + std::to_string(j + 1) + " (location " +
                             format_double(locations[static_cast<std::size_t>(j)]) +
                             ") has no observed entries; rerun with --drop-empty-columns to drop it");
        }
    }
    if (keep.empty()) throw InputError("all columns are empty");

    FunctionalDataset ds;
    std::vector<double> pts;
    pts.reserve(keep.size());
    for (int j : keep) pts.push_back(locations[static_cast<std::size_t>(j)]);
    ds.grid = Grid::from_points(std::move(pts));
    const int qk = static_cast<int>(keep.size());
    ds.values.resize(n, qk);
    ds.mask.resize(n, qk);
    for (int jj = 0; jj < qk; ++jj) {
        ds.values.col(jj) = values.col(keep[static_cast<std::size_t>(jj)]);
        ds.mask.col(jj) = mask.col(keep[static_cast<std::size_t>(jj)]);
    }
    ds.validate();
    return ds;
}

void write_curve_matrix(std::ostream& out, const FunctionalDataset& ds) {
    const auto& pts = ds.grid.points();
    for (int j = 0; j < ds.q(); ++j) {
        if (j) out << ',';
        out << format_double(pts[static_cast<std::size_t>(j)]);
    }
    out << '\n';
    for (int i = 0; i < ds.n(); ++i) {
        for (int j = 0; j < ds.q(); ++j) {
            if (j) out << ',';
            if (ds.mask(i, j))
                out << format_double(ds.values(i, j));
            else
                out << "NA";
        }
        out << '\n';
    }
}

void write_curve_matrix_file(const std::string& path, const FunctionalDataset& ds) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot open for writing");
    write_curve_matrix(out, ds);
    out.flush();
    if (!out) throw InputError(path + ": write failed");
}

void write_boundary_table(std::ostream& out, const Boundaries& tbl) {
    out << "# split=" << format_double(tbl.split) << " eps=" << format_double(tbl.eps)
        << " offset=" << format_double(tbl.spend_offset) << '\n';
    out << "step\tlower\tupper\n";
    for (std::int64_t l = 1; l <= tbl.horizon(); ++l)
        out << l << '\t' << tbl.lower_at(l) << '\t' << tbl.upper_at(l) << '\n';
}

void write_boundary_table_file(const std::string& path, const Boundaries& tbl) {
    std::ofstream out(path);
    if (!out) throw InputError(path + ": cannot open for writing");
    write_boundary_table(out, tbl);
    out.flush();
    if (!out) throw InputError(path + ": write failed");
}

Boundaries read_boundary_table(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# split=", 0) != 0)
        throw InputError(name + ":1: expected a '# split=... eps=... offset=...' line");
    Boundaries tbl;
    {
        std::istringstream is(line.substr(1));
        std::string tok;
        bool have_split = false, have_eps = false, have_off = false;
        while (is >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos)
                throw InputError(name + ":1: malformed metadata token '" + tok + "'");
            const std::string key = tok.substr(0, eq);
            double v;
            if (!parse_double_strict(tok.substr(eq + 1), v))
                throw InputError(name + ":1: cannot parse metadata value in '" + tok + "'");
            if (key == "split") tbl.split = v, have_split = true;
            else if (key == "eps") tbl.eps = v, have_eps = true;
            else if (key == "offset") tbl.spend_offset = v, have_off = true;
            else throw InputError(name + ":1: unknown metadata key '" + key + "'");
        }
        if (!have_split || !have_eps || !have_off)
            throw InputError(name + ":1: metadata must carry split, eps and offset");
    }
    if (!std::getline(in, line) || trimmed(line) != "step\tlower\tupper")
        throw InputError(name + ":2: expected the 'step lower upper' header");
    int lineno = 2;
    std::int64_t expect = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trimmed(line).empty()) continue;
        std::istringstream is(line);
        std::int64_t step;
        long lo, hi;
        if (!(is >> step >> lo >> hi))
            fail(name, lineno, "expected 'step lower upper' integers");
        if (step != expect)
            fail(name, lineno, "steps must run 1,2,...; expected " + std::to_string(expect));
        ++expect;
        tbl.lower.push_back(static_cast<std::int32_t>(lo));
        tbl.upper.push_back(static_cast<std::int32_t>(hi));
    }
    if (tbl.lower.empty()) throw InputError(name + ": boundary table has no rows");
    return tbl;
}

Boundaries read_boundary_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open for reading");
    return read_boundary_table(in, path);
}

}  // namespace fchange
