#include "fchange/scenario.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace fchange {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_list(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
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

double to_double(const std::string& s, const std::string& what) {
    double v;
    const char* b = s.data();
    const auto res = std::from_chars(b, b + s.size(), v);
    if (res.ec != std::errc() || res.ptr != b + s.size() || !std::isfinite(v))
        throw InputError(what + ": cannot parse number '" + s + "'");
    return v;
}

std::int64_t to_int(const std::string& s, const std::string& what) {
    std::int64_t v;
    const char* b = s.data();
    const auto res = std::from_chars(b, b + s.size(), v);
    if (res.ec != std::errc() || res.ptr != b + s.size())
        throw InputError(what + ": cannot parse integer '" + s + "'");
    return v;
}

}  // namespace

ChangeShape parse_shape(const std::string& text) {
    const std::string t = trimmed(text);
    if (t == "abrupt" || t == "abr") return ChangeShape::abrupt();
    if (t == "linear" || t == "lin") return ChangeShape::linear();
    if (t.rfind("pol:", 0) == 0)
        return ChangeShape::polynomial(to_double(t.substr(4), "shape pol:<r>"));
    if (t == "pol")
        throw InputError("shape: 'pol' needs an exponent, write pol:<r> or set the r key");
    throw InputError("shape: expected abrupt|lin|pol:<r>, got '" + t + "'");
}

DeltaSpec parse_delta(const std::string& text, bool& null_flag) {
    const std::string t = trimmed(text);
    null_flag = false;
    DeltaSpec d;
    if (t == "none" || t == "null") {
        null_flag = true;
        d.kind = DeltaSpec::Kind::Constant;
        d.a = 0.0;
        return d;
    }
    if (t == "normalized") {
        d.kind = DeltaSpec::Kind::Normalized;
        return d;
    }
    if (t.rfind("exp:", 0) == 0) {
        const auto parts = split_list(t.substr(4), ',');
        if (parts.size() != 2) throw InputError("delta: expected exp:<a>,<b>");
        d.kind = DeltaSpec::Kind::ExpDecay;
        d.a = to_double(parts[0], "delta exp a");
        d.b = to_double(parts[1], "delta exp b");
        return d;
    }
    d.kind = DeltaSpec::Kind::Constant;
    d.a = to_double(t, "delta");
    return d;
}

WeightMode parse_weight_mode(const std::string& text) {
    const std::string t = trimmed(text);
    if (t == "sum") return WeightMode::SumType;
    if (t == "integral") return WeightMode::IntegralType;
    throw InputError("weights: expected sum|integral, got '" + t + "'");
}

MethodSpec parse_method(const std::string& text) {
    const std::string t = trimmed(text);
    MethodSpec m;
    if (t == "seq") {
        m.kind = MethodSpec::Kind::Seq;
        return m;
    }
    if (t == "exact") {
        m.kind = MethodSpec::Kind::Exact;
        return m;
    }
    if (t.rfind("vanilla:", 0) == 0) {
        m.kind = MethodSpec::Kind::Vanilla;
        m.draws = to_int(t.substr(8), "method vanilla:<B>");
        if (m.draws < 1) throw InputError("method: vanilla draw count must be at least 1");
        return m;
    }
    throw InputError("method: expected seq|vanilla:<B>|exact, got '" + t + "'");
}

BucketSet read_bucket_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open for reading");
    std::vector<Bucket> buckets;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream is(t);
        Bucket b;
        std::string rest;
        if (!(is >> b.lo >> b.hi) || (is >> rest))
            throw InputError(path + ":" + std::to_string(lineno) +
                             ": expected two numbers 'lo hi'");
        buckets.push_back(b);
    }
    if (buckets.empty()) throw InputError(path + ": no buckets found");
    return BucketSet::from_buckets(std::move(buckets));
}

BucketSet parse_bucket_spec(const std::string& text) {
    const std::string t = trimmed(text);
    if (t == "default") return BucketSet::defaults();
    if (t == "stars") return BucketSet::stars();
    return read_bucket_file(t);
}

StudyConfig parse_study_config(std::istream& in, const std::string& name) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trimmed(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw InputError(name + ":" + std::to_string(lineno) +
                             ": expected 'key = value'");
        const std::string key = trimmed(t.substr(0, eq));
        const std::string val = trimmed(t.substr(eq + 1));
        if (key.empty() || val.empty())
            throw InputError(name + ":" + std::to_string(lineno) +
                             ": empty key or value");
        if (!kv.emplace(key, val).second)
            throw InputError(name + ":" + std::to_string(lineno) +
                             ": duplicate key '" + key + "'");
    }

    static const std::vector<std::string> known = {
        "n",     "q",       "kappa",   "shape", "r",       "data_shape",
        "delta", "missingness", "gamma", "weights", "method", "eps",
        "buckets", "tau_max", "reps",   "seed"};
    for (const auto& [k, v] : kv) {
        bool ok = false;
        for (const auto& kn : known) ok = ok || kn == k;
        if (!ok) throw InputError(name + ": unknown key '" + k + "'");
    }
    auto get = [&](const std::string& key, const std::string& fallback) {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second;
    };
    const bool has_r = kv.count("r") > 0;
    const double r_val = has_r ? to_double(get("r", ""), "r") : 0.0;
    auto shape_of = [&](const std::string& text) {
        if (trimmed(text) == "pol" && has_r) return ChangeShape::polynomial(r_val);
        return parse_shape(text);
    };

    StudyConfig cfg;
    if (!kv.count("n")) throw InputError(name + ": missing required key 'n'");
    cfg.scenario.n = static_cast<int>(to_int(get("n", ""), "n"));
    cfg.q = static_cast<int>(to_int(get("q", "100"), "q"));
    cfg.scenario.kappa = to_double(get("kappa", "0.5"), "kappa");
    cfg.scenario.delta = parse_delta(get("delta", "none"), cfg.scenario.null_flag);
    cfg.missing = parse_missingness(get("missingness", "C"));
    cfg.reps = static_cast<int>(to_int(get("reps", "500"), "reps"));
    cfg.seed = static_cast<std::uint64_t>(to_int(get("seed", "1"), "seed"));

    std::vector<ChangeShape> shapes;
    for (const auto& s : split_list(get("shape", "abr"), ',')) shapes.push_back(shape_of(s));
    std::vector<WeightMode> modes;
    for (const auto& s : split_list(get("weights", "sum"), ','))
        modes.push_back(parse_weight_mode(s));
    std::vector<double> gammas;
    for (const auto& s : split_list(get("gamma", "0"), ','))
        gammas.push_back(to_double(s, "gamma"));
    for (const auto& sh : shapes)
        for (const auto& mode : modes)
            for (double g : gammas) {
                StatChoice sc;
                sc.shape = sh;
                sc.wspec.gamma = g;
                sc.wspec.mode = mode;
                sc.wspec.validate();
                cfg.stats.push_back(sc);
            }

    if (kv.count("data_shape")) {
        cfg.scenario.shape = shape_of(get("data_shape", ""));
    } else if (shapes.size() == 1) {
        cfg.scenario.shape = shapes.front();
    } else if (!cfg.scenario.null_flag) {
        throw InputError(name +
                         ": several tested shapes with a signal present; set data_shape");
    }

    cfg.method = parse_method(get("method", "seq"));
    cfg.method.eps = to_double(get("eps", "0.001"), "eps");
    cfg.method.buckets = parse_bucket_spec(get("buckets", "default"));
    cfg.method.tau_max = to_int(get("tau_max", "10000000"), "tau_max");
    if (cfg.method.tau_max < 1) throw InputError(name + ": tau_max must be at least 1");

    cfg.scenario.validate();
    if (cfg.q < 1) throw InputError(name + ": q must be at least 1");
    if (cfg.reps < 1) throw InputError(name + ": reps must be at least 1");
    return cfg;
}

StudyConfig read_study_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open for reading");
    return parse_study_config(in, path);
}

}  // namespace fchange
