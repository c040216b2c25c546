#include "shadowlab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace shadowlab {

JsonValue JsonValue::object() {
    JsonValue v;
    v.tag_ = Tag::Obj;
    return v;
}

JsonValue JsonValue::array() {
    JsonValue v;
    v.tag_ = Tag::Arr;
    return v;
}

JsonValue JsonValue::str(std::string s) {
    JsonValue v;
    v.tag_ = Tag::Str;
    v.s_ = std::move(s);
    return v;
}

JsonValue JsonValue::num(double d) {
    JsonValue v;
    v.tag_ = Tag::Num;
    v.d_ = d;
    return v;
}

JsonValue JsonValue::integer(std::int64_t i) {
    JsonValue v;
    v.tag_ = Tag::Int;
    v.i_ = i;
    return v;
}

JsonValue JsonValue::uinteger(std::uint64_t u) {
    JsonValue v;
    v.tag_ = Tag::UInt;
    v.u_ = u;
    return v;
}

JsonValue JsonValue::boolean(bool b) {
    JsonValue v;
    v.tag_ = Tag::Bool;
    v.b_ = b;
    return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
    if (tag_ != Tag::Obj) throw BadInput("set() on a non-object json value");
    obj_.emplace_back(key, std::move(v));
    return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
    if (tag_ != Tag::Arr) throw BadInput("push() on a non-array json value");
    arr_.push_back(std::move(v));
    return *this;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    out += '"';
}

void indent(std::string& out, int depth) {
    out.append(static_cast<std::size_t>(depth) * 2, ' ');
}

} // namespace

void JsonValue::write(std::string& out, int depth) const {
    switch (tag_) {
    case Tag::Str:
        append_escaped(out, s_);
        return;
    case Tag::Num:
        out += format_double(d_);
        return;
    case Tag::Int:
        out += std::to_string(i_);
        return;
    case Tag::UInt:
        out += std::to_string(u_);
        return;
    case Tag::Bool:
        out += b_ ? "true" : "false";
        return;
    case Tag::Arr: {
        if (arr_.empty()) {
            out += "[]";
            return;
        }
        bool flat = true;
        for (const JsonValue& v : arr_) flat = flat && v.scalar();
        if (flat) {
            out += '[';
            for (std::size_t i = 0; i < arr_.size(); ++i) {
                if (i) out += ", ";
                arr_[i].write(out, depth);
            }
            out += ']';
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < arr_.size(); ++i) {
            indent(out, depth + 1);
            arr_[i].write(out, depth + 1);
            if (i + 1 < arr_.size()) out += ',';
            out += '\n';
        }
        indent(out, depth);
        out += ']';
        return;
    }
    case Tag::Obj: {
        if (obj_.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        for (std::size_t i = 0; i < obj_.size(); ++i) {
            indent(out, depth + 1);
            append_escaped(out, obj_[i].first);
            out += ": ";
            obj_[i].second.write(out, depth + 1);
            if (i + 1 < obj_.size()) out += ',';
            out += '\n';
        }
        indent(out, depth);
        out += '}';
        return;
    }
    }
}

std::string JsonValue::dump() const {
    std::string out;
    write(out, 0);
    out += '\n';
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw BadInput("cannot open for writing: " + path);
    f << content;
    if (!f) throw BadInput("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw BadInput("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_double(const std::string& s, const std::string& path) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') {
        throw BadInput("bad numeric field '" + s + "' in " + path);
    }
    return v;
}

std::int64_t parse_int(const std::string& s, const std::string& path) {
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0') {
        throw BadInput("bad integer field '" + s + "' in " + path);
    }
    return v;
}

// Two-column CSV with a fixed header and consecutive ascending keys.
std::pair<std::int64_t, std::vector<double>> read_indexed_csv(const std::string& path,
                                                              const std::string& header) {
    const std::vector<std::string> lines = split_lines(read_text_file(path));
    if (lines.empty() || lines[0] != header) {
        throw BadInput("expected header '" + header + "' in " + path);
    }
    std::int64_t lo = 0;
    std::vector<double> values;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 2) throw BadInput("expected two fields per row in " + path);
        const std::int64_t k = parse_int(fields[0], path);
        if (values.empty()) {
            lo = k;
        } else if (k != lo + static_cast<std::int64_t>(values.size())) {
            throw BadInput("indices must be consecutive and ascending in " + path);
        }
        values.push_back(parse_double(fields[1], path));
    }
    if (values.empty()) throw BadInput("no data rows in " + path);
    return {lo, std::move(values)};
}

} // namespace

void write_measure_csv(const std::string& path, const MeasureSequence& seq) {
    std::string out = "k,nu\n";
    for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_double(seq.nu[static_cast<std::size_t>(k - seq.lo)]);
        out += '\n';
    }
    write_text_file(path, out);
}

MeasureSequence read_measure_csv(const std::string& path) {
    auto [lo, values] = read_indexed_csv(path, "k,nu");
    return tabulated_measures(lo, std::move(values));
}

void write_weight_csv(const std::string& path, const WeightSequence& seq) {
    std::string out = "k,w\n";
    for (std::int64_t k = seq.lo; k <= seq.hi; ++k) {
        out += std::to_string(k);
        out += ',';
        out += format_double(seq.w[static_cast<std::size_t>(k - seq.lo)]);
        out += '\n';
    }
    write_text_file(path, out);
}

WeightSequence read_weight_csv(const std::string& path) {
    auto [lo, values] = read_indexed_csv(path, "k,w");
    return tabulated_weights(lo, std::move(values));
}

void write_vector_csv(const std::string& path, const LpVector& x) {
    // Interior zeros are omitted; the window endpoints are always written so
    // the read side recovers the same [lo, hi].
    std::string out = "n,x\n";
    for (std::int64_t k = x.lo; k <= x.hi; ++k) {
        if (x.at(k) == 0.0 && k != x.lo && k != x.hi) continue;
        out += std::to_string(k);
        out += ',';
        out += format_double(x.at(k));
        out += '\n';
    }
    write_text_file(path, out);
}

LpVector read_vector_csv(const std::string& path, double p) {
    const std::vector<std::string> lines = split_lines(read_text_file(path));
    if (lines.empty() || lines[0] != "n,x") {
        throw BadInput("expected header 'n,x' in " + path);
    }
    std::vector<std::pair<std::int64_t, double>> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 2) throw BadInput("expected two fields per row in " + path);
        const std::int64_t n = parse_int(fields[0], path);
        if (!rows.empty() && n <= rows.back().first) {
            throw BadInput("indices must be ascending in " + path);
        }
        rows.emplace_back(n, parse_double(fields[1], path));
    }
    if (rows.empty()) throw BadInput("no data rows in " + path);
    LpVector x = LpVector::zeros(p, rows.front().first, rows.back().first);
    for (const auto& [n, v] : rows) x.ref(n) = v;
    return x;
}

void write_pseudo_archive(const std::string& csv_path, const std::string& json_path,
                          const PseudoTrajectory& pt) {
    std::string out = "n,coord,value\n";
    for (std::int64_t n = pt.lo; n <= pt.hi; ++n) {
        const LpVector& x = pt.at(n);
        for (std::int64_t k = x.lo; k <= x.hi; ++k) {
            out += std::to_string(n);
            out += ',';
            out += std::to_string(k);
            out += ',';
            out += format_double(x.at(k));
            out += '\n';
        }
    }
    write_text_file(csv_path, out);

    JsonValue side = JsonValue::object();
    side.set("schema", JsonValue::str("shadowlab/1"));
    side.set("delta", JsonValue::num(pt.delta));
    side.set("p", JsonValue::num(pt.p));
    JsonValue window = JsonValue::array();
    window.push(JsonValue::integer(pt.lo));
    window.push(JsonValue::integer(pt.hi));
    side.set("window", std::move(window));
    side.set("noise_seed", JsonValue::uinteger(pt.noise_seed));
    write_text_file(json_path, side.dump());
}

PseudoTrajectory read_pseudo_archive(const std::string& csv_path,
                                     const std::string& json_path) {
    const auto side = nlohmann::json::parse(read_text_file(json_path));
    if (!side.contains("delta") || !side.contains("p") || !side.contains("window")) {
        throw BadInput("pseudotrajectory sidecar is missing fields in " + json_path);
    }
    PseudoTrajectory pt;
    pt.delta = side["delta"].get<double>();
    pt.p = side["p"].get<double>();
    pt.lo = side["window"][0].get<std::int64_t>();
    pt.hi = side["window"][1].get<std::int64_t>();
    if (side.contains("noise_seed")) pt.noise_seed = side["noise_seed"].get<std::uint64_t>();
    if (pt.lo > pt.hi) throw BadInput("empty time window in " + json_path);

    struct Row {
        std::int64_t coord;
        double value;
    };
    std::vector<std::vector<Row>> rows(static_cast<std::size_t>(pt.hi - pt.lo + 1));
    const std::vector<std::string> lines = split_lines(read_text_file(csv_path));
    if (lines.empty() || lines[0] != "n,coord,value") {
        throw BadInput("expected header 'n,coord,value' in " + csv_path);
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const std::vector<std::string> fields = split_fields(lines[i]);
        if (fields.size() != 3) throw BadInput("expected three fields per row in " + csv_path);
        const std::int64_t n = parse_int(fields[0], csv_path);
        if (n < pt.lo || n > pt.hi) throw BadInput("time index outside the window in " + csv_path);
        rows[static_cast<std::size_t>(n - pt.lo)].push_back(
            {parse_int(fields[1], csv_path), parse_double(fields[2], csv_path)});
    }
    pt.xs.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].empty()) {
            throw BadInput("missing time step in " + csv_path);
        }
        std::int64_t lo = rows[i].front().coord, hi = lo;
        for (const Row& r : rows[i]) {
            lo = std::min(lo, r.coord);
            hi = std::max(hi, r.coord);
        }
        LpVector x = LpVector::zeros(pt.p, lo, hi);
        for (const Row& r : rows[i]) x.ref(r.coord) = r.value;
        pt.xs[i] = std::move(x);
    }
    return pt;
}

JsonValue rate_estimate_json(const RateEstimate& est) {
    JsonValue v = JsonValue::object();
    v.set("cond", JsonValue::str(cond_name(est.cond)));
    v.set("depth", JsonValue::integer(est.depth));
    v.set("limit", JsonValue::num(est.limit_estimate));
    v.set("windowed", JsonValue::num(est.windowed_estimate));
    v.set("exact", JsonValue::boolean(est.exact));
    v.set("boundary_dominated", JsonValue::boolean(est.boundary_dominated));
    JsonValue samples = JsonValue::array();
    for (const RateSample& s : est.samples) {
        JsonValue row = JsonValue::array();
        row.push(JsonValue::integer(s.n));
        row.push(JsonValue::num(s.r));
        samples.push(std::move(row));
    }
    v.set("samples", std::move(samples));
    return v;
}

JsonValue classification_json(const Classification& c) {
    JsonValue v = JsonValue::object();
    v.set("kind", JsonValue::str(kind_name(c.kind)));
    v.set("exact", JsonValue::boolean(c.exact));
    v.set("hyperbolic", JsonValue::boolean(c.hyperbolic));
    if (c.stable_rate) v.set("stable_rate", JsonValue::num(*c.stable_rate));
    if (c.unstable_rate) v.set("unstable_rate", JsonValue::num(*c.unstable_rate));
    v.set("reason", JsonValue::str(c.reason));
    JsonValue evidence = JsonValue::array();
    for (const RateEstimate& est : c.evidence) evidence.push(rate_estimate_json(est));
    v.set("evidence", std::move(evidence));
    return v;
}

JsonValue witness_json(const Witness& w) {
    JsonValue v = JsonValue::object();
    v.set("cond", JsonValue::str(cond_name(w.cond)));
    v.set("K", JsonValue::num(w.K));
    v.set("t", JsonValue::num(w.t));
    v.set("direction", JsonValue::str(w.le_direction ? "le" : "ge"));
    return v;
}

JsonValue distortion_json(const DistortionReport& rep) {
    JsonValue v = JsonValue::object();
    v.set("K_hat", JsonValue::num(rep.K_hat));
    v.set("H", JsonValue::num(rep.H));
    v.set("star_c", JsonValue::num(rep.star_c));
    v.set("worst_cell", JsonValue::str(rep.worst_cell));
    v.set("worst_k", JsonValue::integer(rep.worst_k));
    return v;
}

JsonValue ratio_bound_json(const RatioBoundReport& rep) {
    JsonValue v = JsonValue::object();
    v.set("bounded", JsonValue::boolean(rep.bounded));
    if (rep.bounded) {
        v.set("bound", JsonValue::num(rep.bound));
        v.set("attained_k", JsonValue::integer(rep.attained_k));
    }
    v.set("exact", JsonValue::boolean(rep.exact));
    v.set("detail", JsonValue::str(rep.detail));
    return v;
}

JsonValue shadow_report_json(const ShadowReport& rep) {
    JsonValue v = JsonValue::object();
    v.set("delta", JsonValue::num(rep.delta));
    v.set("sup_defect", JsonValue::num(rep.sup_defect));
    v.set("epsilon", JsonValue::num(rep.epsilon));
    v.set("K", JsonValue::num(rep.K));
    v.set("tail_tol", JsonValue::num(rep.tail_tol));
    v.set("certified_bound", JsonValue::num(rep.certified_bound));
    JsonValue window = JsonValue::array();
    window.push(JsonValue::integer(rep.lo));
    window.push(JsonValue::integer(rep.hi));
    v.set("window", std::move(window));
    JsonValue certified = JsonValue::array();
    certified.push(JsonValue::integer(rep.certified_lo));
    certified.push(JsonValue::integer(rep.certified_hi));
    v.set("certified_window", std::move(certified));
    JsonValue residuals = JsonValue::array();
    for (double r : rep.residuals) residuals.push(JsonValue::num(r));
    v.set("residuals", std::move(residuals));
    return v;
}

JsonValue commuting_json(const CommutingReport& rep) {
    JsonValue v = JsonValue::object();
    v.set("residual", JsonValue::num(rep.residual));
    v.set("phi_norm", JsonValue::num(rep.phi_norm));
    return v;
}

JsonValue membership_json(const MembershipReport& rep, UClass cls, double K, double t) {
    JsonValue v = JsonValue::object();
    v.set("class", JsonValue::str(uclass_name(cls)));
    v.set("K", JsonValue::num(K));
    v.set("t", JsonValue::num(t));
    v.set("member", JsonValue::boolean(rep.member));
    if (!rep.member) v.set("fail_n", JsonValue::integer(rep.fail_n));
    v.set("at_k", JsonValue::integer(rep.fail_k));
    v.set("lhs", JsonValue::num(rep.lhs));
    v.set("rhs", JsonValue::num(rep.rhs));
    return v;
}

} // namespace shadowlab
