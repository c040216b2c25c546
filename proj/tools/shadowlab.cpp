// Command-line workbench: classify weighted shifts and measure systems,
// shadow pseudotrajectories of split operators, and exercise the factor
// map between the two models. Every run prints one deterministic summary
// line and optionally writes a JSON report.

#include <cstdint>
#include <future>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shadowlab/density_rn.hpp"
#include "shadowlab/errors.hpp"
#include "shadowlab/factor_map.hpp"
#include "shadowlab/io.hpp"
#include "shadowlab/measure_core.hpp"
#include "shadowlab/shadowing_engine.hpp"
#include "shadowlab/shift_ops.hpp"

namespace {

using namespace shadowlab;

template <class T>
void maybe(const nlohmann::json& j, const char* key, T& v) {
    if (j.contains(key)) v = j.at(key).get<T>();
}

struct JobResult {
    int code = 0;
    std::string summary;
};

std::string yesno(bool b) { return b ? "yes" : "no"; }

std::string classification_summary(const std::string& cmd, const Classification& c) {
    std::string line = cmd + ": kind=" + kind_name(c.kind) + " exact=" + yesno(c.exact);
    if (c.stable_rate) line += " stable=" + format_double(*c.stable_rate);
    if (c.unstable_rate) line += " unstable=" + format_double(*c.unstable_rate);
    return line;
}

void emit_report(const std::string& out, const std::string& command, JsonValue config,
                 JsonValue result) {
    if (out.empty()) return;
    JsonValue report = JsonValue::object();
    report.set("schema", JsonValue::str("shadowlab/1"));
    report.set("command", JsonValue::str(command));
    report.set("config", std::move(config));
    report.set("result", std::move(result));
    write_text_file(out, report.dump());
}

int classification_code(const Classification& c) {
    return c.kind == Kind::Inconclusive ? 2 : 0;
}

// ---------------------------------------------------------------------------
// classify-density

struct DensityParams {
    std::string family = "laplace";
    int sign = +1;
    double b = 1.0;
    double lambda = 0.0;
    std::string grid; // "x,h" CSV for the tabulated family
    int depth = 64;
    double margin = 0.05;
    std::int64_t window = 256;
    bool swap_envelopes = false;
    bool adaptive = false;
    std::string out;
    std::string config;

    void apply(const nlohmann::json& j) {
        maybe(j, "family", family);
        maybe(j, "sign", sign);
        maybe(j, "b", b);
        maybe(j, "lambda", lambda);
        maybe(j, "grid", grid);
        maybe(j, "depth", depth);
        maybe(j, "margin", margin);
        maybe(j, "window", window);
        maybe(j, "swap_envelopes", swap_envelopes);
        maybe(j, "adaptive", adaptive);
        maybe(j, "out", out);
    }
};

std::pair<std::vector<double>, std::vector<double>> read_grid_csv(const std::string& path) {
    std::vector<double> xs, hs;
    const std::string text = read_text_file(path);
    std::size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (first) {
            if (line != "x,h") throw BadInput("expected header 'x,h' in " + path);
            first = false;
            continue;
        }
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw BadInput("expected two fields per row in " + path);
        xs.push_back(std::stod(line.substr(0, comma)));
        hs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.empty()) throw BadInput("no data rows in " + path);
    return {std::move(xs), std::move(hs)};
}

DensityModel parse_density_model(const std::string& family, int sign, double b,
                                 double lambda, const std::string& grid) {
    DensityModel model;
    if (family == "constant") {
        model.family = DensityFamily::Constant;
    } else if (family == "exponential") {
        model.family = DensityFamily::Exponential;
    } else if (family == "laplace") {
        model.family = DensityFamily::Laplace;
    } else if (family == "cauchy") {
        model.family = DensityFamily::Cauchy;
    } else if (family == "gaussian") {
        model.family = DensityFamily::Gaussian;
    } else if (family == "tabulated") {
        model.family = DensityFamily::Tabulated;
        if (grid.empty()) throw BadInput("tabulated density needs --grid");
        std::tie(model.xs, model.hs) = read_grid_csv(grid);
    } else {
        throw BadInput("unknown density family: " + family);
    }
    model.sign = sign;
    model.b = b;
    model.lambda = lambda;
    validate_density(model);
    return model;
}

JsonValue density_config_json(const DensityParams& pr) {
    JsonValue cfg = JsonValue::object();
    cfg.set("family", JsonValue::str(pr.family));
    if (pr.family == "exponential") cfg.set("sign", JsonValue::integer(pr.sign));
    if (pr.family == "laplace") {
        cfg.set("b", JsonValue::num(pr.b));
        cfg.set("lambda", JsonValue::num(pr.lambda));
    }
    if (!pr.grid.empty()) cfg.set("grid", JsonValue::str(pr.grid));
    cfg.set("depth", JsonValue::integer(pr.depth));
    cfg.set("margin", JsonValue::num(pr.margin));
    cfg.set("window", JsonValue::integer(pr.window));
    cfg.set("swap_envelopes", JsonValue::boolean(pr.swap_envelopes));
    cfg.set("adaptive", JsonValue::boolean(pr.adaptive));
    return cfg;
}

JobResult run_classify_density(const DensityParams& pr) {
    const DensityModel model =
        parse_density_model(pr.family, pr.sign, pr.b, pr.lambda, pr.grid);
    DensityClassifyOptions opts;
    opts.depth = pr.depth;
    opts.margin = pr.margin;
    opts.window = pr.window;
    opts.swap_envelopes = pr.swap_envelopes;
    opts.mode = pr.adaptive ? EnvelopeMode::AdaptiveGrid : EnvelopeMode::ClosedForm;
    const Classification c = classify_density(model, opts);
    const RatioBoundReport rb = check_bounded_ratio(model);

    JsonValue result = JsonValue::object();
    result.set("classification", classification_json(c));
    result.set("ratio_bound", ratio_bound_json(rb));
    emit_report(pr.out, "classify-density", density_config_json(pr), std::move(result));

    JobResult r;
    r.code = classification_code(c);
    r.summary = classification_summary("classify-density", c) +
                " family=" + pr.family + " ratio_bounded=" + yesno(rb.bounded);
    return r;
}

// ---------------------------------------------------------------------------
// classify-measures

struct MeasuresParams {
    std::string csv;
    std::string generator; // "geometric" | "expabs"
    double r = 0.5;
    double c = 2.0;
    double nu0 = 1.0;
    std::int64_t lo = -64;
    std::int64_t hi = 64;
    int depth = 64;
    double margin = 0.05;
    std::string out;
    std::string config;

    void apply(const nlohmann::json& j) {
        maybe(j, "csv", csv);
        maybe(j, "generator", generator);
        maybe(j, "r", r);
        maybe(j, "c", c);
        maybe(j, "nu0", nu0);
        maybe(j, "lo", lo);
        maybe(j, "hi", hi);
        maybe(j, "depth", depth);
        maybe(j, "margin", margin);
        maybe(j, "out", out);
    }
};

MeasureSequence build_measures(const MeasuresParams& pr) {
    if (!pr.csv.empty()) {
        MeasureSequence seq = read_measure_csv(pr.csv);
        validate_measure_sequence(seq);
        return seq;
    }
    if (pr.generator == "geometric") {
        return generated_measures(geometric_generator(pr.r, pr.nu0), pr.lo, pr.hi);
    }
    if (pr.generator == "expabs") {
        return generated_measures(expabs_generator(pr.c, pr.nu0), pr.lo, pr.hi);
    }
    throw BadInput("need --csv or --generator geometric|expabs");
}

JobResult run_classify_measures(const MeasuresParams& pr) {
    const MeasureSequence seq = build_measures(pr);
    const Classification c = classify_measures(seq, {pr.depth, pr.margin});

    JsonValue cfg = JsonValue::object();
    if (!pr.csv.empty()) {
        cfg.set("csv", JsonValue::str(pr.csv));
    } else {
        cfg.set("generator", JsonValue::str(pr.generator));
        if (pr.generator == "geometric") cfg.set("r", JsonValue::num(pr.r));
        if (pr.generator == "expabs") cfg.set("c", JsonValue::num(pr.c));
        cfg.set("nu0", JsonValue::num(pr.nu0));
        cfg.set("lo", JsonValue::integer(pr.lo));
        cfg.set("hi", JsonValue::integer(pr.hi));
    }
    cfg.set("depth", JsonValue::integer(pr.depth));
    cfg.set("margin", JsonValue::num(pr.margin));

    JsonValue result = JsonValue::object();
    result.set("classification", classification_json(c));
    emit_report(pr.out, "classify-measures", std::move(cfg), std::move(result));

    JobResult r;
    r.code = classification_code(c);
    r.summary = classification_summary("classify-measures", c);
    return r;
}

// ---------------------------------------------------------------------------
// classify-shift

struct ShiftParams {
    std::string csv;          // tabulated weights
    double constant = 0.0;    // constant weights when nonzero
    std::string weights;      // "neg=0.5,pos=2.0"
    std::string measures_csv; // derive weights from cell masses
    double p = 2.0;
    std::int64_t lo = -64;
    std::int64_t hi = 64;
    int depth = 64;
    double margin = 0.05;
    std::string out;
    std::string config;

    void apply(const nlohmann::json& j) {
        maybe(j, "csv", csv);
        maybe(j, "constant", constant);
        maybe(j, "weights", weights);
        maybe(j, "measures_csv", measures_csv);
        maybe(j, "p", p);
        maybe(j, "lo", lo);
        maybe(j, "hi", hi);
        maybe(j, "depth", depth);
        maybe(j, "margin", margin);
        maybe(j, "out", out);
    }
};

std::pair<double, double> parse_two_sided(const std::string& spec) {
    double wneg = 0.0, wpos = 0.0;
    bool have_neg = false, have_pos = false;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t end = spec.find(',', pos);
        if (end == std::string::npos) end = spec.size();
        const std::string part = spec.substr(pos, end - pos);
        pos = end + 1;
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos) throw BadInput("expected key=value in weight spec: " + part);
        const std::string key = part.substr(0, eq);
        const double value = std::stod(part.substr(eq + 1));
        if (key == "neg") {
            wneg = value;
            have_neg = true;
        } else if (key == "pos") {
            wpos = value;
            have_pos = true;
        } else {
            throw BadInput("unknown weight spec key: " + key);
        }
    }
    if (!have_neg || !have_pos) throw BadInput("weight spec needs both neg= and pos=");
    return {wneg, wpos};
}

WeightSequence build_weights(const ShiftParams& pr) {
    int sources = 0;
    sources += !pr.csv.empty();
    sources += pr.constant != 0.0;
    sources += !pr.weights.empty();
    sources += !pr.measures_csv.empty();
    if (sources != 1) {
        throw BadInput("need exactly one of --csv, --constant, --weights, --measures-csv");
    }
    if (!pr.csv.empty()) {
        WeightSequence w = read_weight_csv(pr.csv);
        validate_weights(w);
        return w;
    }
    if (pr.constant != 0.0) return constant_weights(pr.constant, pr.lo, pr.hi);
    if (!pr.weights.empty()) {
        const auto [wneg, wpos] = parse_two_sided(pr.weights);
        return two_sided_weights(wneg, wpos, pr.lo, pr.hi);
    }
    MeasureSequence nu = read_measure_csv(pr.measures_csv);
    validate_measure_sequence(nu);
    return weights_from_measures(nu, pr.p);
}

JobResult run_classify_shift(const ShiftParams& pr) {
    const WeightSequence w = build_weights(pr);
    const Classification c = classify_shift(w, {pr.depth, pr.margin});

    JsonValue cfg = JsonValue::object();
    if (!pr.csv.empty()) cfg.set("csv", JsonValue::str(pr.csv));
    if (pr.constant != 0.0) cfg.set("constant", JsonValue::num(pr.constant));
    if (!pr.weights.empty()) cfg.set("weights", JsonValue::str(pr.weights));
    if (!pr.measures_csv.empty()) {
        cfg.set("measures_csv", JsonValue::str(pr.measures_csv));
        cfg.set("p", JsonValue::num(pr.p));
    }
    cfg.set("depth", JsonValue::integer(pr.depth));
    cfg.set("margin", JsonValue::num(pr.margin));

    JsonValue result = JsonValue::object();
    result.set("classification", classification_json(c));
    emit_report(pr.out, "classify-shift", std::move(cfg), std::move(result));

    JobResult r;
    r.code = classification_code(c);
    r.summary = classification_summary("classify-shift", c);
    return r;
}

// ---------------------------------------------------------------------------
// shadow

struct ShadowParams {
    std::string weights = "neg=0.5,pos=2.0";
    double p = 2.0;
    double delta = 0.01;
    std::int64_t steps = 50;
    std::uint64_t noise_seed = 1;
    double tail_tol = 1e-10;
    std::string x0;           // starting vector CSV, unit at 0 when empty
    std::string archive;      // write <base>.csv and <base>.json
    std::string from_archive; // read the pseudotrajectory instead
    std::string out;
    std::string config;

    void apply(const nlohmann::json& j) {
        maybe(j, "weights", weights);
        maybe(j, "p", p);
        maybe(j, "delta", delta);
        maybe(j, "steps", steps);
        maybe(j, "noise_seed", noise_seed);
        maybe(j, "tail_tol", tail_tol);
        maybe(j, "x0", x0);
        maybe(j, "archive", archive);
        maybe(j, "from_archive", from_archive);
        maybe(j, "out", out);
    }
};

JobResult run_shadow(const ShadowParams& pr) {
    const auto [wneg, wpos] = parse_two_sided(pr.weights);
    const std::int64_t span = pr.steps + 16;
    const WeightSequence w = two_sided_weights(wneg, wpos, -span, span);
    const Classification c = classify_shift(w);
    const Splitting split = shift_splitting(c);
    const SplitOperator T = make_split_operator(w, split);

    PseudoTrajectory pt;
    if (!pr.from_archive.empty()) {
        pt = read_pseudo_archive(pr.from_archive + ".csv", pr.from_archive + ".json");
    } else {
        const LpVector x0 =
            pr.x0.empty() ? LpVector::unit(pr.p, 0) : read_vector_csv(pr.x0, pr.p);
        pt = make_pseudotrajectory(T, x0, pr.delta, -pr.steps, pr.steps, pr.noise_seed);
    }
    if (!pr.archive.empty()) {
        write_pseudo_archive(pr.archive + ".csv", pr.archive + ".json", pt);
    }

    const ShadowReport rep = shadow(T, pt, pr.tail_tol);
    const bool within = rep.epsilon <= rep.certified_bound;

    JsonValue cfg = JsonValue::object();
    cfg.set("weights", JsonValue::str(pr.weights));
    cfg.set("p", JsonValue::num(pt.p));
    cfg.set("delta", JsonValue::num(pt.delta));
    cfg.set("steps", JsonValue::integer(pr.steps));
    cfg.set("noise_seed", JsonValue::uinteger(pt.noise_seed));
    cfg.set("tail_tol", JsonValue::num(pr.tail_tol));

    JsonValue result = JsonValue::object();
    result.set("classification", classification_json(c));
    result.set("shadow", shadow_report_json(rep));
    emit_report(pr.out, "shadow", std::move(cfg), std::move(result));

    JobResult r;
    r.code = within ? 0 : 1;
    r.summary = "shadow: kind=" + std::string(kind_name(c.kind)) +
                " K=" + format_double(rep.K) + " delta=" + format_double(rep.delta) +
                " epsilon=" + format_double(rep.epsilon) +
                " bound=" + format_double(rep.certified_bound) +
                " certified=[" + std::to_string(rep.certified_lo) + "," +
                std::to_string(rep.certified_hi) + "]" + " within=" + yesno(within);
    return r;
}

// ---------------------------------------------------------------------------
// partition and function inputs, shared by factor-check and membership

struct PartitionParams {
    std::string partition;
    std::string fn;
    std::string out;
    std::string config;

    void apply(const nlohmann::json& j) {
        maybe(j, "partition", partition);
        maybe(j, "fn", fn);
        maybe(j, "out", out);
    }
};

std::shared_ptr<SubCellMeasures> load_partition(const std::string& path) {
    if (path.empty()) throw BadInput("need --partition");
    const auto j = nlohmann::json::parse(read_text_file(path));
    const double p = j.value("p", 2.0);
    if (!j.contains("measures") || !j.contains("cells")) {
        throw BadInput("partition file needs 'measures' and 'cells' in " + path);
    }
    const auto& jm = j.at("measures");
    const std::string kind = jm.value("kind", "");
    const std::int64_t window = jm.value("window", std::int64_t{32});

    const auto& jcells = j.at("cells");
    if (!jcells.is_array() || jcells.empty()) {
        throw BadInput("partition cells must be a nonempty array in " + path);
    }
    const bool by_interval = jcells.front().contains("interval");

    SubCellMeasures sc;
    if (by_interval) {
        if (kind != "density") {
            throw BadInput("interval cells need a density measure model in " + path);
        }
        const DensityModel model = parse_density_model(
            jm.value("family", "laplace"), jm.value("sign", +1), jm.value("b", 1.0),
            jm.value("lambda", 0.0), jm.value("grid", ""));
        std::vector<std::pair<std::string, std::pair<double, double>>> intervals;
        for (const auto& jc : jcells) {
            intervals.push_back({jc.at("id").get<std::string>(),
                                 {jc.at("interval")[0].get<double>(),
                                  jc.at("interval")[1].get<double>()}});
        }
        sc = density_cells(model, intervals, -window, window, p);
    } else {
        MeasureSequence nu;
        if (kind == "density") {
            const DensityModel model = parse_density_model(
                jm.value("family", "laplace"), jm.value("sign", +1), jm.value("b", 1.0),
                jm.value("lambda", 0.0), jm.value("grid", ""));
            nu = measures_from_density(model, -window, window);
        } else if (kind == "geometric") {
            nu = generated_measures(
                geometric_generator(jm.value("r", 0.5), jm.value("nu0", 1.0)), -window,
                window);
        } else if (kind == "expabs") {
            nu = generated_measures(
                expabs_generator(jm.value("c", 2.0), jm.value("nu0", 1.0)), -window,
                window);
        } else if (kind == "csv") {
            nu = read_measure_csv(jm.at("path").get<std::string>());
            validate_measure_sequence(nu);
        } else {
            throw BadInput("unknown measure kind '" + kind + "' in " + path);
        }
        std::vector<std::pair<std::string, double>> thetas;
        for (const auto& jc : jcells) {
            thetas.push_back({jc.at("id").get<std::string>(), jc.at("theta").get<double>()});
        }
        sc = proportional_cells(p, nu, thetas);
    }
    validate_partition(sc);
    return std::make_shared<SubCellMeasures>(std::move(sc));
}

SimpleFunction load_fn(const std::string& path, std::shared_ptr<const SubCellMeasures> ctx) {
    if (path.empty()) throw BadInput("need --fn");
    const auto j = nlohmann::json::parse(read_text_file(path));
    if (!j.contains("pieces")) throw BadInput("function file needs 'pieces' in " + path);
    std::vector<Piece> pieces;
    for (const auto& jp : j.at("pieces")) {
        Piece piece;
        piece.k = jp.at("k").get<std::int64_t>();
        piece.a = jp.at("a").get<double>();
        const std::string id = jp.at("cell").get<std::string>();
        bool found = false;
        for (std::size_t i = 0; i < ctx->cells.size(); ++i) {
            if (ctx->cells[i].id == id) {
                piece.cell = static_cast<std::uint32_t>(i);
                found = true;
                break;
            }
        }
        if (!found) throw BadInput("unknown cell id '" + id + "' in " + path);
        pieces.push_back(piece);
    }
    return make_simple(std::move(ctx), std::move(pieces));
}

JsonValue partition_config_json(const PartitionParams& pr) {
    JsonValue cfg = JsonValue::object();
    cfg.set("partition", JsonValue::str(pr.partition));
    cfg.set("fn", JsonValue::str(pr.fn));
    return cfg;
}

JobResult run_factor_check(const PartitionParams& pr) {
    const std::shared_ptr<SubCellMeasures> ctx = load_partition(pr.partition);
    const SimpleFunction phi = load_fn(pr.fn, ctx);
    const DistortionReport distortion = check_bounded_distortion(*ctx);
    const WeightSequence w = weights_from_measures(ctx->nu, ctx->space.p);
    const CommutingReport commuting = check_commuting(phi, w);

    const LpVector x = project_pi(phi);
    const double phi_norm = sf_norm(phi);
    const double pi_norm = x.norm();
    const double norm_bound = std::pow(distortion.H, 1.0 / ctx->space.p) * phi_norm;
    const SimpleFunction sel = selector(ctx, x);
    const double selector_gap = std::abs(sf_norm(sel) - pi_norm);
    const double roundtrip = lp_dist(project_pi(sel), x);

    JsonValue norms = JsonValue::object();
    norms.set("phi", JsonValue::num(phi_norm));
    norms.set("pi_phi", JsonValue::num(pi_norm));
    norms.set("bound", JsonValue::num(norm_bound));
    norms.set("selector_gap", JsonValue::num(selector_gap));
    norms.set("roundtrip", JsonValue::num(roundtrip));

    JsonValue result = JsonValue::object();
    result.set("distortion", distortion_json(distortion));
    result.set("commuting", commuting_json(commuting));
    result.set("norms", std::move(norms));
    emit_report(pr.out, "factor-check", partition_config_json(pr), std::move(result));

    JobResult r;
    const bool ok = commuting.residual <= 1e-9 * std::max(1.0, commuting.phi_norm) &&
                    pi_norm <= norm_bound * (1.0 + 1e-12) && selector_gap <= 1e-12 &&
                    roundtrip <= 1e-12;
    r.code = ok ? 0 : 1;
    r.summary = "factor-check: residual=" + format_double(commuting.residual) +
                " phi_norm=" + format_double(phi_norm) +
                " pi_norm=" + format_double(pi_norm) + " H=" +
                format_double(distortion.H) + " ok=" + yesno(ok);
    return r;
}

// ---------------------------------------------------------------------------
// membership

struct MembershipParams {
    PartitionParams base;
    std::string cls = "UC";
    double K = 1.0;
    double t = 0.5;
    int depth = 32;

    void apply(const nlohmann::json& j) {
        base.apply(j);
        maybe(j, "class", cls);
        maybe(j, "K", K);
        maybe(j, "t", t);
        maybe(j, "depth", depth);
    }
};

UClass parse_uclass(const std::string& s) {
    if (s == "UC") return UClass::UC;
    if (s == "UD") return UClass::UD;
    if (s == "UGH+") return UClass::UGHplus;
    if (s == "UGH-") return UClass::UGHminus;
    throw BadInput("unknown membership class: " + s);
}

JobResult run_membership(const MembershipParams& pr) {
    const std::shared_ptr<SubCellMeasures> ctx = load_partition(pr.base.partition);
    const SimpleFunction phi = load_fn(pr.base.fn, ctx);
    const UClass cls = parse_uclass(pr.cls);
    const MembershipReport rep = class_membership(phi, cls, pr.K, pr.t, pr.depth);

    JsonValue cfg = partition_config_json(pr.base);
    cfg.set("class", JsonValue::str(pr.cls));
    cfg.set("K", JsonValue::num(pr.K));
    cfg.set("t", JsonValue::num(pr.t));
    cfg.set("depth", JsonValue::integer(pr.depth));

    JsonValue result = JsonValue::object();
    result.set("membership", membership_json(rep, cls, pr.K, pr.t));
    emit_report(pr.base.out, "membership", std::move(cfg), std::move(result));

    JobResult r;
    r.summary = "membership: class=" + pr.cls + " K=" + format_double(pr.K) +
                " t=" + format_double(pr.t) + " member=" + yesno(rep.member);
    if (!rep.member) {
        r.summary += " fail_n=" + std::to_string(rep.fail_n) +
                     " at_k=" + std::to_string(rep.fail_k);
    }
    return r;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepParams {
    int jobs = 2;
    std::vector<std::string> files;
};

JobResult run_job_file(const std::string& path) {
    try {
        const auto j = nlohmann::json::parse(read_text_file(path));
        const std::string command = j.value("command", "");
        if (command == "classify-density") {
            DensityParams pr;
            pr.apply(j);
            return run_classify_density(pr);
        }
        if (command == "classify-measures") {
            MeasuresParams pr;
            pr.apply(j);
            return run_classify_measures(pr);
        }
        if (command == "classify-shift") {
            ShiftParams pr;
            pr.apply(j);
            return run_classify_shift(pr);
        }
        if (command == "shadow") {
            ShadowParams pr;
            pr.apply(j);
            return run_shadow(pr);
        }
        if (command == "factor-check") {
            PartitionParams pr;
            pr.apply(j);
            return run_factor_check(pr);
        }
        if (command == "membership") {
            MembershipParams pr;
            pr.apply(j);
            return run_membership(pr);
        }
        throw BadInput("job file needs a known 'command': " + path);
    } catch (const std::exception& e) {
        return {1, std::string("error: ") + e.what()};
    }
}

JobResult run_sweep(const SweepParams& pr) {
    if (pr.files.empty()) throw BadInput("sweep needs at least one job file");
    const int jobs = std::max(1, pr.jobs);
    std::vector<JobResult> results(pr.files.size());
    for (std::size_t base = 0; base < pr.files.size(); base += jobs) {
        const std::size_t end = std::min(base + jobs, pr.files.size());
        std::vector<std::future<JobResult>> batch;
        for (std::size_t i = base; i < end; ++i) {
            batch.push_back(std::async(std::launch::async, run_job_file, pr.files[i]));
        }
        for (std::size_t i = base; i < end; ++i) {
            results[i] = batch[i - base].get();
        }
    }
    int worst = 0;
    std::string lines;
    for (std::size_t i = 0; i < results.size(); ++i) {
        lines += "sweep[" + std::to_string(i) + "] " + pr.files[i] + ": " +
                 results[i].summary + "\n";
        if (results[i].code == 1) {
            worst = 1;
        } else if (results[i].code == 2 && worst == 0) {
            worst = 2;
        }
    }
    JobResult r;
    r.code = worst;
    r.summary = lines + "sweep: jobs=" + std::to_string(results.size()) +
                " worst=" + std::to_string(worst);
    return r;
}

// ---------------------------------------------------------------------------

// Applies a --config JSON file to the matching params struct before CLI11
// parses the command line, so explicitly passed flags win.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighted shift and measure system classification workbench"};
    app.require_subcommand(1);

    DensityParams density;
    MeasuresParams measures;
    ShiftParams shift;
    ShadowParams shadowp;
    PartitionParams factor;
    MembershipParams member;
    SweepParams sweep;

    const std::string cfg_path = find_config_path(argc, argv);
    if (!cfg_path.empty() && argc > 1) {
        try {
            const auto cfg = nlohmann::json::parse(shadowlab::read_text_file(cfg_path));
            const std::string sub = argv[1];
            if (sub == "classify-density") density.apply(cfg);
            if (sub == "classify-measures") measures.apply(cfg);
            if (sub == "classify-shift") shift.apply(cfg);
            if (sub == "shadow") shadowp.apply(cfg);
            if (sub == "factor-check") factor.apply(cfg);
            if (sub == "membership") member.apply(cfg);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }

    auto* cd = app.add_subcommand("classify-density",
                                  "classify the composition operator of a density model");
    cd->add_option("--family", density.family,
                   "constant|exponential|laplace|cauchy|gaussian|tabulated");
    cd->add_option("--sign", density.sign, "exponential sign, +1 or -1");
    cd->add_option("--b", density.b, "scale of the laplace family");
    cd->add_option("--lambda", density.lambda, "location of the laplace family");
    cd->add_option("--grid", density.grid, "x,h CSV for the tabulated family");
    cd->add_option("--depth", density.depth, "condition evaluation depth");
    cd->add_option("--margin", density.margin, "strictness margin for windowed estimates");
    cd->add_option("--window", density.window, "envelope window half width");
    cd->add_flag("--swap-envelopes", density.swap_envelopes,
                 "use the optimistic envelope orientation");
    cd->add_flag("--adaptive", density.adaptive, "adaptive-grid envelopes");
    cd->add_option("--out", density.out, "report JSON path");
    cd->add_option("--config", density.config, "JSON file with defaults for these flags");

    auto* cm = app.add_subcommand("classify-measures",
                                  "classify from a cell mass sequence");
    cm->add_option("--csv", measures.csv, "k,nu CSV of cell masses");
    cm->add_option("--generator", measures.generator, "geometric|expabs");
    cm->add_option("--r", measures.r, "geometric ratio");
    cm->add_option("--c", measures.c, "expabs decay base");
    cm->add_option("--nu0", measures.nu0, "mass at k = 0");
    cm->add_option("--lo", measures.lo, "window lower end");
    cm->add_option("--hi", measures.hi, "window upper end");
    cm->add_option("--depth", measures.depth, "condition evaluation depth");
    cm->add_option("--margin", measures.margin, "strictness margin");
    cm->add_option("--out", measures.out, "report JSON path");
    cm->add_option("--config", measures.config, "JSON file with defaults for these flags");

    auto* cs = app.add_subcommand("classify-shift", "classify a weighted backward shift");
    cs->add_option("--csv", shift.csv, "k,w CSV of weights");
    cs->add_option("--constant", shift.constant, "constant weight value");
    cs->add_option("--weights", shift.weights, "two-sided spec neg=A,pos=B");
    cs->add_option("--measures-csv", shift.measures_csv,
                   "derive weights from this k,nu CSV");
    cs->add_option("--p", shift.p, "space exponent for derived weights");
    cs->add_option("--lo", shift.lo, "window lower end");
    cs->add_option("--hi", shift.hi, "window upper end");
    cs->add_option("--depth", shift.depth, "condition evaluation depth");
    cs->add_option("--margin", shift.margin, "strictness margin");
    cs->add_option("--out", shift.out, "report JSON path");
    cs->add_option("--config", shift.config, "JSON file with defaults for these flags");

    auto* sh = app.add_subcommand("shadow", "track a pseudotrajectory of a split shift");
    sh->add_option("--weights", shadowp.weights, "two-sided spec neg=A,pos=B");
    sh->add_option("--p", shadowp.p, "space exponent");
    sh->add_option("--delta", shadowp.delta, "defect size per transition");
    sh->add_option("--steps", shadowp.steps, "time window half width");
    sh->add_option("--noise-seed", shadowp.noise_seed, "defect stream seed");
    sh->add_option("--tail-tol", shadowp.tail_tol, "geometric tail tolerance");
    sh->add_option("--x0", shadowp.x0, "n,x CSV starting vector, unit at 0 by default");
    sh->add_option("--archive", shadowp.archive,
                   "write the pseudotrajectory to <base>.csv and <base>.json");
    sh->add_option("--from-archive", shadowp.from_archive,
                   "read the pseudotrajectory from <base>.csv and <base>.json");
    sh->add_option("--out", shadowp.out, "report JSON path");
    sh->add_option("--config", shadowp.config, "JSON file with defaults for these flags");

    auto* fc = app.add_subcommand("factor-check",
                                  "distortion, commuting, and factor norm checks");
    fc->add_option("--partition", factor.partition, "partition JSON file");
    fc->add_option("--fn", factor.fn, "simple function JSON file");
    fc->add_option("--out", factor.out, "report JSON path");
    fc->add_option("--config", factor.config, "JSON file with defaults for these flags");

    auto* mb = app.add_subcommand("membership", "uniform growth class membership");
    mb->add_option("--partition", member.base.partition, "partition JSON file");
    mb->add_option("--fn", member.base.fn, "simple function JSON file");
    mb->add_option("--class", member.cls, "UC|UD|UGH+|UGH-");
    mb->add_option("--K", member.K, "membership constant");
    mb->add_option("--t", member.t, "membership rate");
    mb->add_option("--depth", member.depth, "depths checked");
    mb->add_option("--out", member.base.out, "report JSON path");
    mb->add_option("--config", member.base.config, "JSON file with defaults for these flags");

    auto* sw = app.add_subcommand("sweep", "run job JSON files through a worker pool");
    sw->add_option("--jobs", sweep.jobs, "parallel workers");
    sw->add_option("files", sweep.files, "job JSON files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        JobResult result;
        if (app.got_subcommand(cd)) result = run_classify_density(density);
        if (app.got_subcommand(cm)) result = run_classify_measures(measures);
        if (app.got_subcommand(cs)) result = run_classify_shift(shift);
        if (app.got_subcommand(sh)) result = run_shadow(shadowp);
        if (app.got_subcommand(fc)) result = run_factor_check(factor);
        if (app.got_subcommand(mb)) result = run_membership(member);
        if (app.got_subcommand(sw)) result = run_sweep(sweep);
        std::cout << result.summary << "\n";
        return result.code;
    } catch (const shadowlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
