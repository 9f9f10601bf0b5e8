// Copyright (c) 2026 The fewspace Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <charconv>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fewspace/fewspace.hpp"

namespace fewspace::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kTasks[] = {"expect", "mc", "mixed", "bkk", "grid", "weights"};

/// Command-line overrides. Unset fields fall back to the document, then to
/// the defaults in Resolved.
struct Settings {
    std::optional<std::string> task;
    std::optional<double> tol;
    std::optional<std::int64_t> samples;
    std::optional<std::uint64_t> seed;
    std::optional<double> radius;
    std::optional<int> threads;
    std::optional<std::int64_t> budget;
    std::optional<int> truncation;
};

struct Resolved {
    std::string task;
    double tol = 1e-7;
    std::int64_t budget = 10'000'000;
    int threads = 1;
    std::int64_t samples = 20'000;
    std::uint64_t seed = 0;
    double radius = 1.0;
    int truncation = 64;
};

/// Result of one invocation: a structured record, or a delimited table for
/// grid and weights.
struct Output {
    json record;
    std::string table;
    bool tabular = false;

    std::string text() const { return tabular ? table : record.dump(2) + "\n"; }
};

/// Shortest round-trip decimal form.
inline std::string format_number(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

namespace detail {

inline std::string child(const std::string& ptr, std::string_view key) {
    std::string out = ptr + "/";
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

inline std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

[[noreturn]] inline void fail(const std::string& ptr, const std::string& what) {
    throw ParseError((ptr.empty() ? std::string("(document)") : ptr) + ": " + what, ptr);
}

inline void require_object(const json& j, const std::string& ptr) {
    if (!j.is_object()) fail(ptr, "expected an object");
}

inline void allow_keys(const json& j, const std::string& ptr, std::initializer_list<std::string_view> allowed) {
    require_object(j, ptr);
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || key == a;
        if (!ok) fail(child(ptr, key), "unknown key \"" + key + "\"");
    }
}

inline const json& required(const json& j, const std::string& ptr, const char* key) {
    if (!j.contains(key)) fail(ptr, std::string("missing key \"") + key + "\"");
    return j.at(key);
}

inline double get_real(const json& j, const std::string& ptr) {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
}

inline std::int64_t get_int(const json& j, const std::string& ptr) {
    if (j.is_number_unsigned()) {
        if (j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) fail(ptr, "integer out of range");
        return static_cast<std::int64_t>(j.get<std::uint64_t>());
    }
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    return j.get<std::int64_t>();
}

inline int get_small_int(const json& j, const std::string& ptr) {
    const std::int64_t v = get_int(j, ptr);
    if (v < INT32_MIN || v > INT32_MAX) fail(ptr, "integer out of range");
    return static_cast<int>(v);
}

inline std::uint64_t get_seed(const json& j, const std::string& ptr) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
    fail(ptr, "expected a nonnegative integer");
}

/// A number, or {"re": x, "im": y} with either part optional.
inline cplx get_complex(const json& j, const std::string& ptr) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_object()) fail(ptr, "expected a number or {\"re\", \"im\"}");
    allow_keys(j, ptr, {"re", "im"});
    const double re = j.contains("re") ? get_real(j.at("re"), child(ptr, "re")) : 0.0;
    const double im = j.contains("im") ? get_real(j.at("im"), child(ptr, "im")) : 0.0;
    return {re, im};
}

/// An integer (one variable) or an integer array.
inline Exponent get_exponent(const json& j, const std::string& ptr) {
    if (j.is_number()) return {get_small_int(j, ptr)};
    if (!j.is_array() || j.empty()) fail(ptr, "expected an integer or a nonempty integer array");
    Exponent a;
    for (std::size_t i = 0; i < j.size(); ++i) a.push_back(get_small_int(j[i], child(ptr, i)));
    return a;
}

inline const json& array_of(const json& j, const std::string& ptr, std::size_t min_size) {
    if (!j.is_array()) fail(ptr, "expected an array");
    if (j.size() < min_size) fail(ptr, "expected at least " + std::to_string(min_size) + " entries");
    return j;
}

template <class F>
auto wrap(const std::string& ptr, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        fail(ptr, e.what());
    }
}

inline SupportWeights parse_terms(const json& j, const std::string& ptr) {
    allow_keys(j, ptr, {"terms"});
    const std::string tp = child(ptr, "terms");
    const json& terms = array_of(required(j, ptr, "terms"), tp, 1);
    std::vector<std::pair<Exponent, double>> pairs;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string ip = child(tp, i);
        allow_keys(terms[i], ip, {"exponent", "weight"});
        Exponent a = get_exponent(required(terms[i], ip, "exponent"), child(ip, "exponent"));
        const double w = terms[i].contains("weight") ? get_real(terms[i].at("weight"), child(ip, "weight")) : 1.0;
        if (!pairs.empty() && a.size() != pairs.front().first.size())
            fail(child(ip, "exponent"), "exponent length differs from the first term");
        pairs.emplace_back(std::move(a), w);
    }
    const int n = static_cast<int>(pairs.front().first.size());
    return wrap(ptr, [&] { return SupportWeights::from_pairs(n, pairs); });
}

} // namespace detail

/// Space constructor: a single-key object naming the variant.
///   {"Weyl": {"degree": d, "nvars": n}}
///   {"ExpSpan": {"frequencies": [b, ...]}}        b: complex or complex array
///   {"SparseLaurent": {"terms": [{"exponent": a, "weight": c}, ...]}}
///   {"HyperbolicGAF": {}}, {"GEF": {}}
///   {"Product": [s, s, ...]}, {"Power": {"base": s, "exponent": k}}, {"Tensor": [s, ...]}
inline SpaceExpr parse_space(const json& j, const std::string& ptr = "") {
    using namespace detail;
    require_object(j, ptr);
    if (j.size() != 1) fail(ptr, "a space is an object with exactly one constructor key");
    const std::string name = j.begin().key();
    const json& body = j.begin().value();
    const std::string bp = child(ptr, name);

    if (name == "Weyl") {
        allow_keys(body, bp, {"degree", "nvars"});
        const int d = get_small_int(required(body, bp, "degree"), child(bp, "degree"));
        const int n = body.contains("nvars") ? get_small_int(body.at("nvars"), child(bp, "nvars")) : 1;
        return wrap(bp, [&] { return weyl(d, n); });
    }
    if (name == "ExpSpan") {
        allow_keys(body, bp, {"frequencies"});
        const std::string fp = child(bp, "frequencies");
        const json& fs = array_of(required(body, bp, "frequencies"), fp, 1);
        std::vector<std::vector<cplx>> freqs;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string ip = child(fp, i);
            std::vector<cplx> b;
            if (fs[i].is_array()) {
                for (std::size_t k = 0; k < fs[i].size(); ++k) b.push_back(get_complex(fs[i][k], child(ip, k)));
            } else {
                b.push_back(get_complex(fs[i], ip));
            }
            freqs.push_back(std::move(b));
        }
        return wrap(bp, [&] { return exp_span(std::move(freqs)); });
    }
    if (name == "SparseLaurent") return sparse_laurent(parse_terms(body, bp));
    if (name == "HyperbolicGAF" || name == "GEF") {
        allow_keys(body, bp, {});
        return name == "GEF" ? gef() : hyperbolic_gaf();
    }
    if (name == "Product") {
        const json& fs = array_of(body, bp, 2);
        SpaceExpr s = parse_space(fs[0], child(bp, 0));
        for (std::size_t i = 1; i < fs.size(); ++i) {
            SpaceExpr r = parse_space(fs[i], child(bp, i));
            s = wrap(child(bp, i), [&] { return product(s, r); });
        }
        return s;
    }
    if (name == "Power") {
        allow_keys(body, bp, {"base", "exponent"});
        SpaceExpr base = parse_space(required(body, bp, "base"), child(bp, "base"));
        const int k = get_small_int(required(body, bp, "exponent"), child(bp, "exponent"));
        return wrap(child(bp, "exponent"), [&] { return power(base, k); });
    }
    if (name == "Tensor") {
        const json& fs = array_of(body, bp, 1);
        std::vector<SpaceExpr> factors;
        for (std::size_t i = 0; i < fs.size(); ++i) factors.push_back(parse_space(fs[i], child(bp, i)));
        return tensor(std::move(factors));
    }
    fail(bp, "unknown space constructor \"" + name + "\"");
}

/// Domain: a single-key object.
///   {"Disk": {"center": c, "radius": r}}
///   {"Polydisk": [{"center": c, "radius": r}, ...]}
///   {"Annulus": {"center": c, "inner": r1, "outer": r2}}
///   {"Rectangle": [{"re": [lo, hi], "im": [lo, hi]}, ...]}
///   {"PlaneCompactified": {"nvars": n}}, {"TorusCompactified": {"nvars": n}}
inline Domain parse_domain(const json& j, const std::string& ptr = "") {
    using namespace detail;
    require_object(j, ptr);
    if (j.size() != 1) fail(ptr, "a domain is an object with exactly one kind key");
    const std::string name = j.begin().key();
    const json& body = j.begin().value();
    const std::string bp = child(ptr, name);

    auto disk = [&](const json& d, const std::string& p) {
        allow_keys(d, p, {"center", "radius"});
        domain::Disk out;
        if (d.contains("center")) out.center = get_complex(d.at("center"), child(p, "center"));
        if (d.contains("radius")) out.radius = get_real(d.at("radius"), child(p, "radius"));
        return out;
    };
    auto interval = [&](const json& v, const std::string& p) {
        if (!v.is_array() || v.size() != 2) fail(p, "expected [lo, hi]");
        return std::pair(get_real(v[0], child(p, 0)), get_real(v[1], child(p, 1)));
    };
    auto nvars_of = [&](const json& d) {
        allow_keys(d, bp, {"nvars"});
        return d.contains("nvars") ? get_small_int(d.at("nvars"), child(bp, "nvars")) : 1;
    };

    Domain dom;
    if (name == "Disk") {
        dom = disk(body, bp);
    } else if (name == "Polydisk") {
        const json& fs = array_of(body, bp, 1);
        domain::Polydisk p;
        for (std::size_t i = 0; i < fs.size(); ++i) p.factors.push_back(disk(fs[i], child(bp, i)));
        dom = p;
    } else if (name == "Annulus") {
        allow_keys(body, bp, {"center", "inner", "outer"});
        domain::Annulus a;
        if (body.contains("center")) a.center = get_complex(body.at("center"), child(bp, "center"));
        a.inner = get_real(required(body, bp, "inner"), child(bp, "inner"));
        a.outer = get_real(required(body, bp, "outer"), child(bp, "outer"));
        dom = a;
    } else if (name == "Rectangle") {
        const json& fs = array_of(body, bp, 1);
        domain::Rectangle r;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            const std::string ip = child(bp, i);
            allow_keys(fs[i], ip, {"re", "im"});
            const auto [rl, rh] = interval(required(fs[i], ip, "re"), child(ip, "re"));
            const auto [il, ih] = interval(required(fs[i], ip, "im"), child(ip, "im"));
            r.factors.push_back({rl, rh, il, ih});
        }
        dom = r;
    } else if (name == "PlaneCompactified") {
        dom = domain::PlaneCompactified{nvars_of(body)};
    } else if (name == "TorusCompactified") {
        dom = domain::TorusCompactified{nvars_of(body)};
    } else {
        fail(bp, "unknown domain kind \"" + name + "\"");
    }
    wrap(bp, [&] { return domain_charts(dom); });
    return dom;
}

/// Parses the document text; syntax errors carry line and column.
inline json parse_document(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const std::size_t upto = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        int line = 1, column = 1;
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::string what = e.what();
        if (const auto pos = what.rfind(": "); pos != std::string::npos) what = what.substr(pos + 2);
        throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what, line,
                         column);
    }
    detail::allow_keys(doc, "", {"task", "space", "spaces", "domain", "supports", "grid", "tol", "budget", "threads",
                                 "samples", "seed", "radius", "truncation"});
    return doc;
}

/// Applies the precedence flags > document > defaults.
inline Resolved resolve(const json& doc, const Settings& flags) {
    using namespace detail;
    Resolved r;
    if (flags.task) {
        r.task = *flags.task;
    } else if (doc.contains("task")) {
        if (!doc.at("task").is_string()) fail("/task", "expected a string");
        r.task = doc.at("task").get<std::string>();
    } else {
        fail("", "no task given (subcommand or \"task\" key)");
    }
    bool known = false;
    for (auto t : kTasks) known = known || r.task == t;
    if (!known) fail("/task", "unknown task \"" + r.task + "\"");

    if (doc.contains("tol")) r.tol = get_real(doc.at("tol"), "/tol");
    if (doc.contains("budget")) r.budget = get_int(doc.at("budget"), "/budget");
    if (doc.contains("threads")) r.threads = get_small_int(doc.at("threads"), "/threads");
    if (doc.contains("samples")) r.samples = get_int(doc.at("samples"), "/samples");
    if (doc.contains("seed")) r.seed = get_seed(doc.at("seed"), "/seed");
    if (doc.contains("radius")) r.radius = get_real(doc.at("radius"), "/radius");
    if (doc.contains("truncation")) r.truncation = get_small_int(doc.at("truncation"), "/truncation");
    r.tol = flags.tol.value_or(r.tol);
    r.budget = flags.budget.value_or(r.budget);
    r.threads = flags.threads.value_or(r.threads);
    r.samples = flags.samples.value_or(r.samples);
    r.seed = flags.seed.value_or(r.seed);
    r.radius = flags.radius.value_or(r.radius);
    r.truncation = flags.truncation.value_or(r.truncation);

    if (!(r.tol > 0.0)) throw DomainError("tol must be positive");
    if (r.budget <= 0) throw DomainError("budget must be positive");
    if (r.threads < 0) throw DomainError("threads must be nonnegative (0 = all cores)");
    if (r.samples < 2) throw DomainError("samples must be at least 2");
    if (!(r.radius > 0.0)) throw DomainError("radius must be positive");
    if (r.truncation <= 0) throw DomainError("truncation must be positive");
    return r;
}

namespace detail {

/// Equations of the document: "spaces" as given, or n copies of "space".
inline std::vector<SpaceExpr> equations(const json& doc) {
    if (doc.contains("spaces") && doc.contains("space")) fail("", "give either \"space\" or \"spaces\", not both");
    if (doc.contains("spaces")) {
        const json& list = array_of(doc.at("spaces"), "/spaces", 1);
        std::vector<SpaceExpr> out;
        for (std::size_t i = 0; i < list.size(); ++i) out.push_back(parse_space(list[i], child("/spaces", i)));
        return out;
    }
    if (doc.contains("space")) {
        const SpaceExpr s = parse_space(doc.at("space"), "/space");
        return std::vector<SpaceExpr>(static_cast<std::size_t>(s.nvars()), s);
    }
    fail("", "missing key \"space\" or \"spaces\"");
}

inline SpaceExpr single_space(const json& doc) {
    const auto eqs = equations(doc);
    if (eqs.size() != 1)
        fail(doc.contains("space") ? "/space" : "/spaces", "this task needs a single one-variable space");
    return eqs.front();
}

inline Domain domain_or_default(const json& doc, int nvars) {
    if (doc.contains("domain")) return parse_domain(doc.at("domain"), "/domain");
    if (nvars == 1) return domain::Disk{};
    return unit_polydisk(nvars);
}

inline QuadOptions quad_options(const Resolved& r) {
    QuadOptions q;
    q.tol = r.tol;
    q.budget = r.budget;
    q.threads = r.threads;
    return q;
}

inline json estimate_json(const CountEstimate& e) {
    json j;
    j["value"] = e.value;
    j["error"] = e.error;
    j["evaluations"] = e.evaluations;
    j["method"] = to_string(e.method);
    j["budget_exhausted"] = e.budget_exhausted;
    j["diagnostics"] = e.diagnostics;
    return j;
}

inline json inputs_json(const json& doc, const Resolved& r) {
    json settings;
    settings["tol"] = r.tol;
    settings["budget"] = r.budget;
    settings["threads"] = r.threads;
    settings["samples"] = r.samples;
    settings["seed"] = r.seed;
    settings["radius"] = r.radius;
    settings["truncation"] = r.truncation;
    json in;
    in["document"] = doc;
    in["settings"] = settings;
    return in;
}

inline LatticeSupport parse_support(const json& j, const std::string& ptr) {
    const json& pts = array_of(j, ptr, 1);
    std::vector<LatticePoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Exponent a = get_exponent(pts[i], child(ptr, i));
        out.emplace_back(a.begin(), a.end());
        if (out.back().size() != out.front().size()) fail(child(ptr, i), "point length differs from the first point");
    }
    const int dim = static_cast<int>(out.front().size());
    return wrap(ptr, [&] { return LatticeSupport(dim, std::move(out)); });
}

inline json grid_axis(const json& g, const char* key, double& lo, double& hi, int& count) {
    const std::string p = child("/grid", key);
    const json& v = required(g, "/grid", key);
    if (!v.is_array() || v.size() != 3) fail(p, "expected [lo, hi, count]");
    lo = get_real(v[0], child(p, 0));
    hi = get_real(v[1], child(p, 1));
    count = get_small_int(v[2], child(p, 2));
    if (count < 1) fail(child(p, 2), "count must be positive");
    if (count > 1 && !(lo < hi)) fail(p, "need lo < hi");
    return v;
}

inline double grid_node(double lo, double hi, int count, int i) {
    return count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
}

} // namespace detail

inline Output run_expect(const json& doc, const Resolved& r) {
    const MixedDensityQuery query(detail::equations(doc));
    const Domain dom = detail::domain_or_default(doc, query.nvars());
    const CountEstimate e = integrate_density(query, dom, detail::quad_options(r));
    Output out;
    out.record["task"] = r.task;
    out.record["inputs"] = detail::inputs_json(doc, r);
    const json est = detail::estimate_json(e);
    for (const auto& [k, v] : est.items()) out.record[k] = v;
    return out;
}

inline Output run_mc(const json& doc, const Resolved& r) {
    if (doc.contains("domain")) detail::fail("/domain", "mc counts zeros in the disk |z| < radius; use \"radius\"");
    const SpaceExpr space = detail::single_space(doc);
    McOptions opts;
    opts.truncation = r.truncation;
    opts.threads = r.threads;
    const MCReport rep = mc_expected_count(space, r.radius, r.samples, r.seed, opts);
    Output out;
    json& j = out.record;
    j["task"] = r.task;
    j["inputs"] = detail::inputs_json(doc, r);
    j["value"] = rep.mean;
    j["error"] = rep.std_error;
    j["method"] = to_string(Method::MonteCarlo);
    j["samples"] = rep.samples;
    j["discarded"] = rep.discarded;
    j["seed"] = rep.seed;
    json hist = json::object();
    for (const auto& [c, n] : rep.histogram) hist[std::to_string(c)] = n;
    j["histogram"] = hist;
    j["truncation"] = {{"order", r.truncation},
                       {"checked", rep.truncation_checked},
                       {"bias", rep.truncation_bias},
                       {"ok", rep.truncation_ok}};
    j["diagnostics"] = rep.diagnostics;
    return out;
}

inline Output run_mixed(const json& doc, const Resolved& r) {
    const auto spaces = detail::equations(doc);
    const Domain dom = detail::domain_or_default(doc, static_cast<int>(spaces.size()));
    const MixedCheck c = theorem_main_check(spaces, dom, detail::quad_options(r));
    Output out;
    json& j = out.record;
    j["task"] = r.task;
    j["inputs"] = detail::inputs_json(doc, r);
    j["value"] = c.mixed.value;
    j["error"] = c.mixed.error;
    j["mixed"] = detail::estimate_json(c.mixed);
    j["extracted"] = detail::estimate_json(c.extracted);
    j["discrepancy"] = c.discrepancy();
    j["combined_error"] = c.combined_error();
    j["agree"] = c.discrepancy() <= c.combined_error() + r.tol;
    std::vector<std::string> diag = c.mixed.diagnostics;
    diag.insert(diag.end(), c.extracted.diagnostics.begin(), c.extracted.diagnostics.end());
    j["diagnostics"] = diag;
    return out;
}

inline Output run_bkk(const json& doc, const Resolved& r) {
    const bool has_supports = doc.contains("supports");
    const bool has_space = doc.contains("space");
    if (!has_supports && !has_space) detail::fail("", "bkk needs \"supports\" and/or a SparseLaurent \"space\"");
    if (doc.contains("spaces")) detail::fail("/spaces", "bkk takes a single SparseLaurent \"space\"");

    Output out;
    json& j = out.record;
    j["task"] = r.task;
    j["inputs"] = detail::inputs_json(doc, r);
    j["method"] = to_string(Method::Polytope);
    std::vector<std::string> diag;
    if (has_supports) {
        const json& list = detail::array_of(doc.at("supports"), "/supports", 1);
        std::vector<LatticeSupport> supports;
        for (std::size_t i = 0; i < list.size(); ++i)
            supports.push_back(detail::parse_support(list[i], detail::child("/supports", i)));
        const double b = detail::wrap("/supports", [&] { return bernstein_count(supports); });
        j["value"] = b;
        j["error"] = 0.0;
        j["bernstein"] = {{"value", b}, {"error", 0.0}};
    }
    if (has_space) {
        const SpaceExpr s = parse_space(doc.at("space"), "/space");
        const auto* laurent = std::get_if<atom::SparseLaurent>(&s.node().value);
        if (!laurent) detail::fail("/space", "kushnirenko check needs a bare SparseLaurent space");
        const LatticeSupport support = LatticeSupport::from_weights(laurent->weights);
        const KushnirenkoCheck k = detail::wrap(
            "/space", [&] { return kushnirenko_check(support, laurent->weights, detail::quad_options(r)); });
        const double gap = std::abs(k.combinatorial - k.integral.value);
        j["kushnirenko"] = {{"combinatorial", k.combinatorial},
                            {"integral", detail::estimate_json(k.integral)},
                            {"discrepancy", gap},
                            {"agree", gap <= r.tol + k.integral.error}};
        if (!has_supports) {
            j["value"] = k.combinatorial;
            j["error"] = 0.0;
        }
        diag.insert(diag.end(), k.integral.diagnostics.begin(), k.integral.diagnostics.end());
    }
    j["diagnostics"] = diag;
    return out;
}

/// Rows "re,im,density" of density_at on a grid over the first coordinate;
/// points outside the space's domain give "nan".
inline Output run_grid(const json& doc, const Resolved&) {
    const SpaceExpr space = detail::single_space(doc);
    const json& g = detail::required(doc, "", "grid");
    detail::allow_keys(g, "/grid", {"re", "im"});
    double re_lo, re_hi, im_lo, im_hi;
    int re_n, im_n;
    detail::grid_axis(g, "re", re_lo, re_hi, re_n);
    detail::grid_axis(g, "im", im_lo, im_hi, im_n);
    const MixedDensityQuery query = MixedDensityQuery::unmixed(space);

    Output out;
    out.tabular = true;
    out.table = "re,im,density\n";
    for (int a = 0; a < re_n; ++a) {
        for (int b = 0; b < im_n; ++b) {
            const cplx z(detail::grid_node(re_lo, re_hi, re_n, a), detail::grid_node(im_lo, im_hi, im_n, b));
            std::string d;
            try {
                d = format_number(density_at(query, std::vector<cplx>{z}));
            } catch (const DomainError&) {
                d = "nan";
            }
            out.table += format_number(z.real()) + "," + format_number(z.imag()) + "," + d + "\n";
        }
    }
    return out;
}

/// Rows of the diagonal basis: exponent columns, frequency columns when any
/// term has a nonzero frequency, then the weight.
inline Output run_weights(const json& doc, const Resolved& r) {
    const auto eqs = detail::equations(doc);
    const SpaceExpr space = eqs.front();
    if (!check_diagonal_condition(space)) throw NotDiagonal("weights: space has no diagonal basis");
    const DiagonalBasis basis = diagonal_expansion(space, r.truncation);
    const int n = basis.nvars;
    bool freq = false;
    for (const auto& [k, w] : basis.weights) freq = freq || k.has_frequency();

    Output out;
    out.tabular = true;
    auto& t = out.table;
    for (int j = 0; j < n; ++j) t += (n == 1 ? std::string("exponent") : "a" + std::to_string(j + 1)) + ",";
    if (freq)
        for (int j = 0; j < n; ++j) {
            const std::string s = n == 1 ? "" : std::to_string(j + 1);
            t += "freq_re" + s + ",freq_im" + s + ",";
        }
    t += "weight\n";
    for (const auto& [k, w] : basis.weights) {
        for (int a : k.exponent) t += std::to_string(a) + ",";
        if (freq)
            for (const cplx& b : k.frequency) t += format_number(b.real()) + "," + format_number(b.imag()) + ",";
        t += format_number(w) + "\n";
    }
    return out;
}

/// Runs one task on a parsed document.
inline Output run(const json& doc, const Settings& flags) {
    const Resolved r = resolve(doc, flags);
    if (r.task == "expect") return run_expect(doc, r);
    if (r.task == "mc") return run_mc(doc, r);
    if (r.task == "mixed") return run_mixed(doc, r);
    if (r.task == "bkk") return run_bkk(doc, r);
    if (r.task == "grid") return run_grid(doc, r);
    return run_weights(doc, r);
}

inline Output run_text(std::string_view text, const Settings& flags) { return run(parse_document(text), flags); }

} // namespace fewspace::cli
