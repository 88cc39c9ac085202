#pragma once

// kplab command line. run() is kept separate from main() so the tests can drive it.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kplab/kplab.hpp"

namespace kplab::cli {

using json = nlohmann::json;

enum Exit : int {
    kOk = 0,
    kAuditFail = 1,
    kConfig = 2,
    kInapplicable = 3,
    kVerification = 4,
    kSolver = 5,
};

/// JSON text with every floating-point number at 17 significant digits.
inline void dump(std::ostream& os, const json& j, int indent = 2, int depth = 0) {
    const auto pad = [&](int d) {
        if (indent > 0) os << '\n' << std::string(static_cast<std::size_t>(d * indent), ' ');
    };
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                os << "{}";
                break;
            }
            os << '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) os << ',';
                first = false;
                pad(depth + 1);
                os << json(it.key()).dump() << (indent > 0 ? ": " : ":");
                dump(os, it.value(), indent, depth + 1);
            }
            pad(depth);
            os << '}';
            break;
        }
        case json::value_t::array: {
            if (j.empty()) {
                os << "[]";
                break;
            }
            os << '[';
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ',';
                pad(depth + 1);
                dump(os, j[i], indent, depth + 1);
            }
            pad(depth);
            os << ']';
            break;
        }
        case json::value_t::number_float: {
            const double v = j.get<double>();
            os << (std::isfinite(v) ? io::num(v) : "null");
            break;
        }
        default: os << j.dump();
    }
}

inline std::string dump_string(const json& j, int indent = 2) {
    std::ostringstream os;
    dump(os, j, indent);
    return os.str();
}

// ---------------------------------------------------------------- configuration

enum class KeyType { Number, Integer, String, Flag, NumberList };

struct KeySpec {
    std::string key;
    std::string flags;  // CLI11 name string
    KeyType type;
    std::string help;
};

inline const std::vector<KeySpec>& all_keys() {
    static const std::vector<KeySpec> keys = {
        {"model", "-m,--model", KeyType::String, "symbol: fkdv, bo, ilw, whitham, name:beta=x or expr:<m(k)>"},
        {"beta", "--beta", KeyType::Number, "fkdv exponent"},
        {"sigma", "-s,--sigma", KeyType::Integer, "+1 or -1"},
        {"k", "-k", KeyType::Number, "wavenumber"},
        {"a", "-a", KeyType::Number, "amplitude"},
        {"b", "-b", KeyType::Number, "offset parameter"},
        {"xi", "--xi", KeyType::Number, "Bloch exponent"},
        {"ell", "--ell", KeyType::Number, "transverse wavenumber"},
        {"N", "-N,--truncation", KeyType::Integer, "Fourier truncation"},
        {"wave", "--wave", KeyType::String, "expansion or newton"},
        {"newton", "--newton", KeyType::Flag, "Newton-refine the wave"},
        {"harmonics", "--harmonics", KeyType::Integer, "Newton harmonics"},
        {"tol", "--tol", KeyType::Number, "Newton tolerance"},
        {"max_index", "--max-index", KeyType::Integer, "largest |n| enumerated"},
        {"ell_max", "--ell-max", KeyType::Number, "largest ell"},
        {"ell_min", "--ell-min", KeyType::Number, "smallest ell"},
        {"ell_points", "--ell-points", KeyType::Integer, "ell grid size"},
        {"all", "--all", KeyType::Flag, "list every collision, not only opposite-signature ones"},
        {"context", "--context", KeyType::String, "delta3, longwave, bloch01 or bloch-delta2"},
        {"n", "--n", KeyType::Integer, "lower mode of the pair (-1 or -2)"},
        {"refine_tol", "--refine-tol", KeyType::Number, "edge bisection tolerance in ell^2"},
        {"scan_points", "--scan-points", KeyType::Integer, "coarse scan points"},
        {"trace_points", "--trace-points", KeyType::Integer, "points of the eigenvalue trace"},
        {"plot", "--plot", KeyType::String, "write an SVG eigenvalue trace here; bare --plot writes it to the output"},
        {"trace", "--trace", KeyType::String, "write the eigenvalue trace CSV here"},
        {"format", "-f,--format", KeyType::String, "csv, json, svg or text"},
    };
    return keys;
}

inline const KeySpec& key_spec(const std::string& key) {
    for (const auto& k : all_keys())
        if (k.key == key) return k;
    fail(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
}

/// Defaults per command; the key set is also the set of accepted keys.
inline json command_defaults(const std::string& cmd) {
    const json common = {{"model", nullptr}, {"beta", nullptr}};
    json d = common;
    if (cmd == "audit") {
        d["format"] = "text";
    } else if (cmd == "wave") {
        d.update(json{{"k", 1.0}, {"a", 0.0}, {"b", 0.0}, {"newton", false}, {"harmonics", 32}, {"tol", 1e-12},
                      {"format", "json"}});
    } else if (cmd == "collide") {
        d.update(json{{"sigma", 1}, {"k", 1.0}, {"xi", 0.0}, {"max_index", 8}, {"ell_max", 10.0}, {"all", false},
                      {"format", "csv"}});
    } else if (cmd == "band") {
        d.update(json{{"sigma", 1},
                      {"k", 1.0},
                      {"a", 0.05},
                      {"xi", 0.0},
                      {"context", nullptr},
                      {"n", -1},
                      {"N", 32},
                      {"refine_tol", 1e-10},
                      {"scan_points", 33},
                      {"trace_points", 241},
                      {"wave", "newton"},
                      {"plot", nullptr},
                      {"trace", nullptr},
                      {"format", "json"}});
    } else if (cmd == "spectrum") {
        d.update(json{{"sigma", 1}, {"k", 1.0}, {"a", 0.0}, {"b", 0.0}, {"ell", 0.0}, {"xi", 0.0}, {"N", 32},
                      {"wave", "newton"}, {"format", "csv"}});
    } else if (cmd == "scan") {
        d.update(json{{"sigma", 1},
                      {"k", 1.0},
                      {"a", 0.0},
                      {"xi", json::array({0.0})},
                      {"ell_min", 0.0},
                      {"ell_max", 3.0},
                      {"ell_points", 61},
                      {"N", 32},
                      {"wave", "newton"},
                      {"format", "csv"}});
    } else {
        fail(ErrorKind::InvalidArgument, "unknown command '" + cmd + "'");
    }
    return d;
}

namespace detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidArgument, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string unescape_xml(std::string s) {
    const std::pair<const char*, const char*> table[] = {
        {"&quot;", "\""}, {"&lt;", "<"}, {"&gt;", ">"}, {"&amp;", "&"}};
    for (const auto& [from, to] : table) {
        std::string out;
        std::size_t pos = 0, hit;
        const std::string f = from;
        while ((hit = s.find(f, pos)) != std::string::npos) {
            out.append(s, pos, hit - pos);
            out += to;
            pos = hit + f.size();
        }
        out.append(s, pos);
        s = std::move(out);
    }
    return s;
}

}  // namespace detail

/// A config file: plain JSON, or any kplab output (JSON "config" member, CSV "# config:" line, SVG metadata).
inline json load_config_file(const std::string& path) {
    const std::string text = detail::read_file(path);
    const auto start = text.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) fail(ErrorKind::InvalidArgument, "config file '" + path + "' is empty");
    json j;
    try {
        if (text.compare(start, 10, "# config: ") == 0) {
            const auto eol = text.find('\n', start);
            j = json::parse(text.substr(start + 10, eol == std::string::npos ? std::string::npos : eol - start - 10));
        } else if (text.compare(start, 4, "<svg") == 0) {
            const auto b = text.find("<metadata>"), e = text.find("</metadata>");
            if (b == std::string::npos || e == std::string::npos)
                fail(ErrorKind::InvalidArgument, "SVG '" + path + "' carries no config metadata");
            j = json::parse(detail::unescape_xml(text.substr(b + 10, e - b - 10)));
        } else {
            j = json::parse(text);
            if (j.is_object() && j.contains("config") && j["config"].is_object()) j = j["config"];
        }
    } catch (const json::parse_error& e) {
        fail(ErrorKind::InvalidArgument, "config file '" + path + "': " + e.what());
    }
    if (!j.is_object()) fail(ErrorKind::InvalidArgument, "config file '" + path + "' is not a JSON object");
    return j;
}

/// Overlay `src` onto `dst`, keeping only the keys `dst` already has.
inline void merge_config(json& dst, const json& src) {
    for (auto it = src.begin(); it != src.end(); ++it) {
        if (it.key() == "command") continue;
        (void)key_spec(it.key());  // reject keys that no command knows
        if (dst.contains(it.key())) dst[it.key()] = it.value();
    }
}

// ---------------------------------------------------------------- typed accessors

namespace detail {

inline double get_number(const json& c, const std::string& key) {
    const auto& v = c.at(key);
    if (!v.is_number()) fail(ErrorKind::InvalidArgument, "config key '" + key + "' must be a number");
    return v.get<double>();
}

inline int get_int(const json& c, const std::string& key) {
    const auto& v = c.at(key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<int>(v.get<double>());
    fail(ErrorKind::InvalidArgument, "config key '" + key + "' must be an integer");
}

inline std::string get_string(const json& c, const std::string& key) {
    const auto& v = c.at(key);
    if (!v.is_string()) fail(ErrorKind::InvalidArgument, "config key '" + key + "' is required");
    return v.get<std::string>();
}

inline std::optional<std::string> get_path(const json& c, const std::string& key) {
    const auto& v = c.at(key);
    if (v.is_null()) return std::nullopt;
    return get_string(c, key);
}

inline bool get_flag(const json& c, const std::string& key) {
    const auto& v = c.at(key);
    if (!v.is_boolean()) fail(ErrorKind::InvalidArgument, "config key '" + key + "' must be true or false");
    return v.get<bool>();
}

inline std::vector<double> get_list(const json& c, const std::string& key) {
    const auto& v = c.at(key);
    if (v.is_number()) return {v.get<double>()};
    std::vector<double> out;
    if (v.is_array())
        for (const auto& e : v) {
            if (!e.is_number()) fail(ErrorKind::InvalidArgument, "config key '" + key + "' must hold numbers");
            out.push_back(e.get<double>());
        }
    if (out.empty()) fail(ErrorKind::InvalidArgument, "config key '" + key + "' must be a number or a list");
    return out;
}

inline MultiplierSymbol symbol_from(const json& c) {
    std::optional<double> beta;
    if (!c.at("beta").is_null()) beta = get_number(c, "beta");
    return resolve_symbol(get_string(c, "model"), beta);
}

inline SigmaSign sigma_from(const json& c) {
    const int s = get_int(c, "sigma");
    require(s == 1 || s == -1, "sigma must be +1 or -1");
    return SigmaSign(s);
}

inline StokesWave wave_from(const json& c, const MultiplierSymbol& sym, const WaveParams& p) {
    const std::string kind = get_string(c, "wave");
    if (kind == "expansion") return stokes_wave(sym, p);
    if (kind == "newton") return newton_refine(sym, p);
    fail(ErrorKind::InvalidArgument, "wave must be 'expansion' or 'newton'");
}

inline BlochSpec bloch_from(const json& c, const MultiplierSymbol& sym, double a, double b) {
    const double k = get_number(c, "k");
    require(k > 0.0, "k must be positive");
    return BlochSpec{sym, sigma_from(c), wave_from(c, sym, WaveParams{k, a, b}), 0.0, 0.0, get_int(c, "N")};
}

inline json prediction_json(const BandPrediction& p) {
    return {{"context", std::string(to_string(p.context))},
            {"center_ell_sq", p.center_ell_sq},
            {"half_width_ell_sq", p.half_width_ell_sq},
            {"lower_ell_sq", p.lower()},
            {"upper_ell_sq", p.upper()},
            {"validity", p.validity},
            {"params",
             {{"symbol", p.symbol}, {"sigma", p.sigma}, {"k", p.k}, {"a", p.a}, {"xi", p.xi}, {"n", p.n}}}};
}

inline json check_json(const HypothesisCheck& h) {
    return {{"pass", h.pass}, {"failing_k", h.failing_k}, {"detail", h.detail}};
}

}  // namespace detail

// ---------------------------------------------------------------- output

struct Output {
    std::string format;
    std::string body;
};

inline std::string csv_header(const json& config) { return "# config: " + dump_string(config, 0) + "\n"; }

// ---------------------------------------------------------------- commands

inline int cmd_audit(const json& c, Output& out) {
    const MultiplierSymbol sym = detail::symbol_from(c);
    const auto grid = default_audit_grid();
    const AuditReport rep = audit_hypotheses(sym, grid);
    std::ostringstream os;
    if (out.format == "json") {
        json j = {{"config", c},
                  {"symbol", sym.name()},
                  {"declared_monotonicity", std::string(to_string(sym.monotonicity()))},
                  {"observed_monotonicity", std::string(to_string(rep.observed))},
                  {"alpha", sym.alpha()},
                  {"alpha_estimate", rep.alpha_estimate},
                  {"c1", rep.c1},
                  {"c2", rep.c2},
                  {"h1", detail::check_json(rep.h1)},
                  {"h2", detail::check_json(rep.h2)},
                  {"h3", detail::check_json(rep.h3)},
                  {"pass", rep.all_pass()}};
        dump(os, j);
        os << '\n';
    } else if (out.format == "text") {
        os << "# config: " << dump_string(c, 0) << '\n';
        os << "symbol " << sym.name() << '\n';
        const auto line = [&](const char* tag, const HypothesisCheck& h) {
            os << tag << ' ' << (h.pass ? "pass" : "FAIL");
            if (!h.detail.empty()) os << "  " << h.detail;
            os << '\n';
        };
        line("H1", rep.h1);
        line("H2", rep.h2);
        line("H3", rep.h3);
        os << "alpha " << io::num(sym.alpha()) << "  estimate " << io::num(rep.alpha_estimate) << '\n';
        os << "monotonicity " << to_string(rep.observed) << '\n';
        os << (rep.all_pass() ? "PASS" : "FAIL") << '\n';
    } else {
        fail(ErrorKind::InvalidArgument, "audit supports text or json output");
    }
    out.body = os.str();
    return rep.all_pass() ? kOk : kAuditFail;
}

inline int cmd_wave(const json& c, Output& out) {
    const MultiplierSymbol sym = detail::symbol_from(c);
    const WaveParams p{detail::get_number(c, "k"), detail::get_number(c, "a"), detail::get_number(c, "b")};
    require(p.k > 0.0, "k must be positive");
    StokesWave w;
    if (detail::get_flag(c, "newton")) {
        NewtonOptions opt;
        opt.harmonics = detail::get_int(c, "harmonics");
        opt.tol = detail::get_number(c, "tol");
        w = newton_refine(sym, p, opt);
    } else {
        w = stokes_wave(sym, p);
        w.residual = wave_residual(sym, w);
    }
    std::ostringstream os;
    if (out.format == "json") {
        json j = {{"config", c},
                  {"symbol", w.symbol},
                  {"k", p.k},
                  {"a", p.a},
                  {"b", p.b},
                  {"c", w.c},
                  {"coefficients", w.what},
                  {"provenance", std::string(to_string(w.provenance))},
                  {"residual", w.residual},
                  {"iterations", w.iterations}};
        dump(os, j);
        os << '\n';
    } else if (out.format == "csv") {
        os << csv_header(c) << "# c: " << io::num(w.c) << "\n# residual: " << io::num(w.residual) << '\n';
        os << "n,coefficient\n";
        for (std::size_t n = 0; n < w.what.size(); ++n) os << n << ',' << io::num(w.what[n]) << '\n';
    } else {
        fail(ErrorKind::InvalidArgument, "wave supports json or csv output");
    }
    out.body = os.str();
    return kOk;
}

inline int cmd_collide(const json& c, Output& out) {
    const MultiplierSymbol sym = detail::symbol_from(c);
    require_admissible(sym);
    const SigmaSign sigma = detail::sigma_from(c);
    const double k = detail::get_number(c, "k"), xi = detail::get_number(c, "xi");
    require(k > 0.0, "k must be positive");
    const int max_index = detail::get_int(c, "max_index");
    const double ell_max = detail::get_number(c, "ell_max");
    const CollisionList list = detail::get_flag(c, "all") ? enumerate_collisions(sym, sigma, k, xi, max_index, ell_max)
                                                           : enumerate_dangerous(sym, sigma, k, xi, max_index, ell_max);
    const std::pair<const char*, std::pair<XClass, YClass>> classes[] = {
        {"periodic,finite", {XClass::Periodic, YClass::FiniteShort}},
        {"periodic,long", {XClass::Periodic, YClass::Long}},
        {"nonperiodic,finite", {XClass::NonPeriodic, YClass::FiniteShort}},
        {"nonperiodic,long", {XClass::NonPeriodic, YClass::Long}},
    };
    std::ostringstream os;
    if (out.format == "csv") {
        os << csv_header(c);
        for (const auto& [tag, xy] : classes)
            os << "# verdict " << tag << ": " << to_string(table1_verdict(sym, sigma, xy.first, xy.second)) << '\n';
        io::write_collisions_csv(os, list.events);
    } else if (out.format == "json") {
        json ev = json::array();
        for (const auto& e : list.events)
            ev.push_back({{"p", e.first.n},
                          {"q", e.second.n},
                          {"xi", e.first.xi},
                          {"ell_sq", e.ell_sq},
                          {"omega", e.omega},
                          {"kappa_p", e.kappa_first},
                          {"kappa_q", e.kappa_second},
                          {"dangerous", e.dangerous}});
        json verdicts = json::object();
        for (const auto& [tag, xy] : classes)
            verdicts[tag] = std::string(to_string(table1_verdict(sym, sigma, xy.first, xy.second)));
        dump(os, json{{"config", c}, {"events", ev}, {"verdicts", verdicts}});
        os << '\n';
    } else {
        fail(ErrorKind::InvalidArgument, "collide supports csv or json output");
    }
    out.body = os.str();
    return kOk;
}

inline int cmd_band(const json& c, Output& out, std::ostream& err) {
    const MultiplierSymbol sym = detail::symbol_from(c);
    require_admissible(sym);
    const SigmaSign sigma = detail::sigma_from(c);
    const double k = detail::get_number(c, "k"), a = detail::get_number(c, "a"), xi = detail::get_number(c, "xi");
    require(k > 0.0, "k must be positive");
    const BandContext ctx = parse_context(detail::get_string(c, "context"));
    const int n = detail::get_int(c, "n");

    BandPrediction pred;
    switch (ctx) {
        case BandContext::Delta3Periodic:
            pred = predict_delta3_periodic(sym, sigma, k, a);
            require(xi == 0.0, "delta3 is a periodic (xi = 0) context");
            break;
        case BandContext::LongWavePeriodic:
            if (!long_wave_regime(sigma, sym.monotonicity()))
                fail(ErrorKind::Inapplicable, "longwave band is empty for (sigma, m) = (" +
                                                  std::to_string(sigma.value()) + ", " +
                                                  std::string(to_string(sym.monotonicity())) +
                                                  "): the spectrum near the origin stays imaginary");
            pred = predict_longwave_periodic(sym, sigma, k, a);
            require(xi == 0.0, "longwave is a periodic (xi = 0) context");
            break;
        case BandContext::Bloch01: pred = predict_bloch01(sym, sigma, k, a, xi); break;
        case BandContext::BlochDelta2: pred = predict_bloch_delta2(sym, sigma, k, a, xi, n); break;
    }
    if (!(pred.half_width_ell_sq > 0.0))
        fail(ErrorKind::Inapplicable, "predicted band is empty (half width " + io::num(pred.half_width_ell_sq) + ")");

    BlochSpec tmpl = detail::bloch_from(c, sym, a, 0.0);
    tmpl.xi = xi;
    BandOptions opt;
    opt.refine_tol = detail::get_number(c, "refine_tol");
    opt.scan_points = detail::get_int(c, "scan_points");
    const BandReport rep = measure_band(tmpl, pred, opt);

    json report = {{"context", std::string(to_string(rep.context))},
                   {"measured_center", rep.measured_center},
                   {"measured_edges", {rep.lower, rep.upper}},
                   {"measured_half_width", rep.measured_half_width()},
                   {"max_growth", rep.max_growth},
                   {"agreement_ratio", rep.agreement_ratio},
                   {"params",
                    {{"symbol", rep.symbol},
                     {"sigma", rep.sigma},
                     {"k", rep.k},
                     {"a", rep.a},
                     {"xi", rep.xi},
                     {"N", rep.N}}}};

    const auto plot_path = detail::get_path(c, "plot");
    const auto trace_path = detail::get_path(c, "trace");
    const bool want_trace = plot_path || trace_path || out.format == "svg";
    std::vector<TracePoint> trace;
    if (want_trace) {
        const int pts = detail::get_int(c, "trace_points");
        require(pts >= 2, "trace_points must be at least 2");
        const double hw = pred.half_width_ell_sq;
        const double lo2 = ctx == BandContext::LongWavePeriodic ? 0.0 : std::max(0.0, pred.center_ell_sq - 4.0 * hw);
        const double hi2 = ctx == BandContext::LongWavePeriodic ? 4.0 * hw : pred.center_ell_sq + 4.0 * hw;
        const double l0 = std::sqrt(lo2), l1 = std::sqrt(hi2);
        std::vector<double> ells(static_cast<std::size_t>(pts));
        for (int i = 0; i < pts; ++i) ells[static_cast<std::size_t>(i)] = l0 + (l1 - l0) * i / (pts - 1);
        if (ctx == BandContext::LongWavePeriodic && ells.front() == 0.0) ells.front() = 1e-3 * (l1 - l0) / (pts - 1);
        const double target =
            ctx == BandContext::LongWavePeriodic
                ? 0.0
                : reduced_matrix(ctx, sym, sigma, k, a, std::sqrt(pred.center_ell_sq), xi, n).center_omega;
        trace = eigenvalue_trace(tmpl, ells, target);
    }

    std::ostringstream os;
    const std::string title = sym.name() + " sigma=" + std::to_string(sigma.value()) + " " +
                              std::string(to_string(ctx)) + " a=" + io::num(a);
    if (out.format == "json") {
        dump(os, json{{"config", c}, {"prediction", detail::prediction_json(pred)}, {"report", report}});
        os << '\n';
    } else if (out.format == "svg") {
        os << svg::trace_plot(title, trace, dump_string(c, 0));
    } else {
        fail(ErrorKind::InvalidArgument, "band supports json or svg output");
    }
    out.body = os.str();

    if (plot_path) {
        std::ofstream f(*plot_path, std::ios::binary);
        if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + *plot_path + "'");
        f << svg::trace_plot(title, trace, dump_string(c, 0));
    }
    if (trace_path) {
        std::ofstream f(*trace_path, std::ios::binary);
        if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + *trace_path + "'");
        f << csv_header(c);
        io::write_trace_csv(f, trace);
    }
    err << "band " << to_string(ctx) << ": [" << io::num(rep.lower) << ", " << io::num(rep.upper)
        << "], agreement ratio " << io::num(rep.agreement_ratio) << '\n';
    return kOk;
}

inline int cmd_spectrum(const json& c, Output& out, std::ostream& err) {
    const MultiplierSymbol sym = detail::symbol_from(c);
    require_admissible(sym);
    BlochSpec s = detail::bloch_from(c, sym, detail::get_number(c, "a"), detail::get_number(c, "b"));
    s.ell = detail::get_number(c, "ell");
    s.xi = detail::get_number(c, "xi");
    const SpectrumResult res = spectrum(s);
    for (const auto& w : res.warnings) err << "warning: " << w << '\n';
    std::ostringstream os;
    if (out.format == "csv") {
        os << csv_header(c) << "# dimension: " << res.eigenvalues.size() << "\n# max_real: " << io::num(res.max_real)
           << '\n';
        io::write_spectrum_csv(os, res.eigenvalues);
    } else if (out.format == "json") {
        json ev = json::array();
        for (const auto& z : res.eigenvalues) ev.push_back({z.real(), z.imag()});
        dump(os, json{{"config", c},
                      {"dimension", res.eigenvalues.size()},
                      {"eigenvalues", ev},
                      {"max_real", res.max_real},
                      {"solver_tol", res.solver_tol},
                      {"warnings", res.warnings}});
        os << '\n';
    } else {
        fail(ErrorKind::InvalidArgument, "spectrum supports csv or json output");
    }
    out.body = os.str();
    return kOk;
}

inline int cmd_scan(const json& c, Output& out) {
    const MultiplierSymbol sym = detail::symbol_from(c);
    require_admissible(sym);
    const BlochSpec tmpl = detail::bloch_from(c, sym, detail::get_number(c, "a"), 0.0);
    const double l0 = detail::get_number(c, "ell_min"), l1 = detail::get_number(c, "ell_max");
    const int pts = detail::get_int(c, "ell_points");
    require(pts >= 1, "ell_points must be positive");
    require(l1 >= l0, "ell_max must not be below ell_min");
    std::vector<double> ells(static_cast<std::size_t>(pts));
    for (int i = 0; i < pts; ++i) ells[static_cast<std::size_t>(i)] = pts == 1 ? l0 : l0 + (l1 - l0) * i / (pts - 1);
    const std::vector<double> xis = detail::get_list(c, "xi");
    const auto rows = growth_scan(tmpl, ells, xis);

    std::ostringstream os;
    if (out.format == "csv") {
        os << csv_header(c);
        io::write_scan_csv(os, rows);
    } else if (out.format == "json") {
        json r = json::array();
        for (const auto& row : rows) r.push_back({{"ell", row.ell}, {"xi", row.xi}, {"max_real_part", row.max_real}});
        dump(os, json{{"config", c}, {"rows", r}});
        os << '\n';
    } else if (out.format == "svg") {
        static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
        svg::Panel panel{"ell", "max Re lambda", {}};
        for (std::size_t i = 0; i < xis.size(); ++i) {
            svg::Series s{"xi=" + io::num(xis[i]), {}, {}, colors[i % 6]};
            for (std::size_t j = 0; j < ells.size(); ++j) {
                s.x.push_back(rows[i * ells.size() + j].ell);
                s.y.push_back(rows[i * ells.size() + j].max_real);
            }
            panel.series.push_back(std::move(s));
        }
        os << svg::render(sym.name() + " growth scan", {panel}, dump_string(c, 0));
    } else {
        fail(ErrorKind::InvalidArgument, "scan supports csv, json or svg output");
    }
    out.body = os.str();
    return kOk;
}

// ---------------------------------------------------------------- driver

inline int exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::InvalidArgument:
        case ErrorKind::UnknownSymbol:
        case ErrorKind::DegenerateSymbol: return kConfig;
        case ErrorKind::Inapplicable: return kInapplicable;
        case ErrorKind::VerificationFailed: return kVerification;
        case ErrorKind::NoConvergence: return kSolver;
    }
    return kConfig;
}

inline std::string format_from_path(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return {};
    const std::string ext = path.substr(dot + 1);
    if (ext == "csv" || ext == "json" || ext == "svg") return ext;
    if (ext == "txt") return "text";
    return {};
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    static const char* commands[][2] = {
        {"audit", "check hypotheses H1-H3 for a symbol"},
        {"wave", "small-amplitude periodic wave"},
        {"collide", "collisions of the unperturbed eigenvalues"},
        {"band", "measure an instability band and compare with its prediction"},
        {"spectrum", "Hill eigenvalues at one (ell, xi)"},
        {"scan", "max Re(lambda) over an ell x xi grid"},
    };

    CLI::App app{"Transverse stability of periodic waves in KP-type equations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "kplab 1.0");

    struct Sub {
        CLI::App* app = nullptr;
        std::string name;
        std::string config_path, output_path;
        std::map<std::string, std::string> strings;
        std::map<std::string, std::vector<double>> lists;
        std::map<std::string, bool> flags;
        std::map<std::string, CLI::Option*> options;
    };
    std::vector<Sub> subs(std::size(commands));
    for (std::size_t i = 0; i < subs.size(); ++i) {
        Sub& s = subs[i];
        s.name = commands[i][0];
        s.app = app.add_subcommand(s.name, commands[i][1]);
        s.app->add_option("--config", s.config_path, "JSON config file or a previous kplab output");
        s.app->add_option("-o,--output", s.output_path, "write here instead of stdout");
        const json defaults = command_defaults(s.name);
        for (auto it = defaults.begin(); it != defaults.end(); ++it) {
            const KeySpec& ks = key_spec(it.key());
            std::string help = ks.help;
            if (!it.value().is_null()) help += " [" + dump_string(it.value(), 0) + "]";
            if (ks.type == KeyType::Flag) {
                s.flags[ks.key] = false;
                s.options[ks.key] = s.app->add_flag(ks.flags, s.flags[ks.key], help);
            } else if (s.name == "scan" && ks.key == "xi") {
                s.options[ks.key] = s.app->add_option(ks.flags, s.lists[ks.key], help)->expected(1, -1);
            } else {
                s.options[ks.key] = s.app->add_option(ks.flags, s.strings[ks.key], help);
                // bare --plot sends the SVG to the main output
                if (ks.key == "plot") s.options[ks.key]->expected(0, 1);
            }
        }
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfig;
    }

    Sub* chosen = nullptr;
    for (auto& s : subs)
        if (s.app->parsed()) chosen = &s;
    if (!chosen) return kConfig;

    try {
        json config = command_defaults(chosen->name);
        config["command"] = chosen->name;
        if (!chosen->config_path.empty()) merge_config(config, load_config_file(chosen->config_path));
        for (const auto& [key, opt] : chosen->options) {
            if (opt->count() == 0) continue;
            const KeySpec& ks = key_spec(key);
            switch (ks.type) {
                case KeyType::Flag: config[key] = chosen->flags[key]; break;
                case KeyType::NumberList: config[key] = chosen->lists[key]; break;
                case KeyType::String:
                    if (key == "plot" && chosen->strings[key].empty()) {
                        config[key] = nullptr;
                        config["format"] = "svg";
                    } else {
                        config[key] = chosen->strings[key];
                    }
                    break;
                case KeyType::Integer:
                case KeyType::Number: {
                    if (chosen->lists.count(key)) {
                        config[key] = chosen->lists[key];
                        break;
                    }
                    const std::string& text = chosen->strings[key];
                    std::size_t used = 0;
                    try {
                        if (ks.type == KeyType::Integer) {
                            config[key] = std::stoi(text, &used);
                        } else {
                            config[key] = std::stod(text, &used);
                        }
                    } catch (const std::logic_error&) {
                        used = 0;
                    }
                    if (used != text.size() || text.empty())
                        fail(ErrorKind::InvalidArgument, "bad value '" + text + "' for " + ks.flags);
                    break;
                }
            }
        }
        if (chosen->name == "scan" && config["xi"].is_number()) config["xi"] = json::array({config["xi"]});

        if (!chosen->output_path.empty() && (!chosen->options["format"] || chosen->options["format"]->count() == 0)) {
            const std::string f = format_from_path(chosen->output_path);
            if (!f.empty()) config["format"] = f;
        }

        Output o;
        o.format = detail::get_string(config, "format");
        int code = kOk;
        const std::string& cmd = chosen->name;
        if (cmd == "audit") code = cmd_audit(config, o);
        else if (cmd == "wave") code = cmd_wave(config, o);
        else if (cmd == "collide") code = cmd_collide(config, o);
        else if (cmd == "band") code = cmd_band(config, o, err);
        else if (cmd == "spectrum") code = cmd_spectrum(config, o, err);
        else if (cmd == "scan") code = cmd_scan(config, o);

        if (chosen->output_path.empty()) {
            out << o.body;
        } else {
            std::ofstream f(chosen->output_path, std::ios::binary);
            if (!f) fail(ErrorKind::InvalidArgument, "cannot write '" + chosen->output_path + "'");
            f << o.body;
        }
        return code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kConfig;
    }
}

}  // namespace kplab::cli
