#include "atiqo/pipeline/config.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "atiqo/wigner.hpp"

namespace atiqo::pipeline {

ConfigError::ConfigError(std::string path, const std::string& message)
    : Error(path.empty() ? "config: " + message : "config: " + path + ": " + message)
    , path_(std::move(path))
{
}

std::string to_string(Kind k)
{
    switch (k) {
    case Kind::delta_trace: return "delta_trace";
    case Kind::delta_at_saddles: return "delta_at_saddles";
    case Kind::scaling_sweep: return "scaling_sweep";
    case Kind::wigner_map: return "wigner_map";
    case Kind::entropy_curve: return "entropy_curve";
    case Kind::custom_sweep: return "custom_sweep";
    }
    return "delta_trace";
}

std::string to_string(Format f)
{
    return f == Format::csv ? "csv" : "json";
}

Format format_from_string(const std::string& name)
{
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw InvalidArgument("unknown format '" + name + "' (expected csv or json)");
}

std::size_t levenshtein(const std::string& a, const std::string& b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diag = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t up = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diag = up;
        }
    }
    return row[b.size()];
}

namespace {

const std::vector<std::string> kKinds = {"delta_trace", "delta_at_saddles", "scaling_sweep",
                                         "wigner_map",  "entropy_curve",    "custom_sweep"};

const std::vector<std::string> kSweepPaths = {
    "pulse.E0",      "pulse.omega_L",          "pulse.n_cycles",           "pulse.cep",
    "pulse.t0",      "atom.Ip",                "atom.dipole_scale",        "modes.V",
    "n_atoms",       "numerics.quad_tolerance", "numerics.saddle_tolerance", "numerics.saddle_weight_cutoff",
};

const std::vector<std::string> kIntegerPaths = {"pulse.n_cycles", "n_atoms"};

const std::vector<std::string> kObservables = {"up", "abs_delta", "re_delta", "im_delta", "phi", "n_saddles", "entropy"};

std::string join(const std::string& path, const std::string& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t i)
{
    return path + "[" + std::to_string(i) + "]";
}

std::optional<std::string> suggest(const std::string& key, const std::vector<std::string>& allowed)
{
    std::optional<std::string> best;
    std::size_t best_d = 0;
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        return s;
    };
    for (const auto& a : allowed) {
        const std::size_t d = levenshtein(lower(key), lower(a));
        if (!best || d < best_d) {
            best = a;
            best_d = d;
        }
    }
    if (best && best_d <= std::max<std::size_t>(2, key.size() / 3)) return best;
    return std::nullopt;
}

/// Typed access to one JSON object with strict key checking.
class Reader {
public:
    Reader(const json& j, std::string path, std::vector<std::string> allowed)
        : j_(j)
        , path_(std::move(path))
        , allowed_(std::move(allowed))
    {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
        for (const auto& [key, value] : j_.items()) {
            if (std::find(allowed_.begin(), allowed_.end(), key) != allowed_.end()) continue;
            std::string msg = "unknown key '" + key + "'";
            if (const auto s = suggest(key, allowed_)) msg += "; did you mean '" + *s + "'?";
            throw ConfigError(join(path_, key), msg);
        }
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    const json& raw(const std::string& key) const { return j_.at(key); }
    std::string path(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key, std::optional<double> def = std::nullopt) const
    {
        if (!has(key)) {
            if (def) return *def;
            throw ConfigError(path(key), "missing required number");
        }
        const json& v = j_.at(key);
        if (!v.is_number()) throw ConfigError(path(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(path(key), "must be finite");
        return x;
    }

    long integer(const std::string& key, std::optional<long> def = std::nullopt) const
    {
        if (!has(key)) {
            if (def) return *def;
            throw ConfigError(path(key), "missing required integer");
        }
        const json& v = j_.at(key);
        if (v.is_number_integer()) return v.get<long>();
        if (v.is_number_float()) {
            const double x = v.get<double>();
            if (std::floor(x) == x && std::abs(x) < 9e15) return static_cast<long>(x);
        }
        throw ConfigError(path(key), "expected an integer");
    }

    bool boolean(const std::string& key, bool def) const
    {
        if (!has(key)) return def;
        if (!j_.at(key).is_boolean()) throw ConfigError(path(key), "expected true or false");
        return j_.at(key).get<bool>();
    }

    std::string string(const std::string& key, const std::vector<std::string>& choices,
                       std::optional<std::string> def = std::nullopt) const
    {
        if (!has(key)) {
            if (def) return *def;
            throw ConfigError(path(key), "missing required string");
        }
        if (!j_.at(key).is_string()) throw ConfigError(path(key), "expected a string");
        const std::string s = j_.at(key).get<std::string>();
        if (!choices.empty() && std::find(choices.begin(), choices.end(), s) == choices.end()) {
            std::string msg = "unknown value '" + s + "'";
            if (const auto c = suggest(s, choices)) msg += "; did you mean '" + *c + "'?";
            throw ConfigError(path(key), msg);
        }
        return s;
    }

private:
    const json& j_;
    std::string path_;
    std::vector<std::string> allowed_;
};

/// A list of numbers, or {"from", "to", "count", "scale"}.
std::vector<double> value_list(const json& v, const std::string& path)
{
    std::vector<double> out;
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(indexed(path, i), "expected a number");
            const double x = v[i].get<double>();
            if (!std::isfinite(x)) throw ConfigError(indexed(path, i), "must be finite");
            out.push_back(x);
        }
    } else if (v.is_object()) {
        const Reader r(v, path, {"from", "to", "count", "scale"});
        const double a = r.number("from");
        const double b = r.number("to");
        const long n = r.integer("count");
        const std::string scale = r.string("scale", {"linear", "log"}, "linear");
        if (n < 1) throw ConfigError(r.path("count"), "must be >= 1");
        if (scale == "log" && !(a > 0.0 && b > 0.0)) throw ConfigError(path, "log scale needs positive bounds");
        for (long i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
            out.push_back(scale == "linear" ? a + (b - a) * f : a * std::pow(b / a, f));
        }
    } else {
        throw ConfigError(path, "expected a list of numbers or {from, to, count}");
    }
    if (out.empty()) throw ConfigError(path, "empty value list");
    return out;
}

std::vector<int> int_list(const json& v, const std::string& path)
{
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty list of integers");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer()) throw ConfigError(indexed(path, i), "expected an integer");
        out.push_back(v[i].get<int>());
    }
    return out;
}

json normalize_base(const json& doc)
{
    json base;
    {
        if (!doc.contains("pulse")) throw ConfigError("pulse", "missing required section");
        const Reader r(doc.at("pulse"), "pulse", {"E0", "omega_L", "n_cycles", "cep", "t0"});
        base["pulse"] = {{"E0", r.number("E0")},
                         {"omega_L", r.number("omega_L")},
                         {"n_cycles", r.integer("n_cycles")},
                         {"cep", r.number("cep", 0.0)},
                         {"t0", r.number("t0", 0.0)}};
    }
    {
        const json empty = json::object();
        const Reader r(doc.contains("atom") ? doc.at("atom") : empty, "atom", {"Ip", "dipole_scale", "dipole_form"});
        base["atom"] = {{"Ip", r.number("Ip", 0.5)},
                        {"dipole_scale", r.number("dipole_scale", 1.0)},
                        {"dipole_form", r.string("dipole_form", {"hydrogenic", "gaussian"}, "hydrogenic")}};
    }
    {
        const json empty = json::object();
        const Reader r(doc.contains("modes") ? doc.at("modes") : empty, "modes", {"V", "harmonic_orders"});
        const std::vector<int> orders = r.has("harmonic_orders") ? int_list(r.raw("harmonic_orders"), r.path("harmonic_orders"))
                                                                 : std::vector<int>{1, 2, 3};
        base["modes"] = {{"V", r.number("V", 1e14)}, {"harmonic_orders", orders}};
    }
    {
        const json empty = json::object();
        const NumericsOptions d;
        const Reader r(doc.contains("numerics") ? doc.at("numerics") : empty, "numerics",
                       {"quad_tolerance", "saddle_tolerance", "seeds_per_quarter_cycle", "saddle_weight_cutoff"});
        base["numerics"] = {{"quad_tolerance", r.number("quad_tolerance", d.quad_tolerance)},
                            {"saddle_tolerance", r.number("saddle_tolerance", d.saddle_tolerance)},
                            {"seeds_per_quarter_cycle", r.integer("seeds_per_quarter_cycle", d.seeds_per_quarter_cycle)},
                            {"saddle_weight_cutoff", r.number("saddle_weight_cutoff", d.saddle_weight_cutoff)}};
    }
    return base;
}

void set_path(json& base, const std::string& path, double value)
{
    const auto dot = path.find('.');
    const bool integral = std::find(kIntegerPaths.begin(), kIntegerPaths.end(), path) != kIntegerPaths.end();
    json& slot = dot == std::string::npos ? base[path] : base[path.substr(0, dot)][path.substr(dot + 1)];
    if (integral)
        slot = static_cast<long>(value);
    else
        slot = value;
}

/// "momenta": [...] or "energies_over_Up": [...] with optional "signs".
void normalize_momenta(const Reader& r, json& out, bool required, const std::vector<double>& default_energies)
{
    const bool has_p = r.has("momenta");
    const bool has_e = r.has("energies_over_Up");
    if (has_p && has_e) throw ConfigError(r.path("momenta"), "give either momenta or energies_over_Up, not both");
    if (has_p) {
        out["momenta"] = value_list(r.raw("momenta"), r.path("momenta"));
        if (r.has("signs")) throw ConfigError(r.path("signs"), "signs only apply to energies_over_Up");
        return;
    }
    if (!has_e && required) throw ConfigError(r.path("momenta"), "missing momenta (or energies_over_Up)");
    const auto energies = has_e ? value_list(r.raw("energies_over_Up"), r.path("energies_over_Up")) : default_energies;
    for (std::size_t i = 0; i < energies.size(); ++i)
        if (energies[i] < 0.0) throw ConfigError(indexed(r.path("energies_over_Up"), i), "must be >= 0");
    std::vector<double> signs = {1.0};
    if (r.has("signs")) {
        signs = value_list(r.raw("signs"), r.path("signs"));
        for (std::size_t i = 0; i < signs.size(); ++i)
            if (signs[i] != 1.0 && signs[i] != -1.0) throw ConfigError(indexed(r.path("signs"), i), "must be +1 or -1");
    }
    out["energies_over_Up"] = energies;
    out["signs"] = signs;
}

std::vector<int> orders_param(const Reader& r, const json& base)
{
    const std::vector<int> all = base.at("modes").at("harmonic_orders").get<std::vector<int>>();
    if (!r.has("orders")) return all;
    const auto orders = int_list(r.raw("orders"), r.path("orders"));
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (std::find(all.begin(), all.end(), orders[i]) == all.end())
            throw ConfigError(indexed(r.path("orders"), i), "order " + std::to_string(orders[i]) + " is not in modes.harmonic_orders");
    return orders;
}

json time_param(const Reader& r, const std::string& key)
{
    if (!r.has(key)) return "field_max";
    const json& v = r.raw(key);
    if (v.is_string()) {
        if (v.get<std::string>() != "field_max") throw ConfigError(r.path(key), "expected \"field_max\" or a time in a.u.");
        return v;
    }
    return r.number(key);
}

json normalize_params(Kind kind, const json& doc, const json& base)
{
    const json empty = json::object();
    const json& p = doc.contains("params") ? doc.at("params") : empty;
    json out = json::object();
    switch (kind) {
    case Kind::delta_trace: {
        const Reader r(p, "params", {"momenta", "energies_over_Up", "signs", "orders", "t_prime_from", "t_prime_to", "samples"});
        normalize_momenta(r, out, true, {});
        out["orders"] = orders_param(r, base);
        const double a = r.number("t_prime_from", 0.0);
        const double b = r.number("t_prime_to", 1.0);
        if (!(a >= 0.0 && b <= 1.0 && a < b)) throw ConfigError(r.path("t_prime_from"), "need 0 <= t_prime_from < t_prime_to <= 1 (fractions of the pulse)");
        out["t_prime_from"] = a;
        out["t_prime_to"] = b;
        const long n = r.integer("samples", 201);
        if (n < 2) throw ConfigError(r.path("samples"), "must be >= 2");
        out["samples"] = n;
        break;
    }
    case Kind::delta_at_saddles: {
        const Reader r(p, "params", {"momenta", "energies_over_Up", "signs", "orders"});
        normalize_momenta(r, out, true, {});
        out["orders"] = orders_param(r, base);
        break;
    }
    case Kind::scaling_sweep: {
        const Reader r(p, "params", {"momenta", "energies_over_Up", "signs", "order", "t_prime"});
        normalize_momenta(r, out, false, {1.0});
        const long order = r.integer("order", 1);
        const auto all = base.at("modes").at("harmonic_orders").get<std::vector<int>>();
        if (std::find(all.begin(), all.end(), order) == all.end())
            throw ConfigError(r.path("order"), "order is not in modes.harmonic_orders");
        out["order"] = order;
        out["t_prime"] = time_param(r, "t_prime");
        break;
    }
    case Kind::wigner_map: {
        const Reader r(p, "params",
                       {"momenta", "energies_over_Up", "signs", "strategy", "representation", "x_lo", "x_hi", "y_lo", "y_hi",
                        "center_on_mean", "nx", "ny", "refine", "normalize", "alpha_re", "alpha_im", "quadrature"});
        normalize_momenta(r, out, true, {});
        out["strategy"] = r.string("strategy", {"saddle", "quadrature"}, "saddle");
        out["representation"] = r.string("representation", {"automatic", "pairs", "moments"}, "automatic");
        out["x_lo"] = r.number("x_lo", -4.0);
        out["x_hi"] = r.number("x_hi", 4.0);
        out["y_lo"] = r.number("y_lo", -4.0);
        out["y_hi"] = r.number("y_hi", 4.0);
        if (!(out["x_hi"].get<double>() > out["x_lo"].get<double>())) throw ConfigError(r.path("x_hi"), "must exceed x_lo");
        if (!(out["y_hi"].get<double>() > out["y_lo"].get<double>())) throw ConfigError(r.path("y_hi"), "must exceed y_lo");
        out["center_on_mean"] = r.boolean("center_on_mean", false);
        out["nx"] = r.integer("nx", 40);
        out["ny"] = r.integer("ny", 40);
        if (out["nx"].get<long>() < 2) throw ConfigError(r.path("nx"), "must be >= 2");
        if (out["ny"].get<long>() < 2) throw ConfigError(r.path("ny"), "must be >= 2");
        if (r.has("refine")) {
            const Reader rr(r.raw("refine"), r.path("refine"), {"nx", "ny", "method"});
            const long nx = rr.integer("nx");
            const long ny = rr.integer("ny");
            if (nx < out["nx"].get<long>()) throw ConfigError(rr.path("nx"), "must be >= params.nx");
            if (ny < out["ny"].get<long>()) throw ConfigError(rr.path("ny"), "must be >= params.ny");
            out["refine"] = {{"nx", nx}, {"ny", ny}, {"method", rr.string("method", {"bilinear", "bicubic"}, "bilinear")}};
        } else {
            out["refine"] = nullptr;
        }
        out["normalize"] = r.boolean("normalize", true);
        out["alpha_re"] = r.number("alpha_re", 0.0);
        out["alpha_im"] = r.number("alpha_im", 0.0);
        {
            const Reader q(r.has("quadrature") ? r.raw("quadrature") : empty, r.path("quadrature"),
                           {"coarse_order", "coarse_panels_per_cycle", "max_doublings", "tolerance", "phase_per_panel"});
            const wigner::QuadratureOptions d{};
            out["quadrature"] = {{"coarse_order", q.integer("coarse_order", d.coarse_order)},
                                 {"coarse_panels_per_cycle", q.integer("coarse_panels_per_cycle", d.coarse_panels_per_cycle)},
                                 {"max_doublings", q.integer("max_doublings", d.max_doublings)},
                                 {"tolerance", q.number("tolerance", d.tolerance)},
                                 {"phase_per_panel", q.number("phase_per_panel", d.phase_per_panel)}};
        }
        break;
    }
    case Kind::entropy_curve: {
        const Reader r(p, "params", {"energies_over_Up"});
        out["energies_over_Up"] = r.has("energies_over_Up") ? value_list(r.raw("energies_over_Up"), r.path("energies_over_Up"))
                                                            : value_list(json{{"from", 0.0}, {"to", 2.5}, {"count", 26}}, "");
        for (double e : out["energies_over_Up"].get<std::vector<double>>())
            if (e < 0.0) throw ConfigError(r.path("energies_over_Up"), "energies must be >= 0");
        break;
    }
    case Kind::custom_sweep: {
        const Reader r(p, "params", {"p", "t_prime", "order", "observables"});
        out["p"] = r.number("p");
        out["t_prime"] = time_param(r, "t_prime");
        out["order"] = r.integer("order", 1);
        if (!r.has("observables") || !r.raw("observables").is_array() || r.raw("observables").empty())
            throw ConfigError(r.path("observables"), "expected a non-empty list of observable names");
        std::vector<std::string> obs;
        const json& list = r.raw("observables");
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!list[i].is_string()) throw ConfigError(indexed(r.path("observables"), i), "expected a string");
            const std::string s = list[i].get<std::string>();
            if (std::find(kObservables.begin(), kObservables.end(), s) == kObservables.end()) {
                std::string msg = "unknown observable '" + s + "'";
                if (const auto c = suggest(s, kObservables)) msg += "; did you mean '" + *c + "'?";
                throw ConfigError(indexed(r.path("observables"), i), msg);
            }
            obs.push_back(s);
        }
        out["observables"] = obs;
        break;
    }
    }
    return out;
}

std::string line_column(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

SimConfig build_config(const json& base)
{
    const json& p = base.at("pulse");
    const json& a = base.at("atom");
    const json& m = base.at("modes");
    const json& n = base.at("numerics");
    NumericsOptions opts;
    opts.quad_tolerance = n.at("quad_tolerance").get<double>();
    opts.saddle_tolerance = n.at("saddle_tolerance").get<double>();
    opts.seeds_per_quarter_cycle = n.at("seeds_per_quarter_cycle").get<int>();
    opts.saddle_weight_cutoff = n.at("saddle_weight_cutoff").get<double>();
    return SimConfig(LaserPulse(p.at("E0").get<double>(), p.at("omega_L").get<double>(), p.at("n_cycles").get<int>(),
                                p.at("cep").get<double>(), p.at("t0").get<double>()),
                     AtomModel(a.at("Ip").get<double>(), a.at("dipole_scale").get<double>(),
                               dipole_form_from_string(a.at("dipole_form").get<std::string>())),
                     ModeSet(m.at("V").get<double>(), m.at("harmonic_orders").get<std::vector<int>>()), opts,
                     base.at("n_atoms").get<long>());
}

std::size_t ExperimentSpec::sweep_size() const
{
    std::size_t n = 1;
    for (const auto& ax : sweep) n *= ax.values.size();
    return n;
}

std::vector<double> ExperimentSpec::sweep_values(std::size_t index) const
{
    std::vector<double> out(sweep.size());
    for (std::size_t k = sweep.size(); k-- > 0;) {
        const std::size_t len = sweep[k].values.size();
        out[k] = sweep[k].values[index % len];
        index /= len;
    }
    return out;
}

SimConfig ExperimentSpec::config_at(std::size_t sweep_index) const
{
    json doc = base;
    const auto vals = sweep_values(sweep_index);
    for (std::size_t k = 0; k < sweep.size(); ++k) set_path(doc, sweep[k].path, vals[k]);
    return build_config(doc);
}

SimConfig ExperimentSpec::base_config() const
{
    return build_config(base);
}

ExperimentSpec parse_config(const std::string& text)
{
    json doc;
    const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); });
    if (blank) throw ConfigError("kind", "missing kind (empty document)");
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        const auto pos = what.find("parse error");
        throw ConfigError("", "parse error at " + line_column(text, e.byte) + ": "
                                  + (pos == std::string::npos ? what : what.substr(pos)));
    }
    const Reader top(doc, "", {"kind", "name", "pulse", "atom", "modes", "numerics", "n_atoms", "sweep", "params", "output"});
    if (!top.has("kind")) throw ConfigError("kind", "missing kind");

    ExperimentSpec spec;
    const std::string kind = top.string("kind", kKinds);
    spec.kind = static_cast<Kind>(std::find(kKinds.begin(), kKinds.end(), kind) - kKinds.begin());
    spec.name = top.has("name") ? top.string("name", {}) : kind;
    if (spec.name.empty() || spec.name.find_first_of("/\\") != std::string::npos)
        throw ConfigError("name", "must be a non-empty file-name-safe string");

    spec.base = normalize_base(doc);
    const long n_atoms = top.integer("n_atoms", 1);
    if (n_atoms < 1) throw ConfigError("n_atoms", "must be >= 1");
    spec.base["n_atoms"] = n_atoms;
    try {
        (void)build_config(spec.base);
    } catch (const InvalidArgument& e) {
        throw ConfigError("pulse/atom/modes/numerics", e.what());
    }

    if (top.has("sweep")) {
        const json& sw = top.raw("sweep");
        if (!sw.is_array()) throw ConfigError("sweep", "expected a list of {path, values}");
        for (std::size_t i = 0; i < sw.size(); ++i) {
            const std::string path = indexed("sweep", i);
            const Reader r(sw[i], path, {"path", "values"});
            SweepAxis ax;
            ax.path = r.string("path", kSweepPaths);
            if (!r.has("values")) throw ConfigError(r.path("values"), "missing values");
            ax.values = value_list(r.raw("values"), r.path("values"));
            const bool integral = std::find(kIntegerPaths.begin(), kIntegerPaths.end(), ax.path) != kIntegerPaths.end();
            for (std::size_t k = 0; k < ax.values.size(); ++k) {
                if (integral && std::floor(ax.values[k]) != ax.values[k])
                    throw ConfigError(indexed(r.path("values"), k), ax.path + " takes integers");
                json trial = spec.base;
                set_path(trial, ax.path, ax.values[k]);
                try {
                    (void)build_config(trial);
                } catch (const InvalidArgument& e) {
                    throw ConfigError(indexed(r.path("values"), k), e.what());
                }
            }
            for (const auto& prev : spec.sweep)
                if (prev.path == ax.path) throw ConfigError(r.path("path"), "path swept twice");
            spec.sweep.push_back(std::move(ax));
        }
    }

    spec.params = normalize_params(spec.kind, doc, spec.base);

    {
        const json empty = json::object();
        const Reader r(top.has("output") ? top.raw("output") : empty, "output", {"path", "format"});
        spec.output.path = r.has("path") ? r.string("path", {}) : "out/" + spec.name;
        spec.output.format = format_from_string(r.string("format", {"csv", "json"}, "csv"));
    }
    return spec;
}

json to_json(const ExperimentSpec& spec)
{
    json doc = spec.base;
    doc["kind"] = to_string(spec.kind);
    doc["name"] = spec.name;
    json sw = json::array();
    for (const auto& ax : spec.sweep) sw.push_back({{"path", ax.path}, {"values", ax.values}});
    doc["sweep"] = sw;
    doc["params"] = spec.params;
    doc["output"] = {{"path", spec.output.path}, {"format", to_string(spec.output.format)}};
    return doc;
}

std::string spec_hash(const ExperimentSpec& spec)
{
    json doc = to_json(spec);
    doc.erase("output");
    const std::string text = std::string(kCodeVersion) + "\n" + doc.dump();
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error("spec_hash: SHA-256 failed");
    std::ostringstream hex;
    static const char* digits = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) hex << digits[md[i] >> 4] << digits[md[i] & 15];
    return hex.str();
}

ExperimentSpec with_quad_tolerance(ExperimentSpec spec, double tolerance)
{
    if (!(tolerance > 0.0 && tolerance < 1.0)) throw InvalidArgument("quad tolerance must be in (0, 1)");
    spec.base["numerics"]["quad_tolerance"] = tolerance;
    return spec;
}

}  // namespace atiqo::pipeline
