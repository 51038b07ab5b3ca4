#include "atiqo/pipeline/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <omp.h>

#include "atiqo/entangle.hpp"
#include "atiqo/field.hpp"
#include "atiqo/qo_state.hpp"
#include "atiqo/trajectory.hpp"
#include "atiqo/wigner.hpp"

namespace atiqo::pipeline {

namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Signed momenta of the kind axis, resolved against the pulse of one sweep point.
struct MomentumEntry {
    double p;
    /// Photoelectron energy p^2 / 2 in units of Up.
    double energy_over_Up;
};

std::size_t momentum_count(const json& params)
{
    if (params.contains("momenta")) return params.at("momenta").size();
    return params.at("energies_over_Up").size() * params.at("signs").size();
}

MomentumEntry momentum_at(const json& params, std::size_t k, const LaserPulse& pulse)
{
    const double up = ponderomotive_energy(pulse);
    if (params.contains("momenta")) {
        const double p = params.at("momenta").at(k).get<double>();
        return {p, 0.5 * p * p / up};
    }
    const std::size_t ns = params.at("signs").size();
    const double e = params.at("energies_over_Up").at(k / ns).get<double>();
    const double sign = params.at("signs").at(k % ns).get<double>();
    return {momentum_for_energy(pulse, e, sign), e};
}

double resolve_time(const json& v, const LaserPulse& pulse)
{
    if (v.is_string()) return field::field_maximum_time(pulse);
    const double t = v.get<double>();
    if (t < pulse.t0() || t > pulse.end_time()) throw InvalidArgument("t_prime lies outside the pulse window");
    return t;
}

json delta_row(double p, int order, double t_prime, cplx d, double phi)
{
    return {{"p", p},           {"order", order},           {"t_prime", t_prime}, {"re_delta", d.real()},
            {"im_delta", d.imag()}, {"abs_delta", std::abs(d)}, {"phi", phi}};
}

void eval_delta_trace(const ExperimentSpec& spec, const SimConfig& config, std::size_t k, Record& rec)
{
    const json& prm = spec.params;
    const auto orders = prm.at("orders").get<std::vector<int>>();
    const field::PulseField f(config.pulse());
    const auto m = momentum_at(prm, k / orders.size(), config.pulse());
    const int order = orders[k % orders.size()];
    const auto& pulse = config.pulse();
    const double t = config.measurement_time();
    const auto fr = numerics::linspace(prm.at("t_prime_from").get<double>(), prm.at("t_prime_to").get<double>(),
                                       prm.at("samples").get<std::size_t>());
    for (double x : fr) {
        const double tp = std::min(pulse.t0() + x * pulse.duration(), t);
        const cplx d = qo::delta(f, config, m.p, t, tp, order);
        const double phi = qo::phase_phi(f, config, m.p, t, tp, order);
        rec.rows.push_back(delta_row(m.p, order, tp, d, phi));
    }
}

void eval_delta_at_saddles(const ExperimentSpec& spec, const SimConfig& config, std::size_t k, Record& rec)
{
    const json& prm = spec.params;
    const auto orders = prm.at("orders").get<std::vector<int>>();
    const field::PulseField f(config.pulse());
    const auto m = momentum_at(prm, k, config.pulse());
    const auto set = trajectory::solve_saddles(m.p, config, f);
    const double t = config.measurement_time();
    for (std::size_t s = 0; s < set.saddles.size(); ++s) {
        const auto& sp = set.saddles[s];
        for (int order : orders) {
            const cplx d = qo::delta(f, config, m.p, t, sp.ts.re, order);
            const double phi = qo::phase_phi(f, config, m.p, t, sp.ts.re, order);
            json row = delta_row(m.p, order, sp.ts.re, d, phi);
            row["saddle"] = s;
            row["ts_im"] = sp.ts.im;
            row["residual"] = sp.residual;
            row["A_at_ts_re"] = f.A(sp.ts.re);
            rec.rows.push_back(row);
        }
    }
}

void eval_scaling(const ExperimentSpec& spec, const SimConfig& config, std::size_t k, Record& rec)
{
    const json& prm = spec.params;
    const field::PulseField f(config.pulse());
    const auto m = momentum_at(prm, k, config.pulse());
    const int order = prm.at("order").get<int>();
    const double tp = resolve_time(prm.at("t_prime"), config.pulse());
    const cplx d = qo::delta(f, config, m.p, config.measurement_time(), tp, order);
    rec.rows.push_back({{"up", ponderomotive_energy(config.pulse())},
                        {"energy_over_Up", m.energy_over_Up},
                        {"p", m.p},
                        {"order", order},
                        {"t_prime", tp},
                        {"abs_delta", std::abs(d)},
                        {"re_delta", d.real()},
                        {"im_delta", d.imag()}});
}

wigner::WignerRequest wigner_request(const json& prm, double p, int threads)
{
    wigner::WignerRequest req;
    req.p = p;
    req.x_lo = prm.at("x_lo").get<double>();
    req.x_hi = prm.at("x_hi").get<double>();
    req.y_lo = prm.at("y_lo").get<double>();
    req.y_hi = prm.at("y_hi").get<double>();
    req.center_on_mean = prm.at("center_on_mean").get<bool>();
    req.nx = prm.at("nx").get<std::size_t>();
    req.ny = prm.at("ny").get<std::size_t>();
    req.strategy = wigner::strategy_from_string(prm.at("strategy").get<std::string>());
    req.representation = wigner::representation_from_string(prm.at("representation").get<std::string>());
    if (!prm.at("refine").is_null()) {
        const json& r = prm.at("refine");
        req.refine_to = wigner::RefineSpec{r.at("nx").get<std::size_t>(), r.at("ny").get<std::size_t>(),
                                           r.at("method").get<std::string>() == "bicubic" ? numerics::InterpMethod::bicubic
                                                                                           : numerics::InterpMethod::bilinear};
    }
    req.normalize = prm.at("normalize").get<bool>();
    req.alpha = {prm.at("alpha_re").get<double>(), prm.at("alpha_im").get<double>()};
    req.threads = threads;
    const json& q = prm.at("quadrature");
    req.quadrature.coarse_order = q.at("coarse_order").get<int>();
    req.quadrature.coarse_panels_per_cycle = q.at("coarse_panels_per_cycle").get<int>();
    req.quadrature.max_doublings = q.at("max_doublings").get<int>();
    req.quadrature.tolerance = q.at("tolerance").get<double>();
    req.quadrature.phase_per_panel = q.at("phase_per_panel").get<double>();
    return req;
}

void eval_wigner(const ExperimentSpec& spec, const SimConfig& config, std::size_t k, int threads, Record& rec)
{
    const json& prm = spec.params;
    const auto m = momentum_at(prm, k, config.pulse());
    const auto req = wigner_request(prm, m.p, threads);
    const field::PulseField f(config.pulse());
    const auto nodes = wigner::build_nodes(req, config, f);
    const auto res = wigner::wigner_map(req, nodes);
    rec.rows.push_back({{"p", m.p},
                        {"energy_over_Up", m.energy_over_Up},
                        {"strategy", prm.at("strategy")},
                        {"nodes", res.nodes},
                        {"min_value", res.min_value},
                        {"max_abs", res.max_abs},
                        {"imag_residual", res.imag_residual},
                        {"peak_re", res.peak.real()},
                        {"peak_im", res.peak.imag()},
                        {"centroid_re", res.centroid.real()},
                        {"centroid_im", res.centroid.imag()},
                        {"mean_re", res.mean.real()},
                        {"mean_im", res.mean.imag()},
                        {"integral", res.integral},
                        {"nx", res.grid.nx()},
                        {"ny", res.grid.ny()},
                        {"map_file", spec.name + "_map_" + std::to_string(rec.index) + ".csv"}});
    rec.map = {{"x", res.grid.x_axis()}, {"y", res.grid.y_axis()}, {"values", res.grid.values()}};
}

void eval_entropy(const ExperimentSpec& spec, const SimConfig& config, std::size_t k, Record& rec)
{
    const double e = spec.params.at("energies_over_Up").at(k).get<double>();
    const double p = momentum_for_energy(config.pulse(), e, 1.0);
    const auto r = entangle::report(p, config);
    rec.rows.push_back({{"photoelectron_energy_over_Up", e},
                        {"entropy_bits", r.entropy},
                        {"overlap_mod", r.overlap_mod},
                        {"n_plus_frac", r.n_plus_fraction()}});
}

void eval_custom(const ExperimentSpec& spec, const SimConfig& config, Record& rec)
{
    const json& prm = spec.params;
    const double p = prm.at("p").get<double>();
    const int order = prm.at("order").get<int>();
    const field::PulseField f(config.pulse());
    const double tp = resolve_time(prm.at("t_prime"), config.pulse());
    const double t = config.measurement_time();
    std::optional<cplx> d;
    auto get_delta = [&] {
        if (!d) d = qo::delta(f, config, p, t, tp, order);
        return *d;
    };
    json row;
    for (const auto& name : prm.at("observables")) {
        const std::string o = name.get<std::string>();
        if (o == "up") row[o] = ponderomotive_energy(config.pulse());
        else if (o == "abs_delta") row[o] = std::abs(get_delta());
        else if (o == "re_delta") row[o] = get_delta().real();
        else if (o == "im_delta") row[o] = get_delta().imag();
        else if (o == "phi") row[o] = qo::phase_phi(f, config, p, t, tp, order);
        else if (o == "n_saddles") row[o] = trajectory::solve_saddles(p, config, f).saddles.size();
        else if (o == "entropy") row[o] = entangle::report(std::abs(p), config, f).entropy;
    }
    rec.rows.push_back(row);
}

json record_to_json(const Record& r)
{
    json j = {{"index", r.index}, {"sweep", r.sweep}, {"ok", r.ok},          {"rows", r.rows},
              {"seconds", r.seconds}, {"cached", r.cached}};
    if (!r.ok) j["error"] = r.error;
    if (!r.map.is_null()) j["map"] = r.map;
    return j;
}

Record record_from_json(const json& j)
{
    Record r;
    r.index = j.at("index").get<std::size_t>();
    r.sweep = j.at("sweep").get<std::vector<double>>();
    r.ok = j.at("ok").get<bool>();
    r.rows = j.at("rows");
    r.seconds = j.at("seconds").get<double>();
    r.cached = j.value("cached", false);
    if (j.contains("error")) r.error = j.at("error").get<std::string>();
    if (j.contains("map")) r.map = j.at("map");
    return r;
}

std::optional<Record> load_cached(const fs::path& file, std::size_t index)
{
    std::ifstream in(file);
    if (!in) return std::nullopt;
    try {
        Record r = record_from_json(json::parse(in));
        if (r.index != index || !r.ok) return std::nullopt;
        return r;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

void store_cached(const fs::path& dir, const Record& rec)
{
    const fs::path final_path = dir / (std::to_string(rec.index) + ".json");
    std::ostringstream tmp_name;
    tmp_name << rec.index << ".json.tmp." << omp_get_thread_num();
    const fs::path tmp = dir / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cache: cannot write " + tmp.string());
        out << record_to_json(rec).dump();
        if (!out) throw Error("cache: write failed for " + tmp.string());
    }
    fs::rename(tmp, final_path);
}

}  // namespace

std::size_t ResultEnvelope::failed() const
{
    std::size_t n = 0;
    for (const auto& r : records) n += r.ok ? 0 : 1;
    return n;
}

json to_json(const ResultEnvelope& env)
{
    json records = json::array();
    for (const auto& r : env.records) records.push_back(record_to_json(r));
    return {{"spec_hash", env.spec_hash},
            {"code_version", env.code_version},
            {"kind", to_string(env.kind)},
            {"name", env.name},
            {"columns", env.columns},
            {"records", records},
            {"partial", env.partial},
            {"timing",
             {{"total_seconds", env.timing.total_seconds},
              {"workers", env.timing.workers},
              {"cache_hits", env.timing.cache_hits},
              {"computed", env.timing.computed}}},
            {"spec", env.spec}};
}

ResultEnvelope envelope_from_json(const json& doc)
{
    ResultEnvelope env;
    env.spec_hash = doc.at("spec_hash").get<std::string>();
    env.code_version = doc.at("code_version").get<std::string>();
    const std::string kind = doc.at("kind").get<std::string>();
    bool found = false;
    for (Kind k : {Kind::delta_trace, Kind::delta_at_saddles, Kind::scaling_sweep, Kind::wigner_map, Kind::entropy_curve,
                   Kind::custom_sweep}) {
        if (to_string(k) == kind) {
            env.kind = k;
            found = true;
        }
    }
    if (!found) throw InvalidArgument("envelope: unknown kind '" + kind + "'");
    env.name = doc.at("name").get<std::string>();
    env.columns = doc.at("columns").get<std::vector<std::string>>();
    for (const auto& r : doc.at("records")) env.records.push_back(record_from_json(r));
    env.partial = doc.at("partial").get<bool>();
    const json& t = doc.at("timing");
    env.timing.total_seconds = t.at("total_seconds").get<double>();
    env.timing.workers = t.at("workers").get<int>();
    env.timing.cache_hits = t.at("cache_hits").get<std::size_t>();
    env.timing.computed = t.at("computed").get<std::size_t>();
    env.spec = doc.at("spec");
    return env;
}

int resolve_workers(int requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kWorkersEnv)) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
        throw InvalidArgument(std::string(kWorkersEnv) + " must be a positive integer, got '" + env + "'");
    }
    return std::max(1, omp_get_num_procs());
}

std::vector<std::string> kind_columns(const ExperimentSpec& spec)
{
    switch (spec.kind) {
    case Kind::delta_trace: return {"p", "order", "t_prime", "re_delta", "im_delta", "abs_delta", "phi"};
    case Kind::delta_at_saddles:
        return {"p", "order", "saddle", "t_prime", "ts_im", "residual", "A_at_ts_re", "re_delta", "im_delta", "abs_delta", "phi"};
    case Kind::scaling_sweep:
        return {"up", "energy_over_Up", "p", "order", "t_prime", "abs_delta", "re_delta", "im_delta"};
    case Kind::wigner_map:
        return {"p",       "energy_over_Up", "strategy",    "nodes",       "min_value", "max_abs",
                "imag_residual", "peak_re",  "peak_im",     "centroid_re", "centroid_im", "mean_re",
                "mean_im", "integral",       "nx",          "ny",          "map_file"};
    case Kind::entropy_curve: return {"photoelectron_energy_over_Up", "entropy_bits", "overlap_mod", "n_plus_frac"};
    case Kind::custom_sweep: return spec.params.at("observables").get<std::vector<std::string>>();
    }
    return {};
}

std::size_t kind_points(const ExperimentSpec& spec)
{
    switch (spec.kind) {
    case Kind::delta_trace: return momentum_count(spec.params) * spec.params.at("orders").size();
    case Kind::delta_at_saddles:
    case Kind::scaling_sweep:
    case Kind::wigner_map: return momentum_count(spec.params);
    case Kind::entropy_curve: return spec.params.at("energies_over_Up").size();
    case Kind::custom_sweep: return 1;
    }
    return 1;
}

std::size_t point_count(const ExperimentSpec& spec)
{
    return spec.sweep_size() * kind_points(spec);
}

Record evaluate_point(const ExperimentSpec& spec, std::size_t index, int inner_threads)
{
    const std::size_t per = kind_points(spec);
    const std::size_t sweep_index = index / per;
    const std::size_t k = index % per;
    Record rec;
    rec.index = index;
    rec.sweep = spec.sweep_values(sweep_index);
    const SimConfig config = spec.config_at(sweep_index);
    switch (spec.kind) {
    case Kind::delta_trace: eval_delta_trace(spec, config, k, rec); break;
    case Kind::delta_at_saddles: eval_delta_at_saddles(spec, config, k, rec); break;
    case Kind::scaling_sweep: eval_scaling(spec, config, k, rec); break;
    case Kind::wigner_map: eval_wigner(spec, config, k, inner_threads, rec); break;
    case Kind::entropy_curve: eval_entropy(spec, config, k, rec); break;
    case Kind::custom_sweep: eval_custom(spec, config, rec); break;
    }
    return rec;
}

ResultEnvelope run(const ExperimentSpec& spec, const RunOptions& options)
{
    const auto start = Clock::now();
    ResultEnvelope env;
    env.spec_hash = spec_hash(spec);
    env.code_version = kCodeVersion;
    env.kind = spec.kind;
    env.name = spec.name;
    for (const auto& ax : spec.sweep) env.columns.push_back(ax.path);
    for (const auto& c : kind_columns(spec)) env.columns.push_back(c);
    env.spec = to_json(spec);

    const int workers = resolve_workers(options.workers);
    env.timing.workers = workers;
    const std::size_t n = point_count(spec);
    env.records.resize(n);

    fs::path cache;
    if (options.use_cache) {
        cache = (options.cache_dir ? *options.cache_dir : fs::path(spec.output.path) / ".cache") / env.spec_hash;
        std::error_code ec;
        fs::create_directories(cache, ec);
        if (ec) throw Error("cache: cannot create " + cache.string() + ": " + ec.message());
    }

    // Few points: run them in turn and give every worker to the grid kernels.
    const bool outer = n >= static_cast<std::size_t>(workers);
    const int inner_threads = outer ? 1 : workers;
    omp_set_num_threads(workers);

    std::vector<char> hit(n, 0);
    std::string io_error;
    auto work = [&](std::size_t i) {
        if (options.use_cache && options.resume) {
            if (auto r = load_cached(cache / (std::to_string(i) + ".json"), i)) {
                r->cached = true;
                env.records[i] = std::move(*r);
                hit[i] = 1;
                return;
            }
        }
        const auto t0 = Clock::now();
        Record rec;
        try {
            rec = evaluate_point(spec, i, inner_threads);
        } catch (const std::exception& e) {
            rec = Record{};
            rec.index = i;
            rec.sweep = spec.sweep_values(i / kind_points(spec));
            rec.ok = false;
            rec.error = e.what();
        }
        rec.seconds = seconds_since(t0);
        if (options.use_cache && rec.ok) {
            try {
                store_cached(cache, rec);
            } catch (const std::exception& e) {
#pragma omp critical(atiqo_runner_io)
                io_error = e.what();
            }
        }
        env.records[i] = std::move(rec);
    };

    if (outer) {
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
        for (long i = 0; i < static_cast<long>(n); ++i) work(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) work(i);
    }
    if (!io_error.empty()) throw Error(io_error);

    for (std::size_t i = 0; i < n; ++i) {
        if (hit[i])
            ++env.timing.cache_hits;
        else
            ++env.timing.computed;
    }
    env.partial = env.failed() > 0;
    env.timing.total_seconds = seconds_since(start);
    return env;
}

}  // namespace atiqo::pipeline
