#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "atiqo/entangle.hpp"
#include "atiqo/pipeline/config.hpp"
#include "atiqo/pipeline/emit.hpp"
#include "atiqo/pipeline/presets.hpp"
#include "atiqo/pipeline/runner.hpp"
#include "atiqo/qo_state.hpp"
#include "atiqo/wigner.hpp"

using namespace atiqo;
using namespace atiqo::pipeline;

namespace {

struct RunFlags {
    int workers = 0;
    std::string format;
    bool resume = false;
    double tolerance = 0.0;
    std::string out;
};

void add_run_flags(CLI::App* app, RunFlags& flags)
{
    app->add_option("--workers", flags.workers, "Worker threads (default: $ATIQO_WORKERS, then all cores)")
        ->check(CLI::PositiveNumber);
    app->add_option("--format", flags.format, "Output format, overrides the config")->check(CLI::IsMember({"csv", "json"}));
    app->add_flag("--resume", flags.resume, "Reuse cached points from an earlier run");
    app->add_option("--tolerance", flags.tolerance, "Override numerics.quad_tolerance")->check(CLI::Range(0.0, 1.0));
    app->add_option("--out", flags.out, "Output directory, overrides the config");
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_spec(ExperimentSpec spec, const RunFlags& flags)
{
    if (flags.tolerance > 0.0) spec = with_quad_tolerance(std::move(spec), flags.tolerance);
    if (!flags.out.empty()) spec.output.path = flags.out;
    if (!flags.format.empty()) spec.output.format = format_from_string(flags.format);
    RunOptions opts;
    opts.workers = flags.workers;
    opts.resume = flags.resume;
    const auto env = run(spec, opts);
    const auto files = emit(env, spec.output.format, spec.output.path);
    std::printf("%s: %zu points (%zu computed, %zu cached, %zu failed) with %d workers in %.2f s -> %s\n",
                spec.name.c_str(), env.records.size(), env.timing.computed, env.timing.cache_hits, env.failed(),
                env.timing.workers, env.timing.total_seconds, files.front().string().c_str());
    for (const auto& r : env.records)
        if (!r.ok) std::fprintf(stderr, "  point %zu failed: %s\n", r.index, r.error.c_str());
    return env.partial ? 1 : 0;
}

int validate(const std::string& path)
{
    const auto spec = parse_config(read_file(path));
    std::printf("ok: kind %s, name %s, %zu sweep combinations, %zu points, hash %s\n", to_string(spec.kind).c_str(),
                spec.name.c_str(), spec.sweep_size(), point_count(spec), spec_hash(spec).c_str());
    for (std::size_t i = 0; i < spec.sweep_size(); ++i) {
        for (const auto& w : validate_regime(spec.config_at(i)))
            std::printf("warning (sweep point %zu): %s: %s\n", i, w.code.c_str(), w.message.c_str());
    }
    return 0;
}

struct Check {
    std::string name;
    double value;
    double limit;
};

int crosscheck(const std::string& suite, int points, unsigned seed)
{
    std::vector<Check> checks;
    std::mt19937_64 rng(seed);
    if (suite == "all" || suite == "oracles") {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double np = u(rng);
            const double o = u(rng);
            entangle::EntanglementReport r = entangle::report_from_overlap(np, 1.0 - np, std::polar(o, 2.0 * kPi * u(rng)));
            worst = std::max(worst, entangle::eigenvalue_crosscheck(r));
        }
        checks.push_back({"eigenvalue forms (1000 random inputs)", worst, 1e-12});

        const SimConfig cfg(LaserPulse(0.053, 0.057, 5), AtomModel(0.5));
        const field::PulseField f(cfg.pulse());
        double dev = 0.0;
        for (double tp : {30.0, 120.0, 250.0}) {
            const double a = qo::phase_phi(f, cfg, 0.43, cfg.measurement_time(), tp, 1);
            const double b = qo::phase_phi_nested(f, cfg, 0.43, cfg.measurement_time(), tp, 1, qo::NestedOrder::t1_outer).real();
            dev = std::max(dev, std::abs(a - b) / std::abs(b));
        }
        checks.push_back({"phi closed inner vs nested quadrature (relative)", dev, 1e-8});

        const auto vac = wigner::vacuum_nodes();
        double vdev = 0.0;
        std::normal_distribution<double> g(0.0, 1.0);
        for (int i = 0; i < 50; ++i) {
            const cplx b{g(rng), g(rng)};
            vdev = std::max(vdev, std::abs(wigner::evaluate_reference(vac, b) - 2.0 / kPi * std::exp(-2.0 * std::norm(b))));
        }
        checks.push_back({"vacuum Wigner vs (2/pi) exp(-2|b|^2)", vdev, 1e-9});
    }
    if (suite == "all" || suite == "strategy") {
        const LaserPulse pulse(0.106, 0.009, 5);
        const SimConfig cfg(pulse, AtomModel(0.5));
        const double p = momentum_for_energy(pulse, 2.2, 1.0);
        const auto branch = qo::build_branch(p, cfg);
        const auto nodes = wigner::saddle_nodes(branch);
        const cplx mean = wigner::make_model(nodes)->mean();
        std::normal_distribution<double> g(0.0, 0.5);
        std::vector<cplx> pts;
        for (int i = 0; i < points; ++i) pts.push_back(mean + cplx{g(rng), g(rng)});
        checks.push_back({"saddle vs quadrature Wigner (relative to max)", wigner::strategy_crosscheck(branch, pts, cfg), 0.15});
    }
    int failed = 0;
    for (const auto& c : checks) {
        const bool ok = c.value <= c.limit;
        failed += ok ? 0 : 1;
        std::printf("%s  %-52s %.3e (limit %.1e)\n", ok ? "PASS" : "FAIL", c.name.c_str(), c.value, c.limit);
    }
    return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quantum-optical ATI simulator"};
    app.require_subcommand(1);

    RunFlags run_flags;
    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "Run an experiment config");
    run_cmd->add_option("config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
    add_run_flags(run_cmd, run_flags);

    RunFlags preset_flags;
    std::string preset_name;
    bool reduced = false;
    bool print_only = false;
    auto* preset_cmd = app.add_subcommand("preset", "Run a figure preset");
    std::vector<std::string> names = preset_names();
    names.push_back("fig3");
    preset_cmd->add_option("name", preset_name, "Preset name")->required()->check(CLI::IsMember(names));
    preset_cmd->add_flag("--reduced", reduced, "Reduced grid density");
    preset_cmd->add_flag("--print", print_only, "Print the preset config instead of running it");
    add_run_flags(preset_cmd, preset_flags);

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a config without running it");
    validate_cmd->add_option("config", validate_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);

    std::string suite = "all";
    int points = 20;
    unsigned seed = 7;
    auto* cross_cmd = app.add_subcommand("crosscheck", "Strategy and oracle cross-checks");
    cross_cmd->add_option("--suite", suite, "all, oracles or strategy")->check(CLI::IsMember({"all", "oracles", "strategy"}));
    cross_cmd->add_option("--points", points, "Random Wigner sample points")->check(CLI::PositiveNumber);
    cross_cmd->add_option("--seed", seed, "RNG seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) return run_spec(parse_config(read_file(config_path)), run_flags);
        if (*preset_cmd) {
            if (print_only) {
                if (preset_name == "fig3") {
                    for (const char* m : {"fig3a", "fig3b", "fig3c"}) std::cout << preset_document(m, reduced);
                } else {
                    std::cout << preset_document(preset_name, reduced);
                }
                return 0;
            }
            int status = 0;
            for (auto& spec : preset_group(preset_name, reduced)) {
                RunFlags f = preset_flags;
                if (!f.out.empty()) f.out = (std::filesystem::path(f.out) / spec.name).string();
                status = std::max(status, run_spec(std::move(spec), f));
            }
            return status;
        }
        if (*validate_cmd) return validate(validate_path);
        if (*cross_cmd) return crosscheck(suite, points, seed);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
