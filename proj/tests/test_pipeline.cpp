#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "atiqo/pipeline/config.hpp"
#include "atiqo/pipeline/emit.hpp"
#include "atiqo/pipeline/presets.hpp"
#include "atiqo/pipeline/runner.hpp"

using namespace atiqo;
using namespace atiqo::pipeline;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& tag)
{
    const fs::path dir = fs::temp_directory_path() / ("atiqo_test_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string error_of(const std::string& text)
{
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kSmallWigner = R"({
  "kind": "wigner_map", "name": "small",
  "pulse": {"E0": 0.106, "omega_L": 0.009, "n_cycles": 5},
  "params": {"energies_over_Up": [2.2], "signs": [1, -1], "nx": 12, "ny": 10, "center_on_mean": true,
             "refine": {"nx": 30, "ny": 25}}
})";

}  // namespace

TEST_CASE("fig1 preset document parses to the near-infrared pulse")
{
    const auto spec = preset("fig1");
    const auto cfg = spec.base_config();
    CHECK(cfg.pulse().omega() == 0.057);
    CHECK(cfg.pulse().E0() == 0.053);
    CHECK(cfg.pulse().n_cycles() == 5);
    CHECK(cfg.atom().Ip() == 0.5);
    CHECK(spec.kind == Kind::delta_trace);
}

TEST_CASE("every preset parses")
{
    for (const auto& name : preset_names()) {
        CHECK_NOTHROW(preset(name));
        CHECK_NOTHROW(preset(name, true));
    }
    CHECK(preset_group("fig3").size() == 3);
    CHECK_THROWS_AS(preset("fig9"), InvalidArgument);
}

TEST_CASE("strict parse errors")
{
    CHECK(error_of("").find("missing kind") != std::string::npos);
    CHECK(error_of("{}").find("missing kind") != std::string::npos);

    const std::string e = error_of(R"({"kind": "delta_trace", "pulse": {"E0": 0.05, "omegaL": 0.057, "n_cycles": 5},
                                       "params": {"momenta": [0.4]}})");
    CHECK(e.find("pulse.omegaL") != std::string::npos);
    CHECK(e.find("did you mean 'omega_L'") != std::string::npos);

    const std::string p = error_of("{\n  \"kind\": \"delta_trace\",\n  \"pulse\": {\"E0\": 0.05,,}\n}");
    CHECK(p.find("line 3") != std::string::npos);
    CHECK(p.find("column") != std::string::npos);

    const std::string t = error_of(R"({"kind": "delta_trace", "pulse": {"E0": "big", "omega_L": 0.057, "n_cycles": 5}})");
    CHECK(t.find("pulse.E0") != std::string::npos);

    const std::string k = error_of(R"({"kind": "wigner_mpa"})");
    CHECK(k.find("did you mean 'wigner_map'") != std::string::npos);

    const std::string s = error_of(R"({"kind": "entropy_curve", "pulse": {"E0": 0.1, "omega_L": 0.01, "n_cycles": 5},
                                       "sweep": [{"path": "pulse.omega", "values": [0.01]}]})");
    CHECK(s.find("sweep[0].path") != std::string::npos);
    CHECK(s.find("pulse.omega_L") != std::string::npos);

    const std::string v = error_of(R"({"kind": "entropy_curve", "pulse": {"E0": 0.1, "omega_L": 0.01, "n_cycles": 5},
                                       "sweep": [{"path": "pulse.omega_L", "values": [0.01, -0.01]}]})");
    CHECK(v.find("sweep[0].values[1]") != std::string::npos);

    const std::string m = error_of(R"({"kind": "delta_trace", "pulse": {"E0": 0.05, "omega_L": 0.057, "n_cycles": 5}})");
    CHECK(m.find("params.momenta") != std::string::npos);

    const std::string o = error_of(R"({"kind": "delta_trace", "pulse": {"E0": 0.05, "omega_L": 0.057, "n_cycles": 5},
                                       "params": {"momenta": [0.4], "orders": [1, 4]}})");
    CHECK(o.find("params.orders[1]") != std::string::npos);
}

TEST_CASE("canonical document round-trips and the hash ignores the output section")
{
    for (const auto& name : preset_names()) {
        const auto spec = preset(name);
        const auto again = parse_config(to_json(spec).dump());
        CHECK(to_json(again) == to_json(spec));
        CHECK(spec_hash(again) == spec_hash(spec));
    }
    auto spec = preset("fig6");
    const std::string h = spec_hash(spec);
    CHECK(h.size() == 64);
    spec.output.path = "elsewhere";
    CHECK(spec_hash(spec) == h);
    CHECK(spec_hash(with_quad_tolerance(spec, 1e-8)) != h);
}

TEST_CASE("levenshtein")
{
    CHECK(levenshtein("omegaL", "omega_L") == 1);
    CHECK(levenshtein("", "abc") == 3);
    CHECK(levenshtein("kitten", "sitting") == 3);
}

TEST_CASE("scaling sweep record count is the cartesian product")
{
    const auto spec = preset("fig3a");
    RunOptions opts;
    opts.workers = 2;
    opts.cache_dir = scratch("fig3a");
    const auto env = run(spec, opts);
    CHECK(env.records.size() == 3 * 12);
    CHECK(!env.partial);
    CHECK(env.columns[0] == "pulse.E0");
    CHECK(env.columns[1] == "pulse.omega_L");
    fs::remove_all(*opts.cache_dir);
}

TEST_CASE("worker count resolution")
{
    CHECK(resolve_workers(5) == 5);
    setenv(kWorkersEnv, "3", 1);
    CHECK(resolve_workers(0) == 3);
    CHECK(resolve_workers(2) == 2);
    setenv(kWorkersEnv, "many", 1);
    CHECK_THROWS_AS(resolve_workers(0), InvalidArgument);
    unsetenv(kWorkersEnv);
    CHECK(resolve_workers(0) >= 1);
}

TEST_CASE("cache resume and cache correctness")
{
    const auto spec = preset("fig6", true);
    const fs::path dir = scratch("cache");
    RunOptions opts;
    opts.workers = 2;
    opts.cache_dir = dir;
    const auto first = run(spec, opts);
    CHECK(first.timing.computed == first.records.size());

    opts.resume = true;
    const auto second = run(spec, opts);
    CHECK(second.timing.cache_hits == second.records.size());
    CHECK(second.timing.computed == 0);
    CHECK(csv_text(second) == csv_text(first));

    // Remove a few cache entries: only those are recomputed.
    fs::remove(dir / first.spec_hash / "0.json");
    fs::remove(dir / first.spec_hash / "7.json");
    const auto third = run(spec, opts);
    CHECK(third.timing.computed == 2);

    // Fresh evaluation of a 5% sample against the cached values.
    const std::size_t n = first.records.size();
    for (std::size_t i = 0; i < n; i += 20) {
        const Record fresh = evaluate_point(spec, i);
        const auto& cached = second.records[i];
        REQUIRE(cached.cached);
        for (const auto& col : kind_columns(spec)) {
            const double a = fresh.rows[0].at(col).get<double>();
            const double b = cached.rows[0].at(col).get<double>();
            CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("csv bodies do not depend on the worker count")
{
    for (const char* name : {"fig1", "fig6"}) {
        const auto spec = preset(name, true);
        std::string ref;
        for (int w : {1, 4, 8}) {
            RunOptions opts;
            opts.workers = w;
            opts.use_cache = false;
            const std::string text = csv_text(run(spec, opts));
            if (ref.empty())
                ref = text;
            else
                CHECK(text == ref);
        }
    }
}

TEST_CASE("entropy curve columns")
{
    const auto spec = preset("fig6", true);
    CHECK(kind_columns(spec)
          == std::vector<std::string>{"photoelectron_energy_over_Up", "entropy_bits", "overlap_mod", "n_plus_frac"});
}

TEST_CASE("wigner output: matrix files match the refined grid, json round-trips")
{
    const auto spec = parse_config(kSmallWigner);
    RunOptions opts;
    opts.workers = 1;
    opts.use_cache = false;
    const auto env = run(spec, opts);
    REQUIRE(!env.partial);
    const fs::path dir = scratch("emit");
    const auto files = emit(env, Format::csv, dir);
    REQUIRE(files.size() == 3);

    std::ifstream in(files[1]);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 26);
    CHECK(lines[0].front() == ',');
    CHECK(std::count(lines[0].begin(), lines[0].end(), ',') == 30);
    CHECK(std::count(lines[1].begin(), lines[1].end(), ',') == 30);

    const auto jfiles = emit(env, Format::json, dir);
    std::ifstream jin(jfiles[0]);
    const auto back = envelope_from_json(json::parse(jin));
    CHECK(to_json(back) == to_json(env));
    fs::remove_all(dir);
}

TEST_CASE("csv metadata and number format")
{
    const auto spec = preset("fig2");
    RunOptions opts;
    opts.workers = 1;
    opts.use_cache = false;
    const auto env = run(spec, opts);
    const std::string text = csv_text(env);
    CHECK(text.rfind("# atiqo ", 0) == 0);
    CHECK(text.find("# spec_hash: " + env.spec_hash) != std::string::npos);
    CHECK(text.find("# units:") != std::string::npos);
    CHECK(text.find("# status: complete") != std::string::npos);
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("per-point failures are recorded and the run continues")
{
    const auto spec = parse_config(R"({
      "kind": "custom_sweep", "name": "mixed",
      "pulse": {"E0": 0.053, "omega_L": 0.057, "n_cycles": 5},
      "sweep": [{"path": "pulse.omega_L", "values": [0.057, 0.5]}],
      "params": {"p": 0.43, "t_prime": 500.0, "observables": ["up", "abs_delta", "n_saddles"]}
    })");
    RunOptions opts;
    opts.workers = 1;
    opts.use_cache = false;
    const auto env = run(spec, opts);
    REQUIRE(env.records.size() == 2);
    CHECK(env.records[0].ok);
    CHECK(!env.records[1].ok);
    CHECK(env.partial);
    const std::string text = csv_text(env);
    CHECK(text.find("# status: partial") != std::string::npos);
    CHECK(text.find("# error: point 1") != std::string::npos);
}
