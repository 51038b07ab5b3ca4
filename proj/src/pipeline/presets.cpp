#include "atiqo/pipeline/presets.hpp"

#include <algorithm>

namespace atiqo::pipeline {

namespace {

json near_ir_pulse()
{
    return {{"E0", 0.053}, {"omega_L", 0.057}, {"n_cycles", 5}};
}

json mid_ir_pulse(double omega)
{
    return {{"E0", 0.106}, {"omega_L", omega}, {"n_cycles", 5}};
}

json common(const std::string& kind, const std::string& name, json pulse)
{
    return {{"kind", kind},
            {"name", name},
            {"pulse", std::move(pulse)},
            {"atom", {{"Ip", 0.5}}},
            {"modes", {{"V", 1e14}, {"harmonic_orders", {1, 2, 3}}}}};
}

json range(double from, double to, int count)
{
    return {{"from", from}, {"to", to}, {"count", count}};
}

json build(const std::string& name, bool reduced)
{
    if (name == "fig1") {
        json doc = common("delta_trace", name, near_ir_pulse());
        doc["params"] = {{"momenta", {0.43, -0.43}}, {"t_prime_from", 0.0}, {"t_prime_to", 1.0}, {"samples", reduced ? 41 : 201}};
        return doc;
    }
    if (name == "fig2") {
        json doc = common("delta_at_saddles", name, near_ir_pulse());
        doc["params"] = {{"momenta", {0.43, 0.0, -0.43}}};
        return doc;
    }
    if (name == "fig3a") {
        json doc = common("scaling_sweep", name, mid_ir_pulse(0.010));
        doc["sweep"] = {{{"path", "pulse.E0"}, {"values", {0.053, 0.079, 0.106}}},
                        {{"path", "pulse.omega_L"}, {"values", range(0.009, 0.05, reduced ? 5 : 12)}}};
        doc["params"] = {{"energies_over_Up", {1.0}}, {"order", 1}, {"t_prime", "field_max"}};
        return doc;
    }
    if (name == "fig3b") {
        json doc = common("scaling_sweep", name, mid_ir_pulse(0.010));
        doc["sweep"] = {{{"path", "pulse.omega_L"}, {"values", {0.011, 0.010, 0.009}}},
                        {{"path", "pulse.E0"}, {"values", range(0.03, 0.14, reduced ? 5 : 12)}}};
        doc["params"] = {{"energies_over_Up", {1.0}}, {"order", 1}, {"t_prime", "field_max"}};
        return doc;
    }
    if (name == "fig3c") {
        json doc = common("scaling_sweep", name, mid_ir_pulse(0.010));
        doc["params"] = {{"energies_over_Up", range(0.0, 2.5, reduced ? 6 : 26)}, {"order", 1}, {"t_prime", "field_max"}};
        return doc;
    }
    if (name == "fig4") {
        json doc = common("wigner_map", name, mid_ir_pulse(0.009));
        const int n = reduced ? 16 : 40;
        doc["params"] = {{"energies_over_Up", {2.2}},
                         {"signs", {1, -1}},
                         {"strategy", "saddle"},
                         {"center_on_mean", true},
                         {"x_lo", -4.0},
                         {"x_hi", 4.0},
                         {"y_lo", -4.0},
                         {"y_hi", 4.0},
                         {"nx", n},
                         {"ny", n},
                         {"normalize", true}};
        return doc;
    }
    if (name == "fig5") {
        json doc = common("wigner_map", name, near_ir_pulse());
        doc["sweep"] = {{{"path", "n_atoms"}, {"values", {1e4, 2e4}}}};
        const int nx = reduced ? 10 : 20;
        const int ny = reduced ? 20 : 40;
        const int refine = reduced ? 50 : 500;
        doc["params"] = {{"momenta", {0.0, 0.43, -0.43}},
                         {"strategy", "quadrature"},
                         {"x_lo", -5.0},
                         {"x_hi", 5.0},
                         {"y_lo", -5.0},
                         {"y_hi", 5.0},
                         {"nx", nx},
                         {"ny", ny},
                         {"refine", {{"nx", refine}, {"ny", refine}, {"method", "bicubic"}}},
                         {"normalize", true}};
        return doc;
    }
    if (name == "fig6") {
        json doc = common("entropy_curve", name, mid_ir_pulse(0.010));
        doc["sweep"] = {{{"path", "pulse.omega_L"}, {"values", {0.009, 0.010, 0.011}}}};
        doc["params"] = {{"energies_over_Up", range(0.0, 2.5, reduced ? 11 : 26)}};
        return doc;
    }
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw InvalidArgument("unknown preset '" + name + "' (known: " + known + ", fig3)");
}

}  // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names = {"fig1", "fig2", "fig3a", "fig3b", "fig3c", "fig4", "fig5", "fig6"};
    return names;
}

std::string preset_document(const std::string& name, bool reduced)
{
    return build(name, reduced).dump(2) + "\n";
}

ExperimentSpec preset(const std::string& name, bool reduced)
{
    return parse_config(preset_document(name, reduced));
}

std::vector<ExperimentSpec> preset_group(const std::string& name, bool reduced)
{
    std::vector<ExperimentSpec> out;
    if (name == "fig3") {
        for (const char* member : {"fig3a", "fig3b", "fig3c"}) out.push_back(preset(member, reduced));
        return out;
    }
    out.push_back(preset(name, reduced));
    return out;
}

}  // namespace atiqo::pipeline
