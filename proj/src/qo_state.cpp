#include "atiqo/qo_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "atiqo/numerics.hpp"
#include "atiqo/sfa.hpp"

namespace atiqo::qo {

namespace {

const cplx I{0.0, 1.0};

numerics::QuadratureSpec mode_spec(const SimConfig& config, double a, double b, double omega_n)
{
    numerics::QuadratureSpec spec;
    spec.rel_tol = config.numerics().quad_tolerance;
    spec.abs_tol = 1e-12;
    const double periods = std::abs(b - a) * omega_n / (2.0 * kPi);
    spec.initial_panels = std::max(1, static_cast<int>(std::ceil(8.0 * periods)));
    spec.max_subdivisions = spec.initial_panels + 4000;
    return spec;
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Largest magnitude any single term of the sum reaches on [0, s_max].
double term_scale(const field::ExpPoly& e, double s_max)
{
    double total = 0.0;
    for (const auto& b : e.blocks()) {
        double pw = 1.0;
        for (const cplx& c : b.poly) {
            total += std::abs(c) * pw;
            pw *= s_max;
        }
    }
    return total;
}

void check_order(const SimConfig& config, int order)
{
    if (!config.modes().contains(order)) throw InvalidArgument("harmonic order " + std::to_string(order) + " is not in the mode set");
}

}  // namespace

double mode_prefactor(double omega_n, double V)
{
    return std::sqrt(2.0 * kPi * omega_n / V);
}

cplx delta(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime, int order)
{
    check_order(config, order);
    if (t == t_prime) return {};
    const double w = order * config.pulse().omega();
    const auto r = numerics::integrate_1d(
        [&](double tau) { return trajectory::displacement(f, p, tau, t_prime) * std::exp(I * (w * tau)); }, t_prime, t,
        mode_spec(config, t_prime, t, w));
    return -mode_prefactor(w, config.modes().V()) * r.value;
}

cplx delta(double p, double t, double t_prime, int order, const SimConfig& config)
{
    return delta(field::PulseField(config.pulse()), config, p, t, t_prime, order);
}

double phase_phi(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime, int order)
{
    check_order(config, order);
    if (t == t_prime) return 0.0;
    const auto& pulse = config.pulse();
    if (t < pulse.t0() || t > pulse.end_time() || t_prime < pulse.t0() || t_prime > pulse.end_time())
        throw InvalidArgument("phase_phi: times must lie inside the pulse window");
    const double w = order * pulse.omega();
    const double sp = t_prime - pulse.t0();

    // Delta r(p, t2, t') in local time s = t2 - t0, then
    // G(s) = int_0^s Delta r e^{-i w s}; F(t1) = e^{-i w t0} (G(s1) - G(s')).
    using field::ExpPoly;
    const ExpPoly dr = ExpPoly::monomial(p, 1, 0.0) + f.A_integral_poly()
                     + ExpPoly::constant(-p * sp - f.A_integral_poly().real_at(sp));
    const ExpPoly g = dr.modulated(-w).antiderivative();
    const cplx g0 = g(sp);

    // G(s1) - G(s') cancels between terms of size up to term_scale(G), which
    // sets the noise floor of the outer integrand.
    auto spec = mode_spec(config, t_prime, t, w);
    const double len = t - t_prime;
    const double dr_scale = std::abs(p) * len + 2.0 * term_scale(f.A_integral_poly(), pulse.duration());
    spec.abs_tol = std::max(spec.abs_tol, 1e3 * kEps * term_scale(g, pulse.duration()) * dr_scale * len);

    const auto r = numerics::integrate_1d(
        [&](double t1) {
            const double s1 = t1 - pulse.t0();
            const double inner = (std::exp(I * (w * s1)) * (g(s1) - g0)).imag();
            return cplx{trajectory::displacement(f, p, t1, t_prime) * inner, 0.0};
        },
        t_prime, t, spec);
    const double pref = mode_prefactor(w, config.modes().V());
    return pref * pref * r.value.real();
}

double phase_phi(double p, double t, double t_prime, int order, const SimConfig& config)
{
    return phase_phi(field::PulseField(config.pulse()), config, p, t, t_prime, order);
}

namespace {

struct LocalTimes {
    double s;
    double sp;
};

LocalTimes local_window(const SimConfig& config, double t, double t_prime, const char* who)
{
    const auto& pulse = config.pulse();
    if (t < pulse.t0() || t > pulse.end_time() || t_prime < pulse.t0() || t_prime > pulse.end_time())
        throw InvalidArgument(std::string(who) + ": times must lie inside the pulse window");
    return {t - pulse.t0(), t_prime - pulse.t0()};
}

field::ExpPoly local_displacement(const field::PulseField& f, double p, double sp)
{
    using field::ExpPoly;
    return ExpPoly::monomial(p, 1, 0.0) + f.A_integral_poly() + ExpPoly::constant(-p * sp - f.A_integral_poly().real_at(sp));
}

}  // namespace

cplx delta_closed_form(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime, int order)
{
    check_order(config, order);
    if (t == t_prime) return {};
    const auto [s, sp] = local_window(config, t, t_prime, "delta_closed_form");
    const double w = order * config.pulse().omega();
    const auto g = local_displacement(f, p, sp).modulated(w).antiderivative();
    const cplx phase = std::exp(I * (w * config.pulse().t0()));
    return -mode_prefactor(w, config.modes().V()) * phase * (g(s) - g(sp));
}

double phase_phi_closed_form(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime,
                             int order)
{
    check_order(config, order);
    if (t == t_prime) return 0.0;
    const auto [s, sp] = local_window(config, t, t_prime, "phase_phi_closed_form");
    const double w = order * config.pulse().omega();
    using field::ExpPoly;
    const ExpPoly dr = local_displacement(f, p, sp);
    const ExpPoly g = dr.modulated(-w).antiderivative();
    const ExpPoly inner = g.modulated(w) - ExpPoly::monomial(g(sp), 0, w);
    const ExpPoly h = (dr * inner).antiderivative();
    const double pref = mode_prefactor(w, config.modes().V());
    return pref * pref * (h(s) - h(sp)).imag();
}

cplx phase_phi_nested(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime,
                      int order, NestedOrder nesting)
{
    check_order(config, order);
    if (t == t_prime) return {};
    const double w = order * config.pulse().omega();
    auto kernel = [&](double t1, double t2) {
        return trajectory::displacement(f, p, t1, t_prime) * trajectory::displacement(f, p, t2, t_prime)
             * std::sin(w * (t1 - t2));
    };
    const auto outer_spec = mode_spec(config, t_prime, t, w);
    auto inner_spec = [&](double a, double b) { return mode_spec(config, a, b, w); };

    numerics::QuadResult r;
    if (nesting == NestedOrder::t1_outer) {
        r = numerics::integrate_1d(
            [&](double t1) {
                if (t1 == t_prime) return cplx{};
                return numerics::integrate_1d([&](double t2) { return cplx{kernel(t1, t2), 0.0}; }, t_prime, t1,
                                              inner_spec(t_prime, t1))
                    .value;
            },
            t_prime, t, outer_spec);
    } else {
        r = numerics::integrate_1d(
            [&](double t2) {
                if (t2 == t) return cplx{};
                return numerics::integrate_1d([&](double t1) { return cplx{kernel(t1, t2), 0.0}; }, t2, t,
                                              inner_spec(t2, t))
                    .value;
            },
            t_prime, t, outer_spec);
    }
    const double pref = mode_prefactor(w, config.modes().V());
    return pref * pref * r.value;
}

std::vector<ModeAmplitude> mode_amplitudes(const field::PulseField& f, const SimConfig& config, double p,
                                           double t_prime, ModeMethod method)
{
    const double t = config.measurement_time();
    const double n = static_cast<double>(config.n_atoms());
    std::vector<ModeAmplitude> out;
    out.reserve(config.modes().orders().size());
    for (int order : config.modes().orders()) {
        const bool exact = method == ModeMethod::closed_form;
        const cplx d = exact ? delta_closed_form(f, config, p, t, t_prime, order) : delta(f, config, p, t, t_prime, order);
        const double ph = exact ? phase_phi_closed_form(f, config, p, t, t_prime, order)
                                : phase_phi(f, config, p, t, t_prime, order);
        out.push_back({order, n * d, n * n * ph});
    }
    return out;
}

std::size_t QOBranch::fundamental_index() const
{
    const auto it = std::find(orders.begin(), orders.end(), 1);
    if (it == orders.end()) throw InvalidArgument("QOBranch: mode set has no fundamental");
    return static_cast<std::size_t>(it - orders.begin());
}

QOBranch build_branch(double p_signed, const SimConfig& config, const field::PulseField& f)
{
    QOBranch b;
    b.p = p_signed;
    b.n_atoms = config.n_atoms();
    b.orders = config.modes().orders();
    const auto saddles = trajectory::solve_saddles(p_signed, config, f);
    for (const auto& sp : saddles.saddles) {
        BranchEvent ev{sp, sfa::event_weight(p_signed, sp, config, f), mode_amplitudes(f, config, p_signed, sp.ts.re)};
        b.events.push_back(std::move(ev));
    }
    return b;
}

QOBranch build_branch(double p_signed, const SimConfig& config)
{
    return build_branch(p_signed, config, field::PulseField(config.pulse()));
}

cplx coherent_overlap(cplx a, cplx b)
{
    return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

cplx harmonic_overlap(const std::vector<ModeAmplitude>& a, const std::vector<ModeAmplitude>& b)
{
    if (a.size() != b.size()) throw InvalidArgument("harmonic_overlap: mode lists differ in length");
    cplx out{1.0, 0.0};
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].order != b[k].order) throw InvalidArgument("harmonic_overlap: mode orders differ");
        if (a[k].order == 1) continue;
        out *= coherent_overlap(a[k].delta, b[k].delta) * std::exp(I * (b[k].phi - a[k].phi));
    }
    return out;
}

cplx c_hh(const QOBranch& branch, std::size_t i, std::size_t j)
{
    if (i >= branch.events.size() || j >= branch.events.size()) throw InvalidArgument("c_hh: event index out of range");
    return harmonic_overlap(branch.events[i].modes, branch.events[j].modes);
}

}  // namespace atiqo::qo
