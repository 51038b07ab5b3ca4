#include "atiqo/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atiqo::trajectory {

double displacement(const field::PulseField& f, double p, double tau, double t_ion)
{
    return p * (tau - t_ion) + (f.A_integral(tau) - f.A_integral(t_ion));
}

cplx displacement(const field::PulseField& f, double p, double tau, cplx t_ion)
{
    if (t_ion.imag() == 0.0) return displacement(f, p, tau, t_ion.real());
    return p * (tau - t_ion) + (f.A_integral(tau) - f.A_integral(t_ion));
}

cplx action(const field::PulseField& f, double Ip, double p, double t, cplx t_prime)
{
    const double kin = 0.5 * p * p + Ip;
    if (t_prime.imag() == 0.0) {
        const double tp = t_prime.real();
        return kin * (t - tp) + p * (f.A_integral(t) - f.A_integral(tp)) + 0.5 * (f.A2_integral(t) - f.A2_integral(tp));
    }
    return kin * (t - t_prime) + p * (f.A_integral(t) - f.A_integral(t_prime))
         + 0.5 * (f.A2_integral(t) - f.A2_integral(t_prime));
}

cplx action_derivative(const field::PulseField& f, double Ip, double p, cplx t_prime)
{
    const cplx k = t_prime.imag() == 0.0 ? cplx{p + f.A(t_prime.real())} : p + f.A(t_prime);
    return -(0.5 * k * k + Ip);
}

cplx action_second_derivative(const field::PulseField& f, double p, cplx ts)
{
    const cplx v = ts.imag() == 0.0 ? cplx{(p + f.A(ts.real())) * f.E(ts.real())} : (p + f.A(ts)) * f.E(ts);
    if (!(std::abs(v) >= 1e-12)) throw DegenerateSaddle("action_second_derivative: |S''| < 1e-12 at the requested time");
    return v;
}

namespace {

struct NewtonOutcome {
    bool ok;
    cplx t;
};

// Root of g(t) = p + A(t) - i sigma kappa, g'(t) = -E(t).
NewtonOutcome newton(const field::PulseField& f, double p, double kappa, double sigma, cplx t, double max_step)
{
    const cplx target{0.0, sigma * kappa};
    auto g = [&](cplx z) { return p + f.A(z) - target; };
    cplx gt = g(t);
    for (int it = 0; it < 200; ++it) {
        const cplx e = f.E(t);
        if (std::abs(e) < 1e-300) return {false, t};
        cplx step = gt / e;
        if (std::abs(step) > max_step) step *= max_step / std::abs(step);
        cplx tn = t + step;
        cplx gn = g(tn);
        int halvings = 0;
        while (std::abs(gn) > std::abs(gt) && halvings < 40) {
            step *= 0.5;
            tn = t + step;
            gn = g(tn);
            ++halvings;
        }
        t = tn;
        gt = gn;
        if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) return {false, t};
        if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(t)) || std::abs(gt) < 1e-15 * kappa) return {true, t};
    }
    return {std::abs(gt) < 1e-12 * kappa, t};
}

}  // namespace

SaddleSet solve_saddles(double p, const SimConfig& config)
{
    return solve_saddles(p, config, field::PulseField(config.pulse()));
}

SaddleSet solve_saddles(double p, const SimConfig& config, const field::PulseField& f)
{
    const auto& pulse = config.pulse();
    const double Ip = config.atom().Ip();
    const double kappa = std::sqrt(2.0 * Ip);
    const double E0 = pulse.E0();
    const double quarter = 0.25 * pulse.period();
    const double t0 = pulse.t0();
    const double t1 = pulse.end_time();
    const double tol = config.numerics().saddle_tolerance;
    const int per_quarter = config.numerics().seeds_per_quarter_cycle;
    const int quarters = 4 * pulse.n_cycles();

    struct Seed {
        cplx t;
        double sigma;
    };
    std::vector<Seed> seeds;
    const double gamma_ref = kappa / E0;
    for (int q = 0; q < quarters; ++q) {
        for (int j = 0; j < per_quarter; ++j) {
            const double tr = t0 + (q + (j + 0.5) / per_quarter) * quarter;
            const double e = f.E(tr);
            if (e != 0.0) {
                const double gamma = std::clamp(kappa / std::abs(e), 0.5 * gamma_ref, 20.0 * gamma_ref);
                seeds.push_back({cplx{tr, gamma}, e > 0.0 ? -1.0 : 1.0});
            }
            seeds.push_back({cplx{tr, gamma_ref}, 1.0});
            seeds.push_back({cplx{tr, gamma_ref}, -1.0});
        }
    }

    SaddleSet out;
    out.p = p;
    std::vector<cplx> roots;
    for (const Seed& s : seeds) {
        const NewtonOutcome r = newton(f, p, kappa, s.sigma, s.t, quarter);
        if (!r.ok) {
            ++out.failed_seeds;
            continue;
        }
        if (!(r.t.imag() > 0.0) || r.t.real() < t0 || r.t.real() > t1) continue;
        roots.push_back(r.t);
    }
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });

    const double t_meas = config.measurement_time();
    for (cplx r : roots) {
        bool dup = false;
        for (const SaddlePoint& sp : out.saddles) {
            if (std::abs(sp.ts.value() - r) < 1e-6) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        const cplx k = p + f.A(r);
        const double residual = std::abs(0.5 * k * k + Ip);
        if (residual > tol) {
            ++out.failed_seeds;
            continue;
        }
        cplx spp;
        try {
            spp = action_second_derivative(f, p, r);
        } catch (const DegenerateSaddle&) {
            ++out.failed_seeds;
            continue;
        }
        out.saddles.push_back({ComplexTime::from(r), action(f, Ip, p, t_meas, r), spp, residual});
    }
    std::sort(out.saddles.begin(), out.saddles.end(),
              [](const SaddlePoint& a, const SaddlePoint& b) { return a.ts.re < b.ts.re; });

    const double cutoff = config.numerics().saddle_weight_cutoff;
    if (cutoff > 0.0 && !out.saddles.empty()) {
        // |exp(-i S)| = exp(Im S); compare in log space.
        double best = -std::numeric_limits<double>::infinity();
        for (const SaddlePoint& sp : out.saddles) best = std::max(best, sp.action.imag());
        const double floor = best + std::log(cutoff);
        std::erase_if(out.saddles, [&](const SaddlePoint& sp) { return sp.action.imag() < floor; });
    }
    return out;
}

}  // namespace atiqo::trajectory
