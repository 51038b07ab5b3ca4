#include "atiqo/sfa.hpp"

#include <cmath>

namespace atiqo::sfa {

cplx DipoleModel::operator()(cplx k) const
{
    const cplx i{0.0, 1.0};
    switch (form_) {
    case DipoleForm::hydrogenic: {
        const cplx den = k * k + 2.0 * Ip_;
        return i * scale_ * k / (den * den);
    }
    case DipoleForm::gaussian: return i * scale_ * k * std::exp(-k * k / (4.0 * Ip_));
    }
    return {};
}

cplx dipole(double p_kin, const AtomModel& atom)
{
    return DipoleModel(atom)(cplx{p_kin, 0.0});
}

cplx m_integrand(double p, double t_prime, const SimConfig& config, const field::PulseField& f)
{
    const double e = f.E(t_prime);
    if (e == 0.0) return {};
    const cplx s = trajectory::action(f, config.atom().Ip(), p, config.measurement_time(), cplx{t_prime, 0.0});
    const DipoleModel d(config.atom());
    return std::exp(cplx{0.0, -1.0} * s) * e * d(cplx{p + f.A(t_prime), 0.0});
}

cplx m_integrand(double p, double t_prime, const SimConfig& config)
{
    return m_integrand(p, t_prime, config, field::PulseField(config.pulse()));
}

cplx event_weight(double p, const trajectory::SaddlePoint& saddle, const SimConfig& config,
                  const field::PulseField& f)
{
    const cplx i{0.0, 1.0};
    const cplx ts = saddle.ts.value();
    const cplx spp = trajectory::action_second_derivative(f, p, ts);
    const cplx gauss = std::sqrt(2.0 * kPi / (i * spp));
    const cplx phase = std::exp(-i * saddle.action);
    const DipoleModel d(config.atom());
    if (d.form() == DipoleForm::hydrogenic) return 0.25 * d.scale() * gauss * phase;
    return gauss * f.E(ts) * d(p + f.A(ts)) * phase;
}

cplx event_weight(double p, const trajectory::SaddlePoint& saddle, const SimConfig& config)
{
    return event_weight(p, saddle, config, field::PulseField(config.pulse()));
}

numerics::QuadResult direct_amplitude(double p, const SimConfig& config, const field::PulseField& f)
{
    // The action phase runs to ~1e6 rad for mid-infrared pulses, where adaptive
    // error estimates drown in phase round-off. Composite Gauss-Legendre panels
    // of a few radians each, compared against a grid of half the density.
    const auto& pulse = config.pulse();
    const double amax = 1.1 * pulse.E0() / pulse.omega();
    const double rate = 0.5 * (std::abs(p) + amax) * (std::abs(p) + amax) + config.atom().Ip();
    const int panels = std::max(8 * pulse.n_cycles(), static_cast<int>(std::ceil(rate * pulse.duration() / 2.0)));
    auto sum = [&](int n) {
        const auto rule = numerics::composite_gauss_legendre(20, n, pulse.t0(), pulse.end_time());
        cplx s{};
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * m_integrand(p, rule.nodes[i], config, f);
        return s;
    };
    const cplx fine = sum(panels);
    const cplx coarse = sum(panels / 2);
    return {fine, std::abs(fine - coarse), static_cast<int>(30 * panels)};
}

}  // namespace atiqo::sfa
