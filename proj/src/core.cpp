#include "atiqo/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "atiqo/field.hpp"

namespace atiqo {

namespace {

bool finite_positive(double x)
{
    return std::isfinite(x) && x > 0.0;
}

}  // namespace

LaserPulse::LaserPulse(double E0, double omega_L, int n_cycles, double cep, double t0)
    : E0_(E0), omega_(omega_L), n_cycles_(n_cycles), cep_(cep), t0_(t0)
{
    if (!finite_positive(E0)) throw InvalidArgument("LaserPulse: E0 must be finite and > 0");
    if (!finite_positive(omega_L)) throw InvalidArgument("LaserPulse: omega_L must be finite and > 0");
    if (n_cycles < 1) throw InvalidArgument("LaserPulse: n_cycles must be >= 1");
    if (!std::isfinite(cep) || !std::isfinite(t0)) throw InvalidArgument("LaserPulse: cep and t0 must be finite");
}

std::string to_string(DipoleForm form)
{
    switch (form) {
    case DipoleForm::hydrogenic: return "hydrogenic";
    case DipoleForm::gaussian: return "gaussian";
    }
    return "unknown";
}

DipoleForm dipole_form_from_string(const std::string& name)
{
    if (name == "hydrogenic") return DipoleForm::hydrogenic;
    if (name == "gaussian") return DipoleForm::gaussian;
    throw InvalidArgument("unknown dipole form '" + name + "' (expected hydrogenic or gaussian)");
}

AtomModel::AtomModel(double Ip, double dipole_scale, DipoleForm form)
    : Ip_(Ip), dipole_scale_(dipole_scale), form_(form)
{
    if (!finite_positive(Ip)) throw InvalidArgument("AtomModel: Ip must be finite and > 0");
    if (!finite_positive(dipole_scale)) throw InvalidArgument("AtomModel: dipole_scale must be finite and > 0");
}

ModeSet::ModeSet(double V, std::vector<int> harmonic_orders)
    : V_(V), orders_(std::move(harmonic_orders))
{
    if (!finite_positive(V)) throw InvalidArgument("ModeSet: V must be finite and > 0");
    if (orders_.empty()) throw InvalidArgument("ModeSet: harmonic_orders must not be empty");
    for (std::size_t k = 0; k < orders_.size(); ++k) {
        if (orders_[k] < 1) throw InvalidArgument("ModeSet: harmonic orders must be positive");
        if (k > 0 && orders_[k] <= orders_[k - 1])
            throw InvalidArgument("ModeSet: harmonic orders must be strictly increasing");
    }
    if (!contains(1)) throw InvalidArgument("ModeSet: harmonic_orders must contain the fundamental (1)");
}

bool ModeSet::contains(int order) const
{
    return std::find(orders_.begin(), orders_.end(), order) != orders_.end();
}

SimConfig::SimConfig(LaserPulse pulse, AtomModel atom, ModeSet modes, NumericsOptions numerics, long n_atoms)
    : pulse_(pulse), atom_(atom), modes_(std::move(modes)), numerics_(numerics), n_atoms_(n_atoms)
{
    if (!finite_positive(numerics_.quad_tolerance))
        throw InvalidArgument("SimConfig: quad_tolerance must be > 0");
    if (!finite_positive(numerics_.saddle_tolerance))
        throw InvalidArgument("SimConfig: saddle_tolerance must be > 0");
    if (numerics_.seeds_per_quarter_cycle < 1)
        throw InvalidArgument("SimConfig: seeds_per_quarter_cycle must be >= 1");
    if (!(numerics_.saddle_weight_cutoff >= 0.0 && numerics_.saddle_weight_cutoff < 1.0))
        throw InvalidArgument("SimConfig: saddle_weight_cutoff must be in [0, 1)");
    if (n_atoms_ < 1) throw InvalidArgument("SimConfig: n_atoms must be >= 1");
}

SimConfig SimConfig::with_pulse(LaserPulse pulse) const
{
    return SimConfig(pulse, atom_, modes_, numerics_, n_atoms_);
}

SimConfig SimConfig::with_atom(AtomModel atom) const
{
    return SimConfig(pulse_, atom, modes_, numerics_, n_atoms_);
}

SimConfig SimConfig::with_modes(ModeSet modes) const
{
    return SimConfig(pulse_, atom_, std::move(modes), numerics_, n_atoms_);
}

SimConfig SimConfig::with_numerics(NumericsOptions numerics) const
{
    return SimConfig(pulse_, atom_, modes_, numerics, n_atoms_);
}

SimConfig SimConfig::with_n_atoms(long n) const
{
    return SimConfig(pulse_, atom_, modes_, numerics_, n);
}

double ponderomotive_energy(const LaserPulse& pulse)
{
    return pulse.E0() * pulse.E0() / (4.0 * pulse.omega() * pulse.omega());
}

double momentum_for_energy(const LaserPulse& pulse, double energy_over_Up, double sign)
{
    if (!(energy_over_Up >= 0.0)) throw InvalidArgument("momentum_for_energy: energy must be >= 0");
    const double p = std::sqrt(2.0 * energy_over_Up * ponderomotive_energy(pulse));
    return sign < 0.0 ? -p : p;
}

std::vector<RegimeWarning> validate_regime(const SimConfig& config, std::span<const double> photoelectron_energies)
{
    std::vector<RegimeWarning> out;
    const auto& pulse = config.pulse();
    if (pulse.E0() >= kOverBarrierField) {
        std::ostringstream msg;
        msg << "E0 = " << pulse.E0() << " a.u. is at or above " << kOverBarrierField
            << " a.u.; over-the-barrier ionization is no longer suppressed";
        out.push_back({"over_the_barrier", msg.str()});
    }
    const double up = ponderomotive_energy(pulse);
    for (double e : photoelectron_energies) {
        if (e > kRescatteringEnergyLimit * up) {
            std::ostringstream msg;
            msg << "photoelectron energy " << e << " a.u. = " << e / up << " Up exceeds "
                << kRescatteringEnergyLimit << " Up; rescattering is not modelled";
            out.push_back({"rescattering", msg.str()});
        }
    }
    const double a_end = field::PulseField(pulse).A(pulse.end_time());
    if (std::abs(a_end) > 1e-6 * pulse.E0() / pulse.omega()) {
        std::ostringstream msg;
        msg << "A(end of pulse) = " << a_end << " is not negligible; final kinetic and canonical momenta differ";
        out.push_back({"residual_vector_potential", msg.str()});
    }
    return out;
}

}  // namespace atiqo
