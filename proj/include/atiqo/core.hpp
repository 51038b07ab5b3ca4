#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace atiqo {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Rejected construction or call arguments.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An adaptive quadrature or root finder ran out of budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

class DegenerateSaddle : public Error {
public:
    using Error::Error;
};

/// A method was asked to work outside the regime it is valid in.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Linearly polarized sin^2-envelope pulse, atomic units throughout.
class LaserPulse {
public:
    LaserPulse(double E0, double omega_L, int n_cycles, double cep = 0.0, double t0 = 0.0);

    double E0() const { return E0_; }
    double omega() const { return omega_; }
    int n_cycles() const { return n_cycles_; }
    double cep() const { return cep_; }
    double t0() const { return t0_; }

    /// Total duration T = 2 pi n_cycles / omega_L.
    double duration() const { return 2.0 * kPi * n_cycles_ / omega_; }
    double end_time() const { return t0_ + duration(); }
    double period() const { return 2.0 * kPi / omega_; }

private:
    double E0_;
    double omega_;
    int n_cycles_;
    double cep_;
    double t0_;
};

enum class DipoleForm {
    /// d(k) = i s k / (k^2 + 2 Ip)^2
    hydrogenic,
    /// d(k) = i s k exp(-k^2 / (4 Ip)); regular at the saddle points.
    gaussian,
};

std::string to_string(DipoleForm form);
DipoleForm dipole_form_from_string(const std::string& name);

class AtomModel {
public:
    explicit AtomModel(double Ip, double dipole_scale = 1.0,
                       DipoleForm form = DipoleForm::hydrogenic);

    double Ip() const { return Ip_; }
    double dipole_scale() const { return dipole_scale_; }
    DipoleForm dipole_form() const { return form_; }

private:
    double Ip_;
    double dipole_scale_;
    DipoleForm form_;
};

/// Quantized field modes at harmonics n * omega_L of the carrier.
class ModeSet {
public:
    explicit ModeSet(double V = 1e14, std::vector<int> harmonic_orders = {1, 2, 3});

    double V() const { return V_; }
    const std::vector<int>& orders() const { return orders_; }
    bool contains(int order) const;

private:
    double V_;
    std::vector<int> orders_;
};

struct NumericsOptions {
    double quad_tolerance = 1e-10;
    double saddle_tolerance = 1e-10;
    /// Newton seeds per quarter carrier cycle.
    int seeds_per_quarter_cycle = 1;
    /// The saddle solver drops ionization times whose tunneling factor
    /// |exp(-i S)| is below this fraction of the strongest one. 0 keeps every root.
    double saddle_weight_cutoff = 1e-3;
};

class SimConfig {
public:
    SimConfig(LaserPulse pulse, AtomModel atom, ModeSet modes = ModeSet{},
              NumericsOptions numerics = {}, long n_atoms = 1);

    const LaserPulse& pulse() const { return pulse_; }
    const AtomModel& atom() const { return atom_; }
    const ModeSet& modes() const { return modes_; }
    const NumericsOptions& numerics() const { return numerics_; }
    long n_atoms() const { return n_atoms_; }

    /// Electron is detected at the end of the pulse.
    double measurement_time() const { return pulse_.end_time(); }

    SimConfig with_pulse(LaserPulse pulse) const;
    SimConfig with_atom(AtomModel atom) const;
    SimConfig with_modes(ModeSet modes) const;
    SimConfig with_numerics(NumericsOptions numerics) const;
    SimConfig with_n_atoms(long n) const;

private:
    LaserPulse pulse_;
    AtomModel atom_;
    ModeSet modes_;
    NumericsOptions numerics_;
    long n_atoms_;
};

double ponderomotive_energy(const LaserPulse& pulse);

struct RegimeWarning {
    std::string code;
    std::string message;
};

inline constexpr double kOverBarrierField = 0.147;
inline constexpr double kRescatteringEnergyLimit = 2.5;

/// Flags parameter choices outside the validity of the direct-ionization model.
/// `photoelectron_energies` are kinetic energies p^2/2 in atomic units.
std::vector<RegimeWarning> validate_regime(const SimConfig& config,
                                           std::span<const double> photoelectron_energies = {});

/// Canonical momentum for a photoelectron energy given as a multiple of Up.
double momentum_for_energy(const LaserPulse& pulse, double energy_over_Up, double sign = 1.0);

}  // namespace atiqo
