#pragma once

#include <vector>

#include "atiqo/core.hpp"
#include "atiqo/field.hpp"
#include "atiqo/trajectory.hpp"

namespace atiqo::qo {

/// Single-photon amplitude sqrt(2 pi omega_n / V) of a mode in Gaussian
/// atomic units (epsilon_0 = 1 / (4 pi)).
double mode_prefactor(double omega_n, double V);

/// delta_n(p, t, t') = -pref * int_{t'}^{t} Delta r(p, tau, t') exp(i omega_n tau) dtau,
/// by adaptive quadrature.
cplx delta(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime, int order);
cplx delta(double p, double t, double t_prime, int order, const SimConfig& config);

/// phi_n(p, t, t') = pref^2 * int_{t' <= t2 <= t1 <= t} Delta r(t1) Delta r(t2) sin(omega_n (t1 - t2)).
///
/// The inner integral over t2 is done in closed form and the outer one by
/// adaptive quadrature. Requires t inside the pulse window.
double phase_phi(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime, int order);
double phase_phi(double p, double t, double t_prime, int order, const SimConfig& config);

/// delta and phi from the exact antiderivatives of the closed-form trajectory.
/// Both times must lie inside the pulse window. These are smooth to machine
/// precision in t', which the real-time double integral needs.
cplx delta_closed_form(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime, int order);
double phase_phi_closed_form(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime,
                             int order);

enum class NestedOrder {
    /// outer t1, inner t2 in [t', t1]
    t1_outer,
    /// outer t2, inner t1 in [t2, t]
    t2_outer,
};

/// Fully numerical nested form of phase_phi, kept as an independent check.
/// Returns the complex quadrature value; its imaginary part is quadrature residue.
cplx phase_phi_nested(const field::PulseField& f, const SimConfig& config, double p, double t, double t_prime,
                      int order, NestedOrder nesting);

struct ModeAmplitude {
    int order;
    cplx delta;
    double phi;
};

enum class ModeMethod { adaptive, closed_form };

/// delta and phi for every configured mode at a real ionization time, with
/// the N-atom scaling delta -> N delta, phi -> N^2 phi applied.
std::vector<ModeAmplitude> mode_amplitudes(const field::PulseField& f, const SimConfig& config, double p,
                                           double t_prime, ModeMethod method = ModeMethod::adaptive);

struct BranchEvent {
    trajectory::SaddlePoint saddle;
    cplx weight;
    std::vector<ModeAmplitude> modes;
};

/// Saddle-point discretization of the field state conditioned on momentum p.
struct QOBranch {
    double p = 0.0;
    std::vector<BranchEvent> events;  // ordered by re(ts)
    long n_atoms = 1;
    std::vector<int> orders;

    /// Index of the fundamental within each event's mode list.
    std::size_t fundamental_index() const;
};

/// Branch for signed momentum p. delta and phi are evaluated at re(ts); the
/// sub-barrier part of the trajectory only enters through the complex action
/// in the event weight.
QOBranch build_branch(double p_signed, const SimConfig& config, const field::PulseField& f);
QOBranch build_branch(double p_signed, const SimConfig& config);

/// <a|b> for coherent states |a>, |b>.
cplx coherent_overlap(cplx a, cplx b);

/// Overlap of the harmonic (non-fundamental) modes between events i and j,
/// including their phases.
cplx c_hh(const QOBranch& branch, std::size_t i, std::size_t j);

/// The same product for arbitrary mode lists.
cplx harmonic_overlap(const std::vector<ModeAmplitude>& a, const std::vector<ModeAmplitude>& b);

}  // namespace atiqo::qo
