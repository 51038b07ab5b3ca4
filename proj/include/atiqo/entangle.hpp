#pragma once

#include <array>
#include <vector>

#include "atiqo/core.hpp"
#include "atiqo/field.hpp"
#include "atiqo/qo_state.hpp"

namespace atiqo::entangle {

struct EntanglementReport {
    double p = 0.0;
    /// Branch norms N+ and N-.
    double n_plus = 0.0;
    double n_minus = 0.0;
    /// |<Phi(p)|Phi(-p)>| and its argument, for normalized branches.
    double overlap_mod = 1.0;
    double theta = 0.0;
    double mu = 1.0;
    double nu = 0.0;
    double lambda_plus = 1.0;
    double lambda_minus = 0.0;
    /// Entropy of entanglement in bits.
    double entropy = 0.0;

    double n_plus_fraction() const { return n_plus / (n_plus + n_minus); }
};

/// <Phi_a|Phi_b> by the saddle-point sum over event pairs, all modes included.
cplx branch_inner(const qo::QOBranch& a, const qo::QOBranch& b);

struct SchmidtEigenvalues {
    double plus;
    double minus;
};

/// lambda = (1 +- sqrt(1 - 4 (1 - |O|^2) n+ n-)) / 2 for branch fractions n+- = N+- / N.
SchmidtEigenvalues eigenvalues_from_overlap(double overlap_mod, double n_plus_fraction, double n_minus_fraction);
/// lambda = (1 +- sqrt(1 + 16 nu^2 (nu^2 - 1) n+ n-)) / 2 with nu = sqrt((1 - |O|) / 2).
SchmidtEigenvalues eigenvalues_from_nu(double nu, double n_plus_fraction, double n_minus_fraction);

/// -sum lambda log2 lambda, with 0 log 0 = 0.
double entropy_bits(double lambda_plus, double lambda_minus);

/// Report from branch norms and the normalized overlap O = |O| e^{i theta}.
EntanglementReport report_from_overlap(double n_plus, double n_minus, cplx overlap);

EntanglementReport report(double p, const SimConfig& config, const field::PulseField& f);
EntanglementReport report(double p, const SimConfig& config);

/// Max |difference| between the two closed forms of the eigenvalues.
double eigenvalue_crosscheck(const EntanglementReport& r);

/// Coefficients C_ij of the state sum C_ij |e_i>|f_j> in the electron
/// direction basis {+p, -p} and the orthonormal field basis {u, v} with
/// Phi+ = mu u + nu v, Phi- = e^{i theta} (mu u - nu v).
std::array<std::array<cplx, 2>, 2> schmidt_matrix(const EntanglementReport& r);

}  // namespace atiqo::entangle
