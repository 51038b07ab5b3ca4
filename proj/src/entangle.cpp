#include "atiqo/entangle.hpp"

#include <algorithm>
#include <cmath>

namespace atiqo::entangle {

namespace {

const cplx I{0.0, 1.0};

SchmidtEigenvalues from_discriminant(double disc)
{
    const double r = std::sqrt(std::clamp(disc, 0.0, 1.0));
    return {0.5 * (1.0 + r), 0.5 * (1.0 - r)};
}

void check_fractions(double a, double b)
{
    if (!(a >= 0.0 && b >= 0.0) || std::abs(a + b - 1.0) > 1e-9)
        throw InvalidArgument("entangle: branch fractions must be non-negative and sum to 1");
}

}  // namespace

cplx branch_inner(const qo::QOBranch& a, const qo::QOBranch& b)
{
    if (a.orders != b.orders) throw InvalidArgument("branch_inner: branches use different mode sets");
    cplx s{};
    for (const auto& ea : a.events) {
        for (const auto& eb : b.events) {
            cplx t = std::conj(ea.weight) * eb.weight;
            for (std::size_t k = 0; k < ea.modes.size(); ++k) {
                const auto& ma = ea.modes[k];
                const auto& mb = eb.modes[k];
                t *= qo::coherent_overlap(ma.delta, mb.delta) * std::exp(I * (mb.phi - ma.phi));
            }
            s += t;
        }
    }
    return s;
}

SchmidtEigenvalues eigenvalues_from_overlap(double overlap_mod, double n_plus_fraction, double n_minus_fraction)
{
    check_fractions(n_plus_fraction, n_minus_fraction);
    const double o2 = overlap_mod * overlap_mod;
    return from_discriminant(1.0 - 4.0 * (1.0 - o2) * n_plus_fraction * n_minus_fraction);
}

SchmidtEigenvalues eigenvalues_from_nu(double nu, double n_plus_fraction, double n_minus_fraction)
{
    check_fractions(n_plus_fraction, n_minus_fraction);
    const double n2 = nu * nu;
    return from_discriminant(1.0 + 16.0 * n2 * (n2 - 1.0) * n_plus_fraction * n_minus_fraction);
}

double entropy_bits(double lambda_plus, double lambda_minus)
{
    auto term = [](double l) { return l > 0.0 ? -l * std::log2(l) : 0.0; };
    return term(lambda_plus) + term(lambda_minus);
}

EntanglementReport report_from_overlap(double n_plus, double n_minus, cplx overlap)
{
    if (!(n_plus > 0.0) || !(n_minus > 0.0)) throw PreconditionError("entangle: a branch has zero norm");
    EntanglementReport r;
    r.n_plus = n_plus;
    r.n_minus = n_minus;
    r.overlap_mod = std::min(1.0, std::abs(overlap));
    r.theta = std::arg(overlap);
    r.mu = std::sqrt(0.5 * (1.0 + r.overlap_mod));
    r.nu = std::sqrt(0.5 * (1.0 - r.overlap_mod));
    const double total = n_plus + n_minus;
    const auto l = eigenvalues_from_overlap(r.overlap_mod, n_plus / total, n_minus / total);
    r.lambda_plus = l.plus;
    r.lambda_minus = l.minus;
    r.entropy = entropy_bits(l.plus, l.minus);
    return r;
}

EntanglementReport report(double p, const SimConfig& config, const field::PulseField& f)
{
    if (!(p >= 0.0)) throw InvalidArgument("entangle::report: p must be >= 0");
    const auto bp = qo::build_branch(p, config, f);
    const auto bm = p == 0.0 ? bp : qo::build_branch(-p, config, f);
    if (bp.events.empty() || bm.events.empty()) throw PreconditionError("entangle::report: a branch has no ionization events");
    const double np = branch_inner(bp, bp).real();
    const double nm = branch_inner(bm, bm).real();
    if (!(np > 0.0) || !(nm > 0.0)) throw PreconditionError("entangle::report: a branch has zero norm");
    auto r = report_from_overlap(np, nm, branch_inner(bp, bm) / std::sqrt(np * nm));
    r.p = p;
    return r;
}

EntanglementReport report(double p, const SimConfig& config)
{
    return report(p, config, field::PulseField(config.pulse()));
}

double eigenvalue_crosscheck(const EntanglementReport& r)
{
    const double total = r.n_plus + r.n_minus;
    const auto a = eigenvalues_from_overlap(r.overlap_mod, r.n_plus / total, r.n_minus / total);
    const auto b = eigenvalues_from_nu(r.nu, r.n_plus / total, r.n_minus / total);
    return std::max(std::abs(a.plus - b.plus), std::abs(a.minus - b.minus));
}

std::array<std::array<cplx, 2>, 2> schmidt_matrix(const EntanglementReport& r)
{
    const double total = r.n_plus + r.n_minus;
    const double sp = std::sqrt(r.n_plus / total);
    const double sm = std::sqrt(r.n_minus / total);
    const cplx ph = std::exp(I * r.theta);
    return {{{sp * r.mu, sp * r.nu}, {sm * ph * r.mu, -sm * ph * r.nu}}};
}

}  // namespace atiqo::entangle
