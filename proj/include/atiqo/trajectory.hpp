#pragma once

#include <vector>

#include "atiqo/core.hpp"
#include "atiqo/field.hpp"

namespace atiqo::trajectory {

struct ComplexTime {
    double re = 0.0;
    double im = 0.0;

    cplx value() const { return {re, im}; }
    static ComplexTime from(cplx t) { return {t.real(), t.imag()}; }
};

struct SaddlePoint {
    ComplexTime ts;
    /// S(p, t, ts) with t the measurement time.
    cplx action;
    /// d^2 S / dt'^2 at ts.
    cplx s_pp;
    /// |(p + A(ts))^2 / 2 + Ip|
    double residual;
};

struct SaddleSet {
    double p = 0.0;
    std::vector<SaddlePoint> saddles;  // ordered by re(ts)
    /// Seeds whose Newton iteration failed and were dropped.
    int failed_seeds = 0;
};

/// Delta r(p, tau, t') = int_{t'}^{tau} (p + A(s)) ds.
double displacement(const field::PulseField& f, double p, double tau, double t_ion);
cplx displacement(const field::PulseField& f, double p, double tau, cplx t_ion);

/// S(p, t, t') = int_{t'}^{t} [(p + A)^2 / 2 + Ip].
cplx action(const field::PulseField& f, double Ip, double p, double t, cplx t_prime);

/// dS/dt' = -[(p + A(t'))^2 / 2 + Ip]
cplx action_derivative(const field::PulseField& f, double Ip, double p, cplx t_prime);

/// d^2 S / dt'^2 = (p + A(ts)) E(ts). Throws DegenerateSaddle when |value| < 1e-12.
cplx action_second_derivative(const field::PulseField& f, double p, cplx ts);

/// Ionization times: roots of (p + A(ts))^2 / 2 + Ip = 0 with im(ts) > 0 and
/// re(ts) inside the pulse window, from damped complex Newton iterations.
/// Roots below NumericsOptions::saddle_weight_cutoff are dropped.
SaddleSet solve_saddles(double p, const SimConfig& config);
SaddleSet solve_saddles(double p, const SimConfig& config, const field::PulseField& f);

}  // namespace atiqo::trajectory
