#pragma once

#include "atiqo/core.hpp"
#include "atiqo/expoly.hpp"

namespace atiqo::field {

struct FieldSample {
    double t;
    double E;
    double A;
};

/// Closed-form classical field of a sin^2-envelope pulse.
///
/// E(t) = E0 sin^2(pi (t - t0) / T) cos(omega (t - t0) + cep) on [t0, t0 + T]
/// and zero elsewhere; A(t) = -int_{t0}^t E. Real arguments outside the
/// window follow the piecewise definition (A frozen at its end value); complex
/// arguments always use the analytic continuation of the in-window formula.
class PulseField {
public:
    explicit PulseField(const LaserPulse& pulse);

    const LaserPulse& pulse() const { return pulse_; }

    double E(double t) const;
    double A(double t) const;
    /// int_{t0}^t A(s) ds
    double A_integral(double t) const;
    /// int_{t0}^t A(s)^2 ds
    double A2_integral(double t) const;

    cplx E(cplx t) const { return e_(t - pulse_.t0()); }
    cplx A(cplx t) const { return a_(t - pulse_.t0()); }
    cplx A_integral(cplx t) const { return a_int_(t - pulse_.t0()); }
    cplx A2_integral(cplx t) const { return a2_int_(t - pulse_.t0()); }

    /// Closed forms in local time s = t - t0, valid inside the window.
    const ExpPoly& E_poly() const { return e_; }
    const ExpPoly& A_poly() const { return a_; }
    const ExpPoly& A_integral_poly() const { return a_int_; }
    const ExpPoly& A2_integral_poly() const { return a2_int_; }

    FieldSample sample(double t) const { return {t, E(t), A(t)}; }

private:
    LaserPulse pulse_;
    ExpPoly e_;
    ExpPoly a_;
    ExpPoly a_int_;
    ExpPoly a2_int_;
    double a_end_;
    double a_int_end_;
    double a2_int_end_;
};

double evaluate_E(const LaserPulse& pulse, double t);
double vector_potential(const LaserPulse& pulse, double t);

/// Time of the global maximum of |E|; ties (within 1e-12 relative) resolve
/// to the candidate closest to the pulse midpoint.
double field_maximum_time(const LaserPulse& pulse);

}  // namespace atiqo::field
