#include "atiqo/field.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>

namespace atiqo::field {

namespace {

// E0 sin^2(Omega s / 2) cos(omega s + cep) with Omega = omega / n, expanded
// into complex exponentials.
ExpPoly build_field(const LaserPulse& p)
{
    const double w = p.omega();
    const double env = w / p.n_cycles();
    const cplx i{0.0, 1.0};
    const cplx ph = std::exp(i * p.cep());
    const double E0 = p.E0();

    ExpPoly e = ExpPoly::monomial(E0 / 4.0 * ph, 0, w) + ExpPoly::monomial(E0 / 4.0 * std::conj(ph), 0, -w);
    const double lo = p.n_cycles() == 1 ? 0.0 : w - env;
    e = e - ExpPoly::monomial(E0 / 8.0 * ph, 0, w + env) - ExpPoly::monomial(E0 / 8.0 * std::conj(ph), 0, -(w + env));
    e = e - ExpPoly::monomial(E0 / 8.0 * ph, 0, lo) - ExpPoly::monomial(E0 / 8.0 * std::conj(ph), 0, -lo);
    return e;
}

}  // namespace

PulseField::PulseField(const LaserPulse& pulse)
    : pulse_(pulse)
{
    e_ = build_field(pulse_);
    a_ = e_.antiderivative() * cplx{-1.0, 0.0};
    a_int_ = a_.antiderivative();
    a2_int_ = (a_ * a_).antiderivative();
    const double T = pulse_.duration();
    a_end_ = a_.real_at(T);
    a_int_end_ = a_int_.real_at(T);
    a2_int_end_ = a2_int_.real_at(T);
}

double PulseField::E(double t) const
{
    const double s = t - pulse_.t0();
    if (s <= 0.0 || s >= pulse_.duration()) return 0.0;
    return e_.real_at(s);
}

double PulseField::A(double t) const
{
    const double s = t - pulse_.t0();
    if (s <= 0.0) return 0.0;
    if (s >= pulse_.duration()) return a_end_;
    return a_.real_at(s);
}

double PulseField::A_integral(double t) const
{
    const double s = t - pulse_.t0();
    const double T = pulse_.duration();
    if (s <= 0.0) return 0.0;
    if (s >= T) return a_int_end_ + a_end_ * (s - T);
    return a_int_.real_at(s);
}

double PulseField::A2_integral(double t) const
{
    const double s = t - pulse_.t0();
    const double T = pulse_.duration();
    if (s <= 0.0) return 0.0;
    if (s >= T) return a2_int_end_ + a_end_ * a_end_ * (s - T);
    return a2_int_.real_at(s);
}

double evaluate_E(const LaserPulse& pulse, double t)
{
    return PulseField(pulse).E(t);
}

double vector_potential(const LaserPulse& pulse, double t)
{
    return PulseField(pulse).A(t);
}

double field_maximum_time(const LaserPulse& pulse)
{
    const PulseField f(pulse);
    const double t0 = pulse.t0();
    const double T = pulse.duration();
    const double mid = t0 + 0.5 * T;
    const int n = 256 * pulse.n_cycles();
    const double h = T / n;

    double best_t = mid;
    double best = std::abs(f.E(mid));
    for (int k = 1; k < n; ++k) {
        const double t = t0 + k * h;
        const double v = std::abs(f.E(t));
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    auto neg_abs = [&](double t) { return -std::abs(f.E(t)); };
    const auto [t_ref, v_ref] = boost::math::tools::brent_find_minima(
        neg_abs, std::max(t0, best_t - h), std::min(t0 + T, best_t + h), 52);
    if (-v_ref > best) {
        best = -v_ref;
        best_t = t_ref;
    }
    if (std::abs(f.E(mid)) >= best * (1.0 - 1e-12)) return mid;
    return best_t;
}

}  // namespace atiqo::field
