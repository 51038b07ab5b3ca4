#include "doctest.h"

#include <cmath>
#include <random>

#include "atiqo/field.hpp"
#include "atiqo/numerics.hpp"

using namespace atiqo;

namespace {

double quad_minus_E(const field::PulseField& f, double t)
{
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    spec.abs_tol = 1e-16;
    spec.initial_panels = 64;
    return -numerics::integrate_1d([&](double s) { return cplx{f.E(s), 0.0}; }, f.pulse().t0(), t, spec).value.real();
}

}  // namespace

TEST_CASE("field vanishes at the window edges")
{
    const field::PulseField f(LaserPulse(0.053, 0.057, 5));
    CHECK(f.E(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(std::abs(f.E(f.pulse().end_time())) < 1e-15);
    CHECK(f.A(0.0) == 0.0);
    CHECK(std::abs(f.A(f.pulse().end_time())) < 1e-10 * 0.053 / 0.057);
    CHECK(f.E(-5.0) == 0.0);
    CHECK(f.E(f.pulse().end_time() + 5.0) == 0.0);
    CHECK(f.A(f.pulse().end_time() + 5.0) == f.A(f.pulse().end_time()));
}

TEST_CASE("peak |E| on a dense scan")
{
    const LaserPulse p(0.053, 0.057, 5);
    double mx = 0.0;
    for (int i = 0; i <= 100000; ++i) mx = std::max(mx, std::abs(field::evaluate_E(p, p.duration() * i / 100000.0)));
    CHECK(mx <= 0.053);
    CHECK(mx >= 0.99 * 0.053);
}

TEST_CASE("closed-form A matches quadrature of -E at 100 random times")
{
    const field::PulseField f(LaserPulse(0.053, 0.057, 5, 0.3, 4.0));
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(f.pulse().t0(), f.pulse().end_time());
    for (int i = 0; i < 100; ++i) {
        const double t = u(rng);
        const double ref = quad_minus_E(f, t);
        CHECK(std::abs(f.A(t) - ref) <= 1e-10 * std::max(std::abs(ref), 1e-3 * 0.053 / 0.057));
    }
}

TEST_CASE("running integrals of A match quadrature")
{
    const field::PulseField f(LaserPulse(0.106, 0.009, 3));
    numerics::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    spec.initial_panels = 32;
    for (double t : {100.0, 700.0, 1900.0}) {
        const double a1 = numerics::integrate_1d([&](double s) { return cplx{f.A(s), 0.0}; }, 0.0, t, spec).value.real();
        const double a2 = numerics::integrate_1d([&](double s) { return cplx{f.A(s) * f.A(s), 0.0}; }, 0.0, t, spec).value.real();
        CHECK(f.A_integral(t) == doctest::Approx(a1).epsilon(1e-10));
        CHECK(f.A2_integral(t) == doctest::Approx(a2).epsilon(1e-10));
    }
}

TEST_CASE("complex continuation agrees with real evaluation on the axis")
{
    const field::PulseField f(LaserPulse(0.053, 0.057, 5));
    for (double t : {13.0, 200.0, 451.0}) {
        CHECK(std::abs(f.A(cplx{t, 0.0}) - f.A(t)) < 1e-14);
        CHECK(std::abs(f.E(cplx{t, 0.0}) - f.E(t)) < 1e-14);
    }
}

TEST_CASE("field maximum time")
{
    const LaserPulse p(0.053, 0.057, 5);
    const double tm = field::field_maximum_time(p);
    CHECK(tm == doctest::Approx(p.duration() / 2).epsilon(1e-9));
    double mx = 0.0;
    for (int i = 0; i <= 20000; ++i) mx = std::max(mx, std::abs(field::evaluate_E(p, p.duration() * i / 20000.0)));
    CHECK(std::abs(field::evaluate_E(p, tm)) >= mx * (1.0 - 1e-12));
    CHECK(field::field_maximum_time(LaserPulse(1e-300, 0.057, 5)) == doctest::Approx(p.duration() / 2));
}

TEST_CASE("mirror symmetry about the pulse center for cep = 0")
{
    for (int n : {4, 5}) {
        const field::PulseField f(LaserPulse(0.053, 0.057, n));
        const double c = f.pulse().duration() / 2;
        for (double s : {3.0, 41.0, 130.0}) CHECK(f.E(c + s) == doctest::Approx(f.E(c - s)).epsilon(1e-12));
    }
}

TEST_CASE("field energy is positive")
{
    const field::PulseField f(LaserPulse(0.053, 0.057, 5));
    numerics::QuadratureSpec spec;
    spec.initial_panels = 40;
    const double e2 = numerics::integrate_1d([&](double t) { return cplx{f.E(t) * f.E(t), 0.0}; }, 0.0,
                                             f.pulse().duration(), spec).value.real();
    CHECK(e2 > 0.0);
}
