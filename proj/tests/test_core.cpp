#include "doctest.h"

#include <cmath>

#include "atiqo/core.hpp"

using namespace atiqo;

TEST_CASE("ponderomotive energy examples")
{
    CHECK(ponderomotive_energy(LaserPulse(0.053, 0.057, 5)) == doctest::Approx(0.053 * 0.053 / (4 * 0.057 * 0.057)).epsilon(1e-14));
    CHECK(ponderomotive_energy(LaserPulse(0.053, 0.057, 5)) == doctest::Approx(0.21614).epsilon(1e-4));
    CHECK(ponderomotive_energy(LaserPulse(0.106, 0.009, 5)) == doctest::Approx(34.68).epsilon(1e-3));
    CHECK(ponderomotive_energy(LaserPulse(1e-12, 0.05, 5)) < 1e-20);
}

TEST_CASE("Up scales as E0^2 / omega^2 on a 3x3 grid")
{
    const double base = ponderomotive_energy(LaserPulse(0.05, 0.05, 3));
    for (double fe : {0.5, 1.0, 2.0}) {
        for (double fw : {0.5, 1.0, 2.0}) {
            const double up = ponderomotive_energy(LaserPulse(0.05 * fe, 0.05 * fw, 3));
            CHECK(up == doctest::Approx(base * fe * fe / (fw * fw)).epsilon(1e-14));
        }
    }
}

TEST_CASE("invalid construction is rejected")
{
    CHECK_THROWS_AS(LaserPulse(0.0, 0.05, 5), InvalidArgument);
    CHECK_THROWS_AS(LaserPulse(0.05, -1.0, 5), InvalidArgument);
    CHECK_THROWS_AS(LaserPulse(0.05, 0.05, 0), InvalidArgument);
    CHECK_THROWS_AS(AtomModel(0.0), InvalidArgument);
    CHECK_THROWS_AS(AtomModel(0.5, -1.0), InvalidArgument);
    CHECK_THROWS_AS(ModeSet(0.0), InvalidArgument);
    CHECK_THROWS_AS(ModeSet(1e14, {2, 3}), InvalidArgument);
    CHECK_THROWS_AS(ModeSet(1e14, {1, 3, 2}), InvalidArgument);
    CHECK_THROWS_AS(SimConfig(LaserPulse(0.05, 0.05, 5), AtomModel(0.5), ModeSet{}, {}, 0), InvalidArgument);
}

TEST_CASE("derived pulse quantities")
{
    const LaserPulse p(0.053, 0.057, 5, 0.0, 10.0);
    CHECK(p.duration() == doctest::Approx(2 * kPi * 5 / 0.057));
    CHECK(p.end_time() == doctest::Approx(10.0 + p.duration()));
    const SimConfig c(p, AtomModel(0.5));
    CHECK(c.measurement_time() == p.end_time());
    CHECK(c.modes().V() == 1e14);
    CHECK(c.modes().orders() == std::vector<int>{1, 2, 3});
    CHECK(c.n_atoms() == 1);
}

TEST_CASE("regime warnings")
{
    const SimConfig mir(LaserPulse(0.106, 0.009, 5), AtomModel(0.5));
    CHECK(validate_regime(mir).empty());

    const SimConfig strong(LaserPulse(0.2, 0.057, 5), AtomModel(0.5));
    const auto w = validate_regime(strong);
    REQUIRE(w.size() == 1);
    CHECK(w[0].code == "over_the_barrier");

    const double up = ponderomotive_energy(mir.pulse());
    const double energies[] = {2.0 * up, 3.0 * up};
    const auto r = validate_regime(mir, energies);
    REQUIRE(r.size() == 1);
    CHECK(r[0].code == "rescattering");
}

TEST_CASE("momentum for energy")
{
    const LaserPulse p(0.106, 0.009, 5);
    const double up = ponderomotive_energy(p);
    CHECK(momentum_for_energy(p, 1.0) == doctest::Approx(std::sqrt(2 * up)));
    CHECK(momentum_for_energy(p, 2.2, -1.0) == doctest::Approx(-std::sqrt(4.4 * up)));
    CHECK(momentum_for_energy(p, 0.0) == 0.0);
    CHECK_THROWS_AS(momentum_for_energy(p, -1.0), InvalidArgument);
}

TEST_CASE("dipole form names round-trip")
{
    for (auto f : {DipoleForm::hydrogenic, DipoleForm::gaussian}) CHECK(dipole_form_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(dipole_form_from_string("slater"), InvalidArgument);
}
