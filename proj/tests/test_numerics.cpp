#include "doctest.h"

#include <cmath>

#include "atiqo/expoly.hpp"
#include "atiqo/numerics.hpp"

using namespace atiqo;
using namespace atiqo::numerics;

TEST_CASE("adaptive 1D quadrature examples")
{
    QuadratureSpec spec;
    const auto a = integrate_1d([](double x) { return cplx{x * x, 0.0}; }, 0.0, 1.0, spec);
    CHECK(std::abs(a.value - 1.0 / 3.0) < 1e-12);
    CHECK(a.error + 1e-16 >= std::abs(a.value - 1.0 / 3.0));

    spec.initial_panels = 50;
    const auto b = integrate_1d([](double t) { return std::exp(cplx{0.0, 50.0 * t}); }, 0.0, 2 * kPi, spec);
    CHECK(std::abs(b.value) < 1e-9);

    const auto c = integrate_1d([](double x) { return cplx{std::exp(x), 0.0}; }, 0.0, 1.0, QuadratureSpec{});
    CHECK(std::abs(c.value - (std::exp(1.0) - 1.0)) < 1e-12);
    CHECK(c.error + 1e-16 >= std::abs(c.value - (std::exp(1.0) - 1.0)));
}

TEST_CASE("1D quadrature budget exhaustion names the interval")
{
    QuadratureSpec spec;
    spec.max_subdivisions = 10;
    spec.rel_tol = 1e-14;
    spec.abs_tol = 1e-300;
    try {
        integrate_1d([](double x) { return cplx{1.0 / std::sqrt(std::abs(x - 0.3)), 0.0}; }, 0.0, 1.0, spec);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
        CHECK(std::string(e.what()).find("[") != std::string::npos);
    }
}

TEST_CASE("nested 2D quadrature examples")
{
    QuadratureSpec spec;
    Domain2D rect;
    CHECK(std::abs(integrate_2d_nested([](double, double) { return cplx{1.0, 0.0}; }, rect, spec).value - 1.0) < 1e-12);
    Domain2D tri{DomainShape::ordered, 0.0, 1.0};
    CHECK(std::abs(integrate_2d_nested([](double, double) { return cplx{1.0, 0.0}; }, tri, spec).value - 0.5) < 1e-12);
    Domain2D sc{DomainShape::rectangle, 0.0, kPi, 0.0, kPi / 2};
    const auto r = integrate_2d_nested([](double x, double y) { return cplx{std::sin(x) * std::cos(y), 0.0}; }, sc, spec);
    CHECK(std::abs(r.value - 2.0) < 1e-10);
}

TEST_CASE("Gauss-Legendre panels integrate polynomials exactly")
{
    for (int order : {10, 15, 20}) {
        const auto rule = gauss_legendre(order, -1.0, 2.0);
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 2 * order - 1);
        const double exact = (std::pow(2.0, 2 * order) - 1.0) / (2 * order);
        CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
    CHECK_THROWS_AS(gauss_legendre(12, 0, 1), InvalidArgument);
    const auto comp = composite_gauss_legendre(10, 7, 0.0, 3.0);
    CHECK(comp.nodes.size() == 70);
}

TEST_CASE("grid refinement")
{
    const auto x = linspace(0.0, 2.0, 3);
    const auto y = linspace(-1.0, 1.0, 3);
    const Grid2D constant = evaluate_grid_serial(x, y, [](double, double) { return 4.25; });
    const auto rc = interpolate_refine(constant, 17, 9, InterpMethod::bicubic);
    for (double v : rc.values()) CHECK(v == doctest::Approx(4.25).epsilon(1e-14));

    const Grid2D affine = evaluate_grid_serial(x, y, [](double a, double b) { return 2 * a + 3 * b; });
    const auto ra = interpolate_refine(affine, 11, 13, InterpMethod::bilinear);
    for (std::size_t iy = 0; iy < ra.ny(); ++iy)
        for (std::size_t ix = 0; ix < ra.nx(); ++ix)
            CHECK(ra.at(ix, iy) == doctest::Approx(2 * ra.x_axis()[ix] + 3 * ra.y_axis()[iy]).epsilon(1e-13));

    const auto again = interpolate_refine(ra, 11, 13, InterpMethod::bilinear);
    CHECK(again.values() == ra.values());
}

TEST_CASE("bicubic refinement of sin x sin y")
{
    const auto x = linspace(0.0, kPi, 20);
    const Grid2D g = evaluate_grid_serial(x, x, [](double a, double b) { return std::sin(a) * std::sin(b); });
    const auto r = interpolate_refine(g, 200, 200, InterpMethod::bicubic);
    double err = 0.0;
    for (std::size_t iy = 0; iy < r.ny(); ++iy)
        for (std::size_t ix = 0; ix < r.nx(); ++ix)
            err = std::max(err, std::abs(r.at(ix, iy) - std::sin(r.x_axis()[ix]) * std::sin(r.y_axis()[iy])));
    CHECK(err < 1e-3);
}

TEST_CASE("parallel grid evaluation equals the serial reference")
{
    const auto x = linspace(-2.0, 2.0, 31);
    const auto y = linspace(-1.0, 3.0, 17);
    auto f = [](double a, double b) { return std::exp(-a * a) * std::cos(3 * b) + a * b; };
    const auto s = evaluate_grid_serial(x, y, f);
    for (int threads : {1, 2, 4}) CHECK(evaluate_grid(x, y, f, threads).values() == s.values());
}

TEST_CASE("ExpPoly antiderivative and product")
{
    using field::ExpPoly;
    const ExpPoly a = ExpPoly::monomial(2.0, 2, 0.3) + ExpPoly::constant(1.5);
    const ExpPoly b = ExpPoly::monomial(cplx{0.0, 1.0}, 1, -0.7);
    const ExpPoly prod = a * b;
    const ExpPoly anti = prod.antiderivative();
    CHECK(std::abs(anti(0.0)) < 1e-15);
    QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    const auto q = integrate_1d([&](double s) { return prod(s); }, 0.0, 4.0, spec);
    CHECK(std::abs(anti(4.0) - q.value) < 1e-11 * std::abs(q.value));
    const cplx s{1.2, 0.4};
    CHECK(std::abs(prod(s) - a(s) * b(s)) < 1e-13);
    CHECK(std::abs(anti.derivative()(s) - prod(s)) < 1e-12);
}
