#pragma once

#include <functional>
#include <span>
#include <vector>

#include "atiqo/core.hpp"

namespace atiqo::numerics {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 2000;
    /// Equal-width panels the interval is split into before adapting.
    int initial_panels = 1;

    void validate() const;
};

struct QuadResult {
    cplx value;
    double error;
    int evaluations;
};

using ComplexIntegrand = std::function<cplx(double)>;

/// Globally adaptive G10/K21 quadrature of a complex integrand on [a, b].
/// Throws ConvergenceError naming the worst interval when the budget runs out.
QuadResult integrate_1d(const ComplexIntegrand& f, double a, double b, const QuadratureSpec& spec);

enum class DomainShape {
    /// a <= x <= b, c <= y <= d
    rectangle,
    /// a <= y <= x <= b  (the inner variable never exceeds the outer one)
    ordered,
};

struct Domain2D {
    DomainShape shape = DomainShape::rectangle;
    double x_lo = 0.0;
    double x_hi = 1.0;
    double y_lo = 0.0;  // rectangle only
    double y_hi = 1.0;  // rectangle only
};

/// Outer adaptive integral over x of an inner adaptive integral over y.
QuadResult integrate_2d_nested(const std::function<cplx(double, double)>& f, const Domain2D& domain,
                               const QuadratureSpec& spec);

/// Gauss-Legendre rule with `order` in {10, 15, 20} on [a, b].
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
PanelRule gauss_legendre(int order, double a, double b);

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points.
PanelRule composite_gauss_legendre(int order, int panels, double a, double b);

class Grid2D {
public:
    Grid2D(std::vector<double> x_axis, std::vector<double> y_axis, std::vector<double> values);

    const std::vector<double>& x_axis() const { return x_; }
    const std::vector<double>& y_axis() const { return y_; }
    std::size_t nx() const { return x_.size(); }
    std::size_t ny() const { return y_.size(); }

    /// Row iy, column ix.
    double at(std::size_t ix, std::size_t iy) const { return values_[iy * x_.size() + ix]; }
    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> values_;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

enum class InterpMethod { bilinear, bicubic };

/// Resample onto an nx-by-ny uniform grid spanning the same bounding box.
/// Bicubic uses tensor-product natural cubic splines.
Grid2D interpolate_refine(const Grid2D& grid, std::size_t nx, std::size_t ny, InterpMethod method);

/// Evaluate f on the tensor grid, rows (fixed y) distributed over OpenMP
/// threads. `threads` <= 0 uses the OpenMP default. The result does not depend
/// on the thread count.
Grid2D evaluate_grid(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                     const std::function<double(double, double)>& f, int threads = 0);

/// Single-threaded reference for evaluate_grid.
Grid2D evaluate_grid_serial(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                            const std::function<double(double, double)>& f);

}  // namespace atiqo::numerics
