#include "atiqo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <omp.h>

namespace atiqo::numerics {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Panel {
    double a;
    double b;
    cplx value;
    double error;
    double magnitude;  // int |f|
    bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk21(const ComplexIntegrand& f, double a, double b)
{
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    // With an even Gauss order the 10 Gauss nodes sit at the odd Kronrod indices.
    const auto& wg = boost::math::quadrature::gauss<double, 10>::weights();

    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx f0 = f(c);
    cplx k = wk[0] * f0;
    cplx g{};
    double m = wk[0] * std::abs(f0);
    for (std::size_t j = 1; j < x.size(); ++j) {
        const cplx fl = f(c - h * x[j]);
        const cplx fr = f(c + h * x[j]);
        const cplx s = fl + fr;
        k += wk[j] * s;
        m += wk[j] * (std::abs(fl) + std::abs(fr));
        if (j % 2 == 1) g += wg[j / 2] * s;
    }
    k *= h;
    g *= h;
    m *= std::abs(h);
    return {a, b, k, std::abs(k - g), m};
}

}  // namespace

void QuadratureSpec::validate() const
{
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("QuadratureSpec: tolerances must be > 0");
    if (max_subdivisions < 10) throw InvalidArgument("QuadratureSpec: max_subdivisions must be >= 10");
    if (initial_panels < 1) throw InvalidArgument("QuadratureSpec: initial_panels must be >= 1");
}

QuadResult integrate_1d(const ComplexIntegrand& f, double a, double b, const QuadratureSpec& spec)
{
    spec.validate();
    if (a == b) return {cplx{}, 0.0, 0};
    if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidArgument("integrate_1d: bounds must be finite");

    std::priority_queue<Panel> heap;
    cplx total{};
    double err = 0.0;
    double magnitude = 0.0;
    int evals = 0;
    const int n0 = spec.initial_panels;
    for (int k = 0; k < n0; ++k) {
        const double lo = a + (b - a) * k / n0;
        const double hi = k + 1 == n0 ? b : a + (b - a) * (k + 1) / n0;
        Panel p = gk21(f, lo, hi);
        evals += 21;
        total += p.value;
        err += p.error;
        magnitude += p.magnitude;
        heap.push(p);
    }

    int subdivisions = n0;
    // Cancellation inside the integrand limits what any rule can resolve; the
    // floor is a small multiple of machine epsilon times int |f|.
    auto target = [&] {
        return std::max({spec.abs_tol, spec.rel_tol * std::abs(total), 50.0 * kEps * magnitude});
    };
    while (err > target()) {
        if (subdivisions >= spec.max_subdivisions) {
            const Panel& worst = heap.top();
            std::ostringstream msg;
            msg << "integrate_1d: no convergence on [" << a << ", " << b << "] after " << subdivisions
                << " subdivisions; worst interval [" << worst.a << ", " << worst.b << "] error "
                << worst.error << " (total " << err << ")";
            throw ConvergenceError(msg.str());
        }
        Panel worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval is at machine resolution; nothing more to gain.
            heap.push(worst);
            break;
        }
        Panel left = gk21(f, worst.a, mid);
        Panel right = gk21(f, mid, worst.b);
        evals += 42;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        magnitude += left.magnitude + right.magnitude - worst.magnitude;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
    }

    // Recompute the sums from the panels to shed accumulated rounding.
    total = cplx{};
    err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    return {total, err, evals};
}

QuadResult integrate_2d_nested(const std::function<cplx(double, double)>& f, const Domain2D& domain,
                               const QuadratureSpec& spec)
{
    spec.validate();
    int evals = 0;
    double inner_err = 0.0;
    QuadratureSpec inner = spec;
    auto outer = [&](double x) {
        const double lo = domain.shape == DomainShape::ordered ? domain.x_lo : domain.y_lo;
        const double hi = domain.shape == DomainShape::ordered ? x : domain.y_hi;
        if (lo == hi) return cplx{};
        if (domain.shape == DomainShape::ordered) {
            const double frac = (hi - lo) / (domain.x_hi - domain.x_lo);
            inner.initial_panels = std::max(1, static_cast<int>(std::ceil(spec.initial_panels * frac)));
        }
        QuadResult r = integrate_1d([&](double y) { return f(x, y); }, lo, hi, inner);
        evals += r.evaluations;
        inner_err = std::max(inner_err, r.error);
        return r.value;
    };
    QuadResult r = integrate_1d(outer, domain.x_lo, domain.x_hi, spec);
    const double span = domain.x_hi - domain.x_lo;
    return {r.value, r.error + inner_err * std::abs(span), evals};
}

PanelRule gauss_legendre(int order, double a, double b)
{
    std::vector<double> x;
    std::vector<double> w;
    auto fill = [&](const auto& abscissa, const auto& weights) {
        x.assign(abscissa.begin(), abscissa.end());
        w.assign(weights.begin(), weights.end());
    };
    switch (order) {
    case 10:
        fill(boost::math::quadrature::gauss<double, 10>::abscissa(), boost::math::quadrature::gauss<double, 10>::weights());
        break;
    case 15:
        fill(boost::math::quadrature::gauss<double, 15>::abscissa(), boost::math::quadrature::gauss<double, 15>::weights());
        break;
    case 20:
        fill(boost::math::quadrature::gauss<double, 20>::abscissa(), boost::math::quadrature::gauss<double, 20>::weights());
        break;
    default: throw InvalidArgument("gauss_legendre: order must be 10, 15 or 20");
    }
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    PanelRule rule;
    // Boost stores the non-negative half; a zero node appears once for odd orders.
    for (std::size_t j = x.size(); j-- > 0;) {
        if (x[j] == 0.0) continue;
        rule.nodes.push_back(c - h * x[j]);
        rule.weights.push_back(h * w[j]);
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        rule.nodes.push_back(c + h * x[j]);
        rule.weights.push_back(h * w[j]);
    }
    return rule;
}

PanelRule composite_gauss_legendre(int order, int panels, double a, double b)
{
    if (panels < 1) throw InvalidArgument("composite_gauss_legendre: panels must be >= 1");
    PanelRule out;
    out.nodes.reserve(static_cast<std::size_t>(order) * panels);
    out.weights.reserve(static_cast<std::size_t>(order) * panels);
    for (int k = 0; k < panels; ++k) {
        const double lo = a + (b - a) * k / panels;
        const double hi = k + 1 == panels ? b : a + (b - a) * (k + 1) / panels;
        PanelRule r = gauss_legendre(order, lo, hi);
        out.nodes.insert(out.nodes.end(), r.nodes.begin(), r.nodes.end());
        out.weights.insert(out.weights.end(), r.weights.begin(), r.weights.end());
    }
    return out;
}

Grid2D::Grid2D(std::vector<double> x_axis, std::vector<double> y_axis, std::vector<double> values)
    : x_(std::move(x_axis)), y_(std::move(y_axis)), values_(std::move(values))
{
    auto increasing = [](const std::vector<double>& v) {
        for (std::size_t k = 1; k < v.size(); ++k)
            if (!(v[k] > v[k - 1])) return false;
        return !v.empty();
    };
    if (!increasing(x_) || !increasing(y_)) throw InvalidArgument("Grid2D: axes must be non-empty and strictly increasing");
    if (values_.size() != x_.size() * y_.size()) throw InvalidArgument("Grid2D: value count does not match axes");
}

std::vector<double> linspace(double lo, double hi, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / (n - 1);
    return out;
}

namespace {

std::size_t locate(const std::vector<double>& axis, double x)
{
    // Index j with axis[j] <= x <= axis[j+1], clamped to valid cells.
    auto it = std::upper_bound(axis.begin(), axis.end(), x);
    std::size_t j = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
    return std::min(j, axis.size() - 2);
}

/// Natural cubic spline second derivatives for samples y on knots x.
std::vector<double> spline_second_derivatives(const std::vector<double>& x, std::span<const double> y)
{
    const std::size_t n = x.size();
    std::vector<double> m(n, 0.0);
    if (n < 3) return m;
    std::vector<double> c(n, 0.0);
    std::vector<double> d(n, 0.0);
    // Thomas algorithm on the interior equations.
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        const double a = h0 / 6.0;
        const double b = (h0 + h1) / 3.0;
        const double cc = h1 / 6.0;
        const double r = (y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0;
        const double denom = b - a * c[i - 1];
        c[i] = cc / denom;
        d[i] = (r - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
        m[i] = d[i] - c[i] * m[i + 1];
        if (i == 1) break;
    }
    return m;
}

double spline_eval(const std::vector<double>& x, std::span<const double> y, const std::vector<double>& m, double t)
{
    const std::size_t j = locate(x, t);
    const double h = x[j + 1] - x[j];
    const double a = (x[j + 1] - t) / h;
    const double b = (t - x[j]) / h;
    return a * y[j] + b * y[j + 1] + ((a * a * a - a) * m[j] + (b * b * b - b) * m[j + 1]) * h * h / 6.0;
}

}  // namespace

Grid2D interpolate_refine(const Grid2D& grid, std::size_t nx, std::size_t ny, InterpMethod method)
{
    if (grid.nx() < 2 || grid.ny() < 2) throw InvalidArgument("interpolate_refine: grid must be at least 2x2");
    if (nx < grid.nx() || ny < grid.ny()) throw InvalidArgument("interpolate_refine: target must not be coarser than the source");

    const auto& xs = grid.x_axis();
    const auto& ys = grid.y_axis();
    std::vector<double> xo = linspace(xs.front(), xs.back(), nx);
    std::vector<double> yo = linspace(ys.front(), ys.back(), ny);
    std::vector<double> out(nx * ny);
    const auto& v = grid.values();

    if (method == InterpMethod::bilinear) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t j = locate(ys, yo[iy]);
            const double u = (yo[iy] - ys[j]) / (ys[j + 1] - ys[j]);
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const std::size_t i = locate(xs, xo[ix]);
                const double s = (xo[ix] - xs[i]) / (xs[i + 1] - xs[i]);
                const double v00 = grid.at(i, j);
                const double v10 = grid.at(i + 1, j);
                const double v01 = grid.at(i, j + 1);
                const double v11 = grid.at(i + 1, j + 1);
                out[iy * nx + ix] = (1 - s) * (1 - u) * v00 + s * (1 - u) * v10 + (1 - s) * u * v01 + s * u * v11;
            }
        }
        return {std::move(xo), std::move(yo), std::move(out)};
    }

    // Splines along x for each source row, then along y for each output column.
    std::vector<double> rows(grid.ny() * nx);
    for (std::size_t j = 0; j < grid.ny(); ++j) {
        std::span<const double> row(v.data() + j * grid.nx(), grid.nx());
        const auto m = spline_second_derivatives(xs, row);
        for (std::size_t ix = 0; ix < nx; ++ix) rows[j * nx + ix] = spline_eval(xs, row, m, xo[ix]);
    }
    std::vector<double> col(grid.ny());
    for (std::size_t ix = 0; ix < nx; ++ix) {
        for (std::size_t j = 0; j < grid.ny(); ++j) col[j] = rows[j * nx + ix];
        const auto m = spline_second_derivatives(ys, col);
        for (std::size_t iy = 0; iy < ny; ++iy) out[iy * nx + ix] = spline_eval(ys, col, m, yo[iy]);
    }
    return {std::move(xo), std::move(yo), std::move(out)};
}

Grid2D evaluate_grid(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                     const std::function<double(double, double)>& f, int threads)
{
    const std::size_t nx = x_axis.size();
    const long ny = static_cast<long>(y_axis.size());
    std::vector<double> values(nx * y_axis.size());
    const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
    for (long iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) values[iy * nx + ix] = f(x_axis[ix], y_axis[iy]);
    }
    return {x_axis, y_axis, std::move(values)};
}

Grid2D evaluate_grid_serial(const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                            const std::function<double(double, double)>& f)
{
    std::vector<double> values(x_axis.size() * y_axis.size());
    for (std::size_t iy = 0; iy < y_axis.size(); ++iy)
        for (std::size_t ix = 0; ix < x_axis.size(); ++ix) values[iy * x_axis.size() + ix] = f(x_axis[ix], y_axis[iy]);
    return {x_axis, y_axis, std::move(values)};
}

}  // namespace atiqo::numerics
