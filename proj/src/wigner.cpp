#include "atiqo/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <omp.h>

#include "atiqo/sfa.hpp"

namespace atiqo::wigner {

namespace {

const cplx I{0.0, 1.0};
constexpr double kTwoOverPi = 2.0 / kPi;

cplx pair_overlap(cplx a, cplx b)
{
    return qo::coherent_overlap(a, b);
}

}  // namespace

cplx wigner_kernel(cplx bt, cplx d1, cplx d2)
{
    // Written so that swapping d1 and d2 negates the phase exactly.
    const cplx dd = d2 - d1;
    const cplx s = 2.0 * bt - (d1 + d2);
    const double cross = bt.real() * dd.imag() - bt.imag() * dd.real();
    const double sym = d1.imag() * d2.real() - d1.real() * d2.imag();
    return std::polar(std::exp(-0.5 * std::norm(s)), 2.0 * cross + sym);
}

std::string to_string(Strategy s)
{
    return s == Strategy::saddle ? "saddle" : "quadrature";
}

Strategy strategy_from_string(const std::string& name)
{
    if (name == "saddle") return Strategy::saddle;
    if (name == "quadrature") return Strategy::quadrature;
    throw InvalidArgument("unknown strategy '" + name + "' (expected saddle or quadrature)");
}

double PairForm::norm() const
{
    const std::size_t n = size();
    cplx s{};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) s += std::conj(c[a]) * c[b] * H(a, b) * pair_overlap(d[a], d[b]);
    return s.real();
}

cplx PairForm::mean() const
{
    const std::size_t n = size();
    cplx s{};
    cplx m{};
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const cplx t = std::conj(c[a]) * c[b] * H(a, b) * pair_overlap(d[a], d[b]);
            s += t;
            m += t * d[b];
        }
    }
    return m / s.real();
}

NodeSet NodeSet::displaced(cplx alpha) const
{
    NodeSet out = *this;
    for (std::size_t a = 0; a < size(); ++a) {
        out.c[a] = c[a] * std::exp(I * (alpha * std::conj(d(a))).imag());
        out.modes[a][fundamental].delta = alpha + d(a);
    }
    return out;
}

NodeSet vacuum_nodes(const std::vector<int>& orders)
{
    const auto it = std::find(orders.begin(), orders.end(), 1);
    if (it == orders.end()) throw InvalidArgument("vacuum_nodes: mode set has no fundamental");
    std::vector<qo::ModeAmplitude> modes;
    for (int k : orders) modes.push_back({k, cplx{}, 0.0});
    return {{cplx{1.0, 0.0}}, {modes}, static_cast<std::size_t>(it - orders.begin())};
}

NodeSet saddle_nodes(const qo::QOBranch& branch)
{
    if (branch.events.empty()) throw PreconditionError("saddle_nodes: branch has no ionization events");
    NodeSet out;
    out.fundamental = branch.fundamental_index();
    for (const auto& ev : branch.events) {
        out.c.push_back(ev.weight);
        out.modes.push_back(ev.modes);
    }
    return out;
}

PairForm pair_form(const NodeSet& nodes)
{
    const std::size_t n = nodes.size();
    const std::size_t f = nodes.fundamental;
    PairForm out;
    out.c = nodes.c;
    out.d.resize(n);
    out.h.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) out.d[a] = nodes.d(a);
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long a = 0; a < nn; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double dphi = nodes.modes[b][f].phi - nodes.modes[a][f].phi;
            out.h[a * n + b] = qo::harmonic_overlap(nodes.modes[a], nodes.modes[b]) * std::exp(I * dphi);
        }
    }
    return out;
}

namespace {

struct FineGrid {
    std::vector<double> t;
    std::vector<double> w;
    std::vector<cplx> m;
    int groups;           // finest coarse-panel count
    std::size_t per_group;
};

FineGrid tabulate_m(double p, const SimConfig& config, const field::PulseField& f, int groups, double phase_per_panel)
{
    const auto& pulse = config.pulse();
    const double amax = 1.1 * pulse.E0() / pulse.omega();
    const double rate = 0.5 * (std::abs(p) + amax) * (std::abs(p) + amax) + config.atom().Ip();
    const double span = pulse.duration() / groups;
    const int sub = std::max(1, static_cast<int>(std::ceil(rate * span / phase_per_panel)));

    FineGrid g;
    g.groups = groups;
    g.per_group = static_cast<std::size_t>(sub) * 20;
    const std::size_t total = g.per_group * groups;
    g.t.resize(total);
    g.w.resize(total);
    g.m.resize(total);
    for (int k = 0; k < groups; ++k) {
        const double a = pulse.t0() + span * k;
        const double b = k + 1 == groups ? pulse.end_time() : a + span;
        const auto rule = numerics::composite_gauss_legendre(20, sub, a, b);
        std::copy(rule.nodes.begin(), rule.nodes.end(), g.t.begin() + k * g.per_group);
        std::copy(rule.weights.begin(), rule.weights.end(), g.w.begin() + k * g.per_group);
    }
    const long n = static_cast<long>(total);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) g.m[i] = sfa::m_integrand(p, g.t[i], config, f);
    return g;
}

NodeSet nodes_at_level(double p, const SimConfig& config, const field::PulseField& f, const FineGrid& g,
                       int panels, int order)
{
    const auto& pulse = config.pulse();
    const int stride = g.groups / panels;
    const double span = pulse.duration() / panels;
    const auto ref = numerics::gauss_legendre(order, -1.0, 1.0);

    // Barycentric weights of the reference nodes.
    std::vector<double> bw(order, 1.0);
    for (int j = 0; j < order; ++j)
        for (int k = 0; k < order; ++k)
            if (k != j) bw[j] /= ref.nodes[j] - ref.nodes[k];

    const std::size_t n = static_cast<std::size_t>(panels) * order;
    NodeSet out;
    out.c.assign(n, cplx{});
    out.modes.resize(n);
    std::vector<double> x(n);

    for (int k = 0; k < panels; ++k) {
        const double a = pulse.t0() + span * k;
        const double h = 0.5 * span;
        const double mid = a + h;
        for (int j = 0; j < order; ++j) x[k * order + j] = mid + h * ref.nodes[j];
        const std::size_t lo = static_cast<std::size_t>(k) * stride * g.per_group;
        const std::size_t hi = lo + static_cast<std::size_t>(stride) * g.per_group;
        std::vector<double> lag(order);
        for (std::size_t i = lo; i < hi; ++i) {
            const double u = (g.t[i] - mid) / h;
            double den = 0.0;
            int hit = -1;
            for (int j = 0; j < order; ++j) {
                const double diff = u - ref.nodes[j];
                if (diff == 0.0) {
                    hit = j;
                    break;
                }
                lag[j] = bw[j] / diff;
                den += lag[j];
            }
            if (hit >= 0) {
                std::fill(lag.begin(), lag.end(), 0.0);
                lag[hit] = 1.0;
                den = 1.0;
            }
            const cplx wm = g.w[i] * g.m[i];
            for (int j = 0; j < order; ++j) out.c[k * order + j] += wm * (lag[j] / den);
        }
    }

    // delta and phi must be smooth in t' to the last bit: the node sums cancel
    // down to |sum c_a| << sum |c_a|.
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic)
    for (long a = 0; a < nn; ++a) out.modes[a] = qo::mode_amplitudes(f, config, p, x[a], qo::ModeMethod::closed_form);

    const auto& orders = config.modes().orders();
    out.fundamental = static_cast<std::size_t>(std::find(orders.begin(), orders.end(), 1) - orders.begin());
    return out;
}

}  // namespace

NodeSet quadrature_nodes(double p, const SimConfig& config, const field::PulseField& f, const QuadratureOptions& options)
{
    if (options.coarse_panels_per_cycle < 1 || options.max_doublings < 0 || !(options.tolerance > 0.0)
        || !(options.phase_per_panel > 0.0))
        throw InvalidArgument("QuadratureOptions: invalid settings");
    if (options.coarse_order != 10 && options.coarse_order != 15 && options.coarse_order != 20)
        throw InvalidArgument("QuadratureOptions: coarse_order must be 10, 15 or 20");
    if (!config.modes().contains(1)) throw InvalidArgument("quadrature_nodes: mode set has no fundamental");
    const int k0 = options.coarse_panels_per_cycle * config.pulse().n_cycles();
    const int kmax = k0 << options.max_doublings;
    const FineGrid g = tabulate_m(p, config, f, kmax, options.phase_per_panel);

    double prev_norm = 0.0;
    cplx prev_mean{};
    double change = 0.0;
    for (int level = 0; level <= options.max_doublings; ++level) {
        NodeSet cur = nodes_at_level(p, config, f, g, k0 << level, options.coarse_order);
        const auto model = make_model(cur);
        const double nrm = model->norm();
        const cplx mu = model->mean();
        if (level > 0) {
            change = std::max(std::abs(nrm - prev_norm) / std::abs(nrm), std::abs(mu - prev_mean) / (1.0 + std::abs(mu)));
            if (change < options.tolerance) return cur;
        }
        prev_norm = nrm;
        prev_mean = mu;
    }
    std::ostringstream msg;
    msg << "quadrature_nodes: relative change " << change << " still above " << options.tolerance << " after "
        << options.max_doublings << " doublings of the coarse grid over [" << config.pulse().t0() << ", "
        << config.pulse().end_time() << "]";
    throw ConvergenceError(msg.str());
}

PairEvaluator::PairEvaluator(PairForm pairs)
    : pairs_(std::move(pairs))
{
    const std::size_t n = pairs_.size();
    if (n == 0) throw InvalidArgument("wigner::PairEvaluator: empty node set");
    g_.resize(n * n);
    const long nn = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long a = 0; a < nn; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const cplx da = pairs_.d[a];
            const cplx db = pairs_.d[b];
            const cplx p = std::exp(0.5 * (da * std::conj(db) - std::conj(da) * db) - 0.5 * std::norm(da + db));
            g_[a * n + b] = pairs_.H(a, b) * p;
        }
    }
    norm_ = pairs_.norm();
    if (!(norm_ > 0.0)) throw PreconditionError("wigner::PairEvaluator: state norm is not positive");
    mean_ = pairs_.mean();
}

PairEvaluator::PairEvaluator(const NodeSet& nodes)
    : PairEvaluator(pair_form(nodes))
{
}

double PairEvaluator::operator()(cplx bt, double* imag) const
{
    const std::size_t n = pairs_.size();
    const double b2 = std::norm(bt);
    std::vector<double> ur(n);
    std::vector<double> ui(n);
    for (std::size_t b = 0; b < n; ++b) {
        const cplx u = pairs_.c[b] * std::exp(2.0 * std::conj(bt) * pairs_.d[b] - b2);
        ur[b] = u.real();
        ui[b] = u.imag();
    }
    // sum_a conj(u_a) (G u)_a with plain real arithmetic in the inner loop.
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        const cplx* row = g_.data() + a * n;
        double vr = 0.0;
        double vi = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            const double gr = row[b].real();
            const double gi = row[b].imag();
            vr += gr * ur[b] - gi * ui[b];
            vi += gr * ui[b] + gi * ur[b];
        }
        sr += ur[a] * vr + ui[a] * vi;
        si += ur[a] * vi - ui[a] * vr;
    }
    if (imag) *imag = kTwoOverPi * si / norm_;
    return kTwoOverPi * sr / norm_;
}

namespace {

constexpr std::size_t kMaxMomentTerms = 20000;

/// Multi-indices k with prod_m r_m^{2 k_m} / k_m! >= cut.
void enumerate_powers(const std::vector<double>& r, double cut, std::size_t m, double weight, std::vector<int>& k,
                      std::vector<std::vector<int>>& out)
{
    if (m == r.size()) {
        out.push_back(k);
        if (out.size() > kMaxMomentTerms)
            throw PreconditionError("MomentEvaluator: more than " + std::to_string(kMaxMomentTerms)
                                    + " series terms; use the pair form for displacements this large");
        return;
    }
    double w = weight;
    for (int j = 0;; ++j) {
        k[m] = j;
        enumerate_powers(r, cut, m + 1, w, k, out);
        w *= r[m] * r[m] / (j + 1);
        if (w < cut) break;
    }
    k[m] = 0;
}

}  // namespace

MomentEvaluator::MomentEvaluator(const NodeSet& nodes, double truncation)
{
    const std::size_t n = nodes.size();
    if (n == 0) throw InvalidArgument("wigner::MomentEvaluator: empty node set");
    if (!(truncation > 0.0 && truncation < 1.0)) throw InvalidArgument("wigner::MomentEvaluator: truncation must be in (0, 1)");
    const std::size_t nm = nodes.modes[0].size();
    const std::size_t f = nodes.fundamental;

    std::vector<double> r(nm, 0.0);
    cw_.resize(n);
    d_.resize(n);
    for (std::size_t b = 0; b < n; ++b) {
        double phase = 0.0;
        double x2 = 0.0;
        for (std::size_t m = 0; m < nm; ++m) {
            const auto& md = nodes.modes[b][m];
            phase += md.phi;
            x2 += std::norm(md.delta);
            r[m] = std::max(r[m], std::abs(md.delta));
        }
        cw_[b] = nodes.c[b] * std::exp(cplx{-0.5 * x2, phase});
        d_[b] = nodes.d(b);
    }

    std::vector<int> k(nm, 0);
    enumerate_powers(r, truncation, 0, 1.0, k, powers_);

    basis_.assign(powers_.size(), std::vector<cplx>(n));
    coef_.resize(powers_.size());
    const long nt = static_cast<long>(powers_.size());
#pragma omp parallel for schedule(static)
    for (long t = 0; t < nt; ++t) {
        const auto& kt = powers_[t];
        double fact = 1.0;
        for (std::size_t m = 0; m < nm; ++m)
            for (int j = 2; j <= kt[m]; ++j) fact *= j;
        coef_[t] = (kt[f] % 2 == 0 ? 1.0 : -1.0) / fact;
        for (std::size_t b = 0; b < n; ++b) {
            cplx v{1.0, 0.0};
            for (std::size_t m = 0; m < nm; ++m)
                for (int j = 0; j < kt[m]; ++j) v *= nodes.modes[b][m].delta;
            basis_[t][b] = v;
        }
    }

    // norm = sum_k |m_k|^2 / k!, <a> = sum_k conj(m_k) m_{k + e_1} / k! / norm.
    double nrm = 0.0;
    cplx mu{};
    for (std::size_t t = 0; t < powers_.size(); ++t) {
        cplx m0{};
        cplx m1{};
        for (std::size_t b = 0; b < n; ++b) {
            const cplx v = cw_[b] * basis_[t][b];
            m0 += v;
            m1 += v * d_[b];
        }
        nrm += std::abs(coef_[t]) * std::norm(m0);
        mu += std::abs(coef_[t]) * std::conj(m0) * m1;
    }
    norm_ = nrm;
    if (!(norm_ > 0.0)) throw PreconditionError("wigner::MomentEvaluator: state norm is not positive");
    mean_ = mu / norm_;
}

double MomentEvaluator::operator()(cplx bt, double* imag) const
{
    const std::size_t n = cw_.size();
    const double b2 = std::norm(bt);
    std::vector<cplx> u(n);
    // The common factor exp(-|bt|^2) stays outside the node sums.
    for (std::size_t b = 0; b < n; ++b) u[b] = cw_[b] * std::exp(2.0 * std::conj(bt) * d_[b]);
    double s = 0.0;
    for (std::size_t t = 0; t < powers_.size(); ++t) {
        const cplx* x = basis_[t].data();
        double sr = 0.0;
        double si = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            sr += u[b].real() * x[b].real() - u[b].imag() * x[b].imag();
            si += u[b].real() * x[b].imag() + u[b].imag() * x[b].real();
        }
        s += coef_[t] * (sr * sr + si * si);
    }
    if (imag) *imag = 0.0;
    return kTwoOverPi * std::exp(-2.0 * b2) * s / norm_;
}

std::string to_string(Representation r)
{
    switch (r) {
    case Representation::automatic: return "automatic";
    case Representation::pairs: return "pairs";
    case Representation::moments: return "moments";
    }
    return "automatic";
}

Representation representation_from_string(const std::string& name)
{
    if (name == "automatic") return Representation::automatic;
    if (name == "pairs") return Representation::pairs;
    if (name == "moments") return Representation::moments;
    throw InvalidArgument("unknown representation '" + name + "' (expected automatic, pairs or moments)");
}

std::unique_ptr<StateModel> make_model(const NodeSet& nodes, Representation representation)
{
    if (nodes.size() == 0) throw InvalidArgument("make_model: empty node set");
    if (representation == Representation::automatic) {
        double r = 0.0;
        for (const auto& node : nodes.modes)
            for (const auto& m : node) r = std::max(r, std::abs(m.delta));
        representation = r <= 1.0 ? Representation::moments : Representation::pairs;
    }
    if (representation == Representation::moments) return std::make_unique<MomentEvaluator>(nodes);
    return std::make_unique<PairEvaluator>(nodes);
}

double evaluate_reference(const PairForm& pairs, cplx bt, double* imag)
{
    const std::size_t n = pairs.size();
    cplx s{};
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            s += std::conj(pairs.c[a]) * pairs.c[b] * pairs.H(a, b) * wigner_kernel(bt, pairs.d[a], pairs.d[b]);
    const double nrm = pairs.norm();
    if (imag) *imag = kTwoOverPi * s.imag() / nrm;
    return kTwoOverPi * s.real() / nrm;
}

double evaluate_reference(const NodeSet& nodes, cplx bt, double* imag)
{
    return evaluate_reference(pair_form(nodes), bt, imag);
}

double wigner_point(cplx bt, const qo::QOBranch& branch, Strategy strategy, const SimConfig& config)
{
    if (strategy == Strategy::saddle) return (*make_model(saddle_nodes(branch)))(bt);
    const field::PulseField f(config.pulse());
    return (*make_model(quadrature_nodes(branch.p, config, f)))(bt);
}

NodeSet build_nodes(const WignerRequest& request, const SimConfig& config, const field::PulseField& f)
{
    if (request.strategy == Strategy::saddle) return saddle_nodes(qo::build_branch(request.p, config, f));
    return quadrature_nodes(request.p, config, f, request.quadrature);
}

namespace {

void check_request(const WignerRequest& r)
{
    if (!std::isfinite(r.x_lo) || !std::isfinite(r.x_hi) || !std::isfinite(r.y_lo) || !std::isfinite(r.y_hi))
        throw InvalidArgument("WignerRequest: bounds must be finite");
    if (!(r.x_hi > r.x_lo) || !(r.y_hi > r.y_lo)) throw InvalidArgument("WignerRequest: empty phase-space window");
    if (r.nx < 2 || r.ny < 2) throw InvalidArgument("WignerRequest: nx and ny must be >= 2");
}

template <class PointFn>
WignerResult assemble(const WignerRequest& request, cplx mean, std::size_t nodes, PointFn&& point, bool parallel)
{
    check_request(request);
    const cplx off = request.center_on_mean ? mean : cplx{};
    const auto xs = numerics::linspace(request.x_lo + off.real(), request.x_hi + off.real(), request.nx);
    const auto ys = numerics::linspace(request.y_lo + off.imag(), request.y_hi + off.imag(), request.ny);

    const std::size_t nx = xs.size();
    const long ny = static_cast<long>(ys.size());
    std::vector<double> re(nx * ys.size());
    std::vector<double> im(nx * ys.size());
    const int nt = request.threads > 0 ? request.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt) if (parallel)
    for (long iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            double v_im = 0.0;
            re[iy * nx + ix] = point(cplx{xs[ix], ys[iy]} + request.alpha, &v_im);
            im[iy * nx + ix] = v_im;
        }
    }

    double max_abs = 0.0;
    double imag_res = 0.0;
    for (std::size_t k = 0; k < re.size(); ++k) {
        max_abs = std::max(max_abs, std::abs(re[k]));
        imag_res = std::max(imag_res, std::abs(im[k]));
    }
    if (imag_res > 1e-6 * max_abs) {
        std::ostringstream msg;
        msg << "wigner_map: imaginary residual " << imag_res << " exceeds 1e-6 of max |W| = " << max_abs;
        throw Error(msg.str());
    }

    numerics::Grid2D grid(xs, ys, std::move(re));
    if (request.refine_to) grid = numerics::interpolate_refine(grid, request.refine_to->nx, request.refine_to->ny, request.refine_to->method);

    const auto& gx = grid.x_axis();
    const auto& gy = grid.y_axis();
    const double cell = (gx.back() - gx.front()) / (gx.size() - 1) * (gy.back() - gy.front()) / (gy.size() - 1);
    double mx = -std::numeric_limits<double>::infinity();
    double mn = std::numeric_limits<double>::infinity();
    double total = 0.0;
    cplx first{};
    cplx peak{};
    max_abs = 0.0;
    for (std::size_t iy = 0; iy < gy.size(); ++iy) {
        for (std::size_t ix = 0; ix < gx.size(); ++ix) {
            const double v = grid.at(ix, iy);
            if (v > mx) {
                mx = v;
                peak = {gx[ix], gy[iy]};
            }
            mn = std::min(mn, v);
            max_abs = std::max(max_abs, std::abs(v));
            // Trapezoid weights along both axes.
            const double wx = (ix == 0 || ix + 1 == gx.size()) ? 0.5 : 1.0;
            const double wy = (iy == 0 || iy + 1 == gy.size()) ? 0.5 : 1.0;
            total += wx * wy * v;
            first += wx * wy * v * cplx{gx[ix], gy[iy]};
        }
    }

    WignerResult out{grid, max_abs, mn, imag_res, peak, first / total, mean, total * cell, nodes};
    if (request.normalize && max_abs > 0.0) {
        std::vector<double> v = out.grid.values();
        for (double& x : v) x /= max_abs;
        out.grid = numerics::Grid2D(gx, gy, std::move(v));
        out.min_value /= max_abs;
        out.imag_residual /= max_abs;
        out.max_abs = 1.0;
    }
    return out;
}

}  // namespace

WignerResult wigner_map(const WignerRequest& request, const NodeSet& nodes)
{
    const NodeSet lab = request.alpha == cplx{} ? nodes : nodes.displaced(request.alpha);
    const auto model = make_model(lab, request.representation);
    const StateModel& ev = *model;
    return assemble(request, ev.mean() - request.alpha, ev.nodes(), [&](cplx b, double* im) { return ev(b, im); }, true);
}

WignerResult wigner_map(const WignerRequest& request, const SimConfig& config)
{
    check_request(request);
    const field::PulseField f(config.pulse());
    return wigner_map(request, build_nodes(request, config, f));
}

WignerResult wigner_map_serial(const WignerRequest& request, const NodeSet& nodes)
{
    const PairForm lab = pair_form(request.alpha == cplx{} ? nodes : nodes.displaced(request.alpha));
    return assemble(request, lab.mean() - request.alpha, lab.size(),
                    [&](cplx b, double* im) { return evaluate_reference(lab, b, im); }, false);
}

double strategy_crosscheck(const qo::QOBranch& branch, const std::vector<cplx>& sample_points, const SimConfig& config,
                           const QuadratureOptions& options)
{
    if (sample_points.empty()) throw InvalidArgument("strategy_crosscheck: no sample points");
    const std::size_t fi = branch.fundamental_index();
    double dmax = 0.0;
    for (const auto& ev : branch.events) dmax = std::max(dmax, std::abs(ev.modes[fi].delta));
    if (dmax > kSaddleDeltaLimit) {
        std::ostringstream msg;
        msg << "strategy_crosscheck: max |delta| = " << dmax << " exceeds " << kSaddleDeltaLimit
            << "; the saddle-point strategy assumes the action phase dominates the quantum-optical phase, "
               "which fails once N-scaled displacements are of order one";
        throw PreconditionError(msg.str());
    }
    const auto ws = make_model(saddle_nodes(branch));
    const field::PulseField f(config.pulse());
    const auto wq = make_model(quadrature_nodes(branch.p, config, f, options));
    double num = 0.0;
    double den = 0.0;
    for (cplx b : sample_points) {
        const double q = (*wq)(b);
        num = std::max(num, std::abs((*ws)(b) - q));
        den = std::max(den, std::abs(q));
    }
    return num / den;
}

}  // namespace atiqo::wigner
