#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atiqo/core.hpp"
#include "atiqo/field.hpp"
#include "atiqo/numerics.hpp"
#include "atiqo/qo_state.hpp"

namespace atiqo::wigner {

/// w(bt, d1, d2) = e^{bt*(d2-d1) - bt(d2-d1)*} e^{(d1 d2* - d1* d2)/2} e^{-|2 bt - d1 - d2|^2 / 2}
cplx wigner_kernel(cplx beta_tilde, cplx d1, cplx d2);

enum class Strategy { saddle, quadrature };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// Discretized driving-mode state sum_a c_a |delta_a> over all modes, with
/// the phases phi_a of every mode kept alongside.
struct NodeSet {
    std::vector<cplx> c;
    std::vector<std::vector<qo::ModeAmplitude>> modes;
    std::size_t fundamental = 0;

    std::size_t size() const { return c.size(); }
    cplx d(std::size_t a) const { return modes[a][fundamental].delta; }
    /// Same state after the displacement D(alpha) of the fundamental:
    /// D(alpha)|d> = exp(i Im(alpha d*)) |alpha + d>.
    NodeSet displaced(cplx alpha) const;
};

/// One node with d = 0 and unit weight: the undisplaced vacuum.
NodeSet vacuum_nodes(const std::vector<int>& orders = {1});

/// Nodes at the saddle-point ionization times of the branch.
NodeSet saddle_nodes(const qo::QOBranch& branch);

struct QuadratureOptions {
    /// Interpolation nodes per coarse panel (10, 15 or 20).
    int coarse_order = 10;
    /// Initial coarse panels per carrier cycle; doubled until converged.
    int coarse_panels_per_cycle = 4;
    int max_doublings = 3;
    /// Relative change in norm and mean amplitude accepted as converged.
    double tolerance = 1e-4;
    /// Radians of action phase per 20-point fine panel.
    double phase_per_panel = 4.0;
};

/// Nodes for the full double-time integral over real ionization times.
///
/// M(p, t') is integrated on a fine Gauss-Legendre grid against the Lagrange
/// basis of coarse interpolation nodes, c_a = int M(t) L_a(t) dt, while delta
/// and phi, which vary on the cycle scale, are evaluated at the coarse nodes
/// only. The coarse grid is refined until the state norm and mean settle.
NodeSet quadrature_nodes(double p, const SimConfig& config, const field::PulseField& f,
                         const QuadratureOptions& options = {});

/// The fundamental traced against everything else:
/// h(a, b) = C_HH(a, b) exp(i (phi_b - phi_a)) for the fundamental phases phi.
struct PairForm {
    std::vector<cplx> c;
    std::vector<cplx> d;
    std::vector<cplx> h;  // row-major, size n * n, Hermitian

    std::size_t size() const { return c.size(); }
    cplx H(std::size_t a, std::size_t b) const { return h[a * c.size() + b]; }

    /// Trace of the reduced state, sum conj(c_a) c_b h_ab <d_a|d_b>.
    double norm() const;
    /// <a> of the reduced state (the annihilation-operator mean).
    cplx mean() const;
};

PairForm pair_form(const NodeSet& nodes);

/// W of a reduced driving-mode state and its lowest moments.
class StateModel {
public:
    virtual ~StateModel() = default;
    /// W(bt) divided by the state norm (integrates to 1). `imag` receives the
    /// imaginary part before it is discarded.
    virtual double operator()(cplx beta_tilde, double* imag = nullptr) const = 0;
    virtual double norm() const = 0;
    virtual cplx mean() const = 0;
    virtual std::size_t nodes() const = 0;
};

/// Quadratic form over node pairs through the factorization
/// w(bt, d_a, d_b) = e^{-2|bt|^2} e^{2 bt d_a*} e^{2 bt* d_b} P_ab.
///
/// Rounding in each of the n^2 entries adds up independently, so this loses
/// the result when sum |c_a| greatly exceeds |sum c_a|.
class PairEvaluator final : public StateModel {
public:
    explicit PairEvaluator(PairForm pairs);
    explicit PairEvaluator(const NodeSet& nodes);

    double operator()(cplx beta_tilde, double* imag = nullptr) const override;
    double norm() const override { return norm_; }
    cplx mean() const override { return mean_; }
    std::size_t nodes() const override { return pairs_.size(); }
    const PairForm& pairs() const { return pairs_; }

private:
    PairForm pairs_;
    std::vector<cplx> g_;  // h_ab P_ab, Hermitian
    double norm_;
    cplx mean_;
};

/// Series form. Expanding exp(conj(x_a) x_b) for every mode turns the pair
/// sum into W = (2/pi) e^{-2|bt|^2} sum_k (-1)^{k_1} / k! |S_k(bt)|^2 with
/// linear node sums S_k(bt) = sum_b c_b e^{i phi_b} e^{-|x_b|^2/2} e^{2 bt* d_b} x_b^k,
/// which keep the accuracy of the node weights. Practical while max |delta|
/// per mode stays near or below one.
class MomentEvaluator final : public StateModel {
public:
    explicit MomentEvaluator(const NodeSet& nodes, double truncation = 1e-16);

    double operator()(cplx beta_tilde, double* imag = nullptr) const override;
    double norm() const override { return norm_; }
    cplx mean() const override { return mean_; }
    std::size_t nodes() const override { return cw_.size(); }
    std::size_t terms() const { return powers_.size(); }

private:
    std::vector<cplx> cw_;                  // c_b e^{i phi_b} e^{-|x_b|^2 / 2}
    std::vector<cplx> d_;                   // fundamental delta
    std::vector<std::vector<cplx>> basis_;  // x_b^k per retained multi-index
    std::vector<std::vector<int>> powers_;
    std::vector<double> coef_;              // (-1)^{k_1} / k!
    double norm_;
    cplx mean_;
};

enum class Representation { automatic, pairs, moments };

std::string to_string(Representation r);
Representation representation_from_string(const std::string& name);

/// automatic picks the moment series when every mode has max |delta| <= 1 and
/// the pair form otherwise.
std::unique_ptr<StateModel> make_model(const NodeSet& nodes, Representation representation = Representation::automatic);

/// Direct double loop over node pairs with wigner_kernel; serial reference.
double evaluate_reference(const PairForm& pairs, cplx beta_tilde, double* imag = nullptr);
double evaluate_reference(const NodeSet& nodes, cplx beta_tilde, double* imag = nullptr);

double wigner_point(cplx beta_tilde, const qo::QOBranch& branch, Strategy strategy, const SimConfig& config);

struct RefineSpec {
    std::size_t nx;
    std::size_t ny;
    numerics::InterpMethod method = numerics::InterpMethod::bilinear;
};

struct WignerRequest {
    /// Signed canonical momentum of the conditioning projector.
    double p = 0.0;
    /// Bounds on Re and Im of beta - alpha.
    double x_lo = -4.0;
    double x_hi = 4.0;
    double y_lo = -4.0;
    double y_hi = 4.0;
    /// Interpret the bounds relative to the mean amplitude of the state.
    bool center_on_mean = false;
    std::size_t nx = 40;
    std::size_t ny = 40;
    Strategy strategy = Strategy::saddle;
    std::optional<RefineSpec> refine_to;
    bool normalize = false;
    /// Coherent amplitude of the driving laser. The map is evaluated in the lab
    /// frame at beta = beta_tilde + alpha on the displaced state, which leaves
    /// the beta_tilde map unchanged.
    cplx alpha{0.0, 0.0};
    /// OpenMP threads for the grid; <= 0 uses the default.
    int threads = 0;
    QuadratureOptions quadrature;
    Representation representation = Representation::automatic;
};

struct WignerResult {
    numerics::Grid2D grid;
    double max_abs;
    double min_value;
    /// max |Im W| before it was discarded, on the initial grid.
    double imag_residual;
    /// Location of the maximum on the output grid.
    cplx peak;
    /// First moment of W over the output grid.
    cplx centroid;
    /// Analytic mean amplitude of the reduced state (beta_tilde frame).
    cplx mean;
    /// Riemann sum of W over the output grid before max normalization.
    double integral;
    std::size_t nodes;
};

NodeSet build_nodes(const WignerRequest& request, const SimConfig& config, const field::PulseField& f);

WignerResult wigner_map(const WignerRequest& request, const SimConfig& config);
/// Same map from precomputed nodes.
WignerResult wigner_map(const WignerRequest& request, const NodeSet& nodes);

/// Single-threaded evaluation of the same map with evaluate_reference.
WignerResult wigner_map_serial(const WignerRequest& request, const NodeSet& nodes);

/// Largest |delta| accepted by strategy_crosscheck.
inline constexpr double kSaddleDeltaLimit = 0.3;

/// Max over the sample points of |W_saddle - W_quadrature| / max |W_quadrature|.
/// Refuses branches with max |delta| above kSaddleDeltaLimit.
double strategy_crosscheck(const qo::QOBranch& branch, const std::vector<cplx>& sample_points,
                           const SimConfig& config, const QuadratureOptions& options = {});

}  // namespace atiqo::wigner
