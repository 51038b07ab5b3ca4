#pragma once

#include "atiqo/core.hpp"
#include "atiqo/field.hpp"
#include "atiqo/numerics.hpp"
#include "atiqo/trajectory.hpp"

namespace atiqo::sfa {

/// Bound-free dipole matrix element d(k) = <k|x|g>, odd in k.
class DipoleModel {
public:
    explicit DipoleModel(const AtomModel& atom)
        : form_(atom.dipole_form()), scale_(atom.dipole_scale()), Ip_(atom.Ip()) {}

    DipoleForm form() const { return form_; }
    double scale() const { return scale_; }

    cplx operator()(cplx k) const;

private:
    DipoleForm form_;
    double scale_;
    double Ip_;
};

cplx dipole(double p_kin, const AtomModel& atom);

/// M(p, t') = exp(-i S(p, t, t')) E(t') d(p + A(t')), t the measurement time.
cplx m_integrand(double p, double t_prime, const SimConfig& config, const field::PulseField& f);
cplx m_integrand(double p, double t_prime, const SimConfig& config);

/// Saddle-point contribution of one ionization time to int M dt'.
///
/// For the hydrogenic dipole E d has a double pole at every saddle; the
/// contribution is then evaluated by integrating by parts around the pole,
/// which gives (scale / 4) sqrt(2 pi / (i S'')) exp(-i S). Regular dipoles
/// use sqrt(2 pi / (i S'')) E d exp(-i S).
cplx event_weight(double p, const trajectory::SaddlePoint& saddle, const SimConfig& config,
                  const field::PulseField& f);
cplx event_weight(double p, const trajectory::SaddlePoint& saddle, const SimConfig& config);

/// int M(p, t') dt' over the pulse window by adaptive quadrature.
numerics::QuadResult direct_amplitude(double p, const SimConfig& config, const field::PulseField& f);

}  // namespace atiqo::sfa
