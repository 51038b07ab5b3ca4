#pragma once

#include <vector>

#include "atiqo/core.hpp"

namespace atiqo::field {

/// Finite sum  sum_k P_k(s) exp(i kappa_k s)  with complex polynomial P_k.
///
/// Products and antiderivatives of such sums stay in the family, which gives
/// closed forms for the field, the vector potential and every running
/// integral of them that the trajectory code needs. Evaluation accepts
/// complex s, which is the analytic continuation used by the saddle solver.
class ExpPoly {
public:
    struct Block {
        double freq = 0.0;
        std::vector<cplx> poly;  // poly[m] multiplies s^m
    };

    ExpPoly() = default;

    static ExpPoly constant(cplx c);
    /// c * s^power * exp(i freq s)
    static ExpPoly monomial(cplx c, int power, double freq);

    cplx operator()(cplx s) const;
    double real_at(double s) const { return (*this)(cplx{s, 0.0}).real(); }

    ExpPoly derivative() const;
    /// Antiderivative F with F(0) = 0.
    ExpPoly antiderivative() const;
    /// Multiply by exp(i freq s).
    ExpPoly modulated(double freq) const;

    ExpPoly operator+(const ExpPoly& other) const;
    ExpPoly operator-(const ExpPoly& other) const;
    ExpPoly operator*(const ExpPoly& other) const;
    ExpPoly operator*(cplx c) const;

    const std::vector<Block>& blocks() const { return blocks_; }

private:
    void add_block(double freq, const std::vector<cplx>& poly);
    void trim();

    std::vector<Block> blocks_;
};

}  // namespace atiqo::field
