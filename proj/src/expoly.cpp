#include "atiqo/expoly.hpp"

#include <algorithm>
#include <cmath>

namespace atiqo::field {

namespace {

constexpr double kFreqRelTol = 1e-12;

bool same_freq(double a, double b)
{
    return std::abs(a - b) <= kFreqRelTol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

ExpPoly ExpPoly::constant(cplx c)
{
    return monomial(c, 0, 0.0);
}

ExpPoly ExpPoly::monomial(cplx c, int power, double freq)
{
    if (power < 0) throw InvalidArgument("ExpPoly::monomial: negative power");
    ExpPoly out;
    std::vector<cplx> poly(static_cast<std::size_t>(power) + 1, cplx{});
    poly.back() = c;
    out.add_block(freq, poly);
    return out;
}

void ExpPoly::add_block(double freq, const std::vector<cplx>& poly)
{
    for (auto& b : blocks_) {
        if (same_freq(b.freq, freq)) {
            if (b.poly.size() < poly.size()) b.poly.resize(poly.size(), cplx{});
            for (std::size_t m = 0; m < poly.size(); ++m) b.poly[m] += poly[m];
            return;
        }
    }
    blocks_.push_back({freq, poly});
    std::sort(blocks_.begin(), blocks_.end(),
              [](const Block& a, const Block& b) { return a.freq < b.freq; });
}

void ExpPoly::trim()
{
    for (auto& b : blocks_) {
        while (!b.poly.empty() && b.poly.back() == cplx{}) b.poly.pop_back();
    }
    std::erase_if(blocks_, [](const Block& b) { return b.poly.empty(); });
}

cplx ExpPoly::operator()(cplx s) const
{
    const cplx i{0.0, 1.0};
    cplx total{};
    for (const auto& b : blocks_) {
        cplx poly{};
        for (auto it = b.poly.rbegin(); it != b.poly.rend(); ++it) poly = poly * s + *it;
        total += b.freq == 0.0 ? poly : poly * std::exp(i * b.freq * s);
    }
    return total;
}

ExpPoly ExpPoly::derivative() const
{
    const cplx i{0.0, 1.0};
    ExpPoly out;
    for (const auto& b : blocks_) {
        // d/ds [P e^{iks}] = (P' + ik P) e^{iks}
        std::vector<cplx> q(b.poly.size(), cplx{});
        for (std::size_t m = 0; m < b.poly.size(); ++m) {
            q[m] += i * b.freq * b.poly[m];
            if (m > 0) q[m - 1] += static_cast<double>(m) * b.poly[m];
        }
        out.add_block(b.freq, q);
    }
    out.trim();
    return out;
}

ExpPoly ExpPoly::antiderivative() const
{
    const cplx i{0.0, 1.0};
    ExpPoly out;
    cplx offset{};
    for (const auto& b : blocks_) {
        if (b.freq == 0.0) {
            std::vector<cplx> q(b.poly.size() + 1, cplx{});
            for (std::size_t m = 0; m < b.poly.size(); ++m)
                q[m + 1] = b.poly[m] / static_cast<double>(m + 1);
            out.add_block(0.0, q);
            continue;
        }
        // Q = sum_j (-1)^j P^(j) / (ik)^(j+1) solves Q' + ik Q = P.
        const cplx ik = i * b.freq;
        std::vector<cplx> deriv = b.poly;
        std::vector<cplx> q(b.poly.size(), cplx{});
        cplx denom = ik;
        double sign = 1.0;
        while (!deriv.empty()) {
            for (std::size_t m = 0; m < deriv.size(); ++m) q[m] += sign * deriv[m] / denom;
            std::vector<cplx> next(deriv.size() > 1 ? deriv.size() - 1 : 0);
            for (std::size_t m = 1; m < deriv.size(); ++m) next[m - 1] = static_cast<double>(m) * deriv[m];
            deriv = std::move(next);
            denom *= ik;
            sign = -sign;
        }
        out.add_block(b.freq, q);
        offset -= q[0];
    }
    out.add_block(0.0, {offset});
    out.trim();
    return out;
}

ExpPoly ExpPoly::modulated(double freq) const
{
    ExpPoly out;
    for (const auto& b : blocks_) {
        double f = b.freq + freq;
        if (std::abs(f) <= kFreqRelTol * (std::abs(b.freq) + std::abs(freq))) f = 0.0;
        out.add_block(f, b.poly);
    }
    out.trim();
    return out;
}

ExpPoly ExpPoly::operator+(const ExpPoly& other) const
{
    ExpPoly out = *this;
    for (const auto& b : other.blocks_) out.add_block(b.freq, b.poly);
    out.trim();
    return out;
}

ExpPoly ExpPoly::operator-(const ExpPoly& other) const
{
    return *this + other * cplx{-1.0, 0.0};
}

ExpPoly ExpPoly::operator*(cplx c) const
{
    ExpPoly out = *this;
    for (auto& b : out.blocks_)
        for (auto& v : b.poly) v *= c;
    out.trim();
    return out;
}

ExpPoly ExpPoly::operator*(const ExpPoly& other) const
{
    ExpPoly out;
    for (const auto& a : blocks_) {
        for (const auto& b : other.blocks_) {
            double f = a.freq + b.freq;
            if (std::abs(f) <= kFreqRelTol * (std::abs(a.freq) + std::abs(b.freq))) f = 0.0;
            std::vector<cplx> q(a.poly.size() + b.poly.size() - 1, cplx{});
            for (std::size_t m = 0; m < a.poly.size(); ++m)
                for (std::size_t n = 0; n < b.poly.size(); ++n) q[m + n] += a.poly[m] * b.poly[n];
            out.add_block(f, q);
        }
    }
    out.trim();
    return out;
}

}  // namespace atiqo::field
