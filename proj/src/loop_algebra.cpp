#include "cw/loop_algebra.hpp"

#include <cmath>

#include "cw/quadrature.hpp"

namespace cw {

namespace {

int defining_rank(LieAlgebra alg) { return alg == LieAlgebra::U1 ? 1 : 2; }
int adjoint_rank(LieAlgebra alg) { return alg == LieAlgebra::U1 ? 1 : 3; }

// e_a = -i sigma_a / 2, orthonormal for <A,B> = -2 tr(AB).
MatC su2_basis(int a) {
    MatC m = MatC::Zero(2, 2);
    const cxd i(0.0, 1.0);
    switch (a) {
        case 0:
            m(0, 1) = -i * 0.5;
            m(1, 0) = -i * 0.5;
            break;
        case 1:
            m(0, 1) = -0.5;
            m(1, 0) = 0.5;
            break;
        default:
            m(0, 0) = -i * 0.5;
            m(1, 1) = i * 0.5;
            break;
    }
    return m;
}

}  // namespace

LoopAlgebraElement LoopAlgebraElement::zero(LieAlgebra alg, int cutoff) {
    LoopAlgebraElement x;
    x.algebra = alg;
    x.value = FourierPoly::zero(defining_rank(alg), cutoff);
    return x;
}

LoopAlgebraElement LoopAlgebraElement::random(LieAlgebra alg, int cutoff, int max_mode,
                                              uint64_t seed) {
    LoopAlgebraElement x = zero(alg, cutoff);
    const int nb = alg == LieAlgebra::U1 ? 1 : 3;
    uint64_t ctr = 0;
    for (int a = 0; a < nb; ++a) {
        // real trig polynomial f_a(theta) = c0 + sum_k (c_k e^{ik} + conj c_k e^{-ik})
        const double c0 = 2.0 * counter_uniform(seed, ctr++, 0) - 1.0;
        MatC basis = alg == LieAlgebra::U1 ? MatC::Constant(1, 1, cxd(0.0, 1.0)) : su2_basis(a);
        x.value.mode(0) += c0 * basis;
        for (int k = 1; k <= std::min(max_mode, cutoff); ++k) {
            const cxd ck(2.0 * counter_uniform(seed, ctr, 0) - 1.0,
                         2.0 * counter_uniform(seed, ctr, 1) - 1.0);
            ++ctr;
            x.value.mode(k) += ck * basis;
            x.value.mode(-k) += std::conj(ck) * basis;
        }
    }
    return x;
}

double LoopAlgebraElement::reality_residual() const {
    double worst = 0.0;
    for (int k = -value.cutoff; k <= value.cutoff; ++k) {
        const MatC r = value.mode(k).adjoint() + value.mode(-k);
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

LoopAlgebraElement loop_bracket(const LoopAlgebraElement& x, const LoopAlgebraElement& y) {
    LoopAlgebraElement r = LoopAlgebraElement::zero(x.algebra, x.cutoff());
    FourierPoly xy = FourierPoly::product(x.value, y.value);
    FourierPoly yx = FourierPoly::product(y.value, x.value);
    xy -= yx;
    r.value = std::move(xy);
    return r;
}

LoopAlgebraElement sobolev_power(const LoopAlgebraElement& x, double s, SobolevWeight weight) {
    LoopAlgebraElement r = x;
    for (int k = -x.cutoff(); k <= x.cutoff(); ++k) {
        const double kk = static_cast<double>(k) * k;
        const double w = weight == SobolevWeight::Inhomogeneous ? std::pow(1.0 + kk, s)
                                                                : std::pow(kk, s);
        r.value.mode(k) *= w;
    }
    return r;
}

FourierPoly adjoint_rep(const LoopAlgebraElement& x) {
    if (x.algebra == LieAlgebra::U1) return FourierPoly::zero(1, x.cutoff());
    // [e_a, e_b] = eps_abc e_c; component x^a = -2 tr(X e_a).
    FourierPoly ad = FourierPoly::zero(3, x.cutoff());
    auto eps = [](int a, int b, int c) -> int {
        if (a == b || b == c || a == c) return 0;
        return ((b - a + 3) % 3 == 1) ? 1 : -1;
    };
    for (int k = -x.cutoff(); k <= x.cutoff(); ++k) {
        const MatC& Xk = x.value.mode(k);
        if (Xk.isZero(0.0)) continue;
        for (int a = 0; a < 3; ++a) {
            const cxd xa = -2.0 * (Xk * su2_basis(a)).trace();
            if (xa == cxd(0.0, 0.0)) continue;
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    if (eps(a, b, c) != 0)
                        ad.mode(k)(c, b) += static_cast<double>(eps(a, b, c)) * xa;
        }
    }
    return ad;
}

namespace {

SymbolExpansion smoothing_power(double s, int rank, int cutoff, int depth, SobolevWeight weight) {
    return weight == SobolevWeight::Inhomogeneous
               ? power_symbol(s, rank, cutoff, depth)
               : homogeneous_power_symbol(2.0 * s, rank, cutoff, depth);
}

SymbolExpansion middle_term(const LoopAlgebraElement& x, double s, int depth, SobolevWeight weight,
                            HsBracketVariant variant) {
    LoopAlgebraElement w = sobolev_power(x, s, weight);
    FourierPoly ad_w = adjoint_rep(w);
    if (variant == HsBracketVariant::KoszulBracket) ad_w *= cxd(-1.0, 0.0);  // [., W] = -ad_W
    const SymbolExpansion mult = multiplication_symbol(ad_w, depth);
    const SymbolExpansion p_minus = smoothing_power(-s, ad_w.rank, x.cutoff(), depth, weight);
    return compose(p_minus, mult);
}

}  // namespace

SymbolExpansion hs_connection_middle_term(const LoopAlgebraElement& x, double s, int depth,
                                          SobolevWeight weight, HsBracketVariant variant) {
    if (!(s > 0.5)) throw ValidationError("hs connection: requires s > 1/2");
    return symbol_scale(cxd(0.5, 0.0), middle_term(x, s, depth, weight, variant));
}

SymbolExpansion hs_connection_operator(const LoopAlgebraElement& x, double s, int depth,
                                       SobolevWeight weight, HsBracketVariant variant) {
    if (!(s > 0.5)) throw ValidationError("hs connection: requires s > 1/2");
    const int cutoff = x.cutoff();
    const FourierPoly ad_x = adjoint_rep(x);
    const int rank = ad_x.rank;

    const SymbolExpansion ad = multiplication_symbol(ad_x, depth);
    const SymbolExpansion p_plus = smoothing_power(s, rank, cutoff, depth, weight);
    const SymbolExpansion p_minus = smoothing_power(-s, rank, cutoff, depth, weight);

    SymbolExpansion total = symbol_add(ad, middle_term(x, s, depth, weight, variant));
    total = symbol_add(total, compose(p_minus, compose(ad, p_plus)));
    return symbol_scale(cxd(0.5, 0.0), total);
}

SymbolExpansion hs_curvature(const LoopAlgebraElement& x, const LoopAlgebraElement& y, double s,
                             int depth, SobolevWeight weight, HsBracketVariant variant) {
    const SymbolExpansion nx = hs_connection_operator(x, s, depth, weight, variant);
    const SymbolExpansion ny = hs_connection_operator(y, s, depth, weight, variant);
    const SymbolExpansion nxy =
        hs_connection_operator(loop_bracket(x, y), s, depth, weight, variant);
    return symbol_sub(symbol_commutator(nx, ny), nxy);
}

SymbolExpansion alpha_map(const LoopAlgebraElement& x, int depth, bool per_term_derivative) {
    const int rank = defining_rank(x.algebra);
    SymbolExpansion r(rank, x.cutoff(), -static_cast<double>(depth));
    cxd coeff(1.0, 0.0);  // (-1)^l / i^l = i^l
    for (int l = 0; l <= depth; ++l) {
        if (l > 0) coeff *= cxd(0.0, 1.0);
        const FourierPoly d = x.value.derivative(per_term_derivative ? l : std::min(l, 1));
        FourierPoly plus = d, minus = d;
        plus *= coeff;
        // xi^{-l} at xi = -1 is (-1)^l
        minus *= coeff * ((l % 2 == 0) ? 1.0 : -1.0);
        r.accumulate(-static_cast<double>(l), plus, minus);
    }
    r.prune_zeros();
    return r;
}

}  // namespace cw
