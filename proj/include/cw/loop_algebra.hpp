#pragma once

#include <cstdint>

#include "cw/symbols.hpp"

namespace cw {

enum class LieAlgebra { U1, SU2 };

// g-valued Fourier polynomial on S^1 in the defining representation
// (antihermitian 1x1 for u(1), antihermitian traceless 2x2 for su(2)).
// Reality: mode(k)^dagger = -mode(-k).
struct LoopAlgebraElement {
    LieAlgebra algebra = LieAlgebra::SU2;
    FourierPoly value;  // rank 1 or 2

    static LoopAlgebraElement zero(LieAlgebra alg, int cutoff);
    // Deterministic pseudo-random element with modes up to max_mode, O(1) size.
    static LoopAlgebraElement random(LieAlgebra alg, int cutoff, int max_mode, uint64_t seed);

    int cutoff() const { return value.cutoff; }
    double reality_residual() const;  // how far from g-valued
};

// Pointwise bracket [X, Y](theta), truncated to the common cutoff.
LoopAlgebraElement loop_bracket(const LoopAlgebraElement& x, const LoopAlgebraElement& y);

// Sobolev smoothing weights applied per Fourier mode.
//   Homogeneous:   |D|^{2s},    mode k -> |k|^{2s},   symbol |xi|^{2s}
//   Inhomogeneous: (I+Delta)^s, mode k -> (1+k^2)^s,  symbol (1+xi^2)^s
// The homogeneous weights make the s=1 covariant derivative collapse onto the
// formal-symbol homomorphism (alpha below), which is what drives the published
// curvature-order pattern; the inhomogeneous literal reading leaves an order
// -2 curvature remainder even at s=1 and is kept for diagnostics.
enum class SobolevWeight { Homogeneous, Inhomogeneous };

// Which bracket the middle term of the H^s covariant derivative carries.
//   PaperBracket:  + M_{ad of weighted X}   ([WX, .])
//   KoszulBracket: - M_{ad of weighted X}   ([. , WX]), what the Koszul
//                  formula yields for left-invariant fields; default.
enum class HsBracketVariant { PaperBracket, KoszulBracket };

// (I + Delta)^s X (or |D|^{2s} X) computed exactly per Fourier mode.
LoopAlgebraElement sobolev_power(const LoopAlgebraElement& x, double s,
                                 SobolevWeight weight = SobolevWeight::Inhomogeneous);

// ad_X as a matrix-valued function on S^1: rank dim(g) in the orthonormal
// basis e_a = -i sigma_a / 2 for su(2); identically zero (rank 1) for u(1).
FourierPoly adjoint_rep(const LoopAlgebraElement& x);

// Symbol of Y -> nabla^s_X Y acting on left-invariant fields,
//   (1/2)[ ad_X + P(-s) M_{bracket with weighted X} + P(-s) ad_X P(s) ],
// rank dim(g), valid down to order -depth. Requires s > 1/2.
SymbolExpansion hs_connection_operator(const LoopAlgebraElement& x, double s, int depth,
                                       SobolevWeight weight = SobolevWeight::Homogeneous,
                                       HsBracketVariant variant = HsBracketVariant::KoszulBracket);

// The isolated middle term (with its 1/2 prefactor), for order diagnostics.
SymbolExpansion hs_connection_middle_term(const LoopAlgebraElement& x, double s, int depth,
                                          SobolevWeight weight = SobolevWeight::Homogeneous,
                                          HsBracketVariant variant = HsBracketVariant::KoszulBracket);

// Omega^s(X,Y) = nabla^s_X nabla^s_Y - nabla^s_Y nabla^s_X - nabla^s_{[X,Y]}
// in the symbol algebra.
SymbolExpansion hs_curvature(const LoopAlgebraElement& x, const LoopAlgebraElement& y, double s,
                             int depth, SobolevWeight weight = SobolevWeight::Homogeneous,
                             HsBracketVariant variant = HsBracketVariant::KoszulBracket);

// alpha(X) = sum_l ((-1)^l / i^l) (d_theta^l X) xi^{-l} in the defining
// representation, truncated at depth. `per_term_derivative` keeps the l-th
// derivative in the l-th term (the variant that is a Lie algebra
// homomorphism); false reproduces the single-derivative reading verbatim.
SymbolExpansion alpha_map(const LoopAlgebraElement& x, int depth, bool per_term_derivative = true);

}  // namespace cw
