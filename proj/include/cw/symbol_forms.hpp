#pragma once

#include "cw/forms.hpp"
#include "cw/jet.hpp"
#include "cw/symbols.hpp"

namespace cw {

// Connection 1-form with values in the symbol algebra, represented as a
// finite sum of  f_a(x) dx^{i_a} (x) S_a  with scalar jet-evaluable
// coefficients f_a and constant symbol expansions S_a. This spans every
// desk-scale PsiDO-valued connection the engine constructs while keeping the
// exterior derivative exact (jets of the f_a).
struct SymbolConnectionTerm {
    std::function<Jet2c(int chart, const Jet2c* x)> coeff;
    int dx_index = 0;
    SymbolExpansion symbol;
};

struct SymbolConnection {
    ChartAtlas atlas;
    int rank = 1;
    int cutoff = 8;
    int depth = 6;
    std::vector<SymbolConnectionTerm> terms;
};

enum class SymbolTraceKind { Wodzicki, LeadingOrder };

// c_k of the curvature Omega = d omega + omega ^ omega under the selected
// symbol trace: a 2k-form on the base.
ScalarForm symbol_char_form(const SymbolConnection& conn, int k, SymbolTraceKind kind);

// CS_k(conn0, conn1) = k int_0^1 trace[(omega1-omega0) ^ Omega_t^{k-1}] dt
// with the matrix trace replaced by the Wodzicki residue or the leading-order
// symbol trace; omega_t = t omega0 + (1-t) omega1.
ScalarForm relative_cs_form_symbol(const SymbolConnection& conn0, const SymbolConnection& conn1,
                                   int k, SymbolTraceKind kind);

// Family of multiplication-operator curvatures over a base manifold (the
// gauge case over N = S^1): base point and a vector pair to a xi-independent
// order-0 symbol.
struct MultOpCurvatureFamily {
    ChartAtlas atlas;
    int rank = 1;
    int cutoff = 8;
    int depth = 6;
    std::function<SymbolExpansion(int chart, const VecD& x, const VecD& u, const VecD& v)> curvature;
};

// Applies the leading-order trace to the k-th wedge power of the family's
// curvature. For multiplication operators this equals vol(S*S^1) = 2 (in the
// engine's (2pi)^-1 normalization) times the matrix-trace characteristic form.
ScalarForm leading_order_char_form(const MultOpCurvatureFamily& family, int k);

}  // namespace cw
