#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cw/common.hpp"

namespace cw {

// Matrix-valued Fourier polynomial on S^1, modes -cutoff..cutoff.
struct FourierPoly {
    int rank = 0;
    int cutoff = 0;
    std::vector<MatC> modes;  // index k + cutoff

    static FourierPoly zero(int rank, int cutoff);
    static FourierPoly constant(const MatC& m, int cutoff);

    MatC& mode(int k) { return modes[static_cast<size_t>(k + cutoff)]; }
    const MatC& mode(int k) const { return modes[static_cast<size_t>(k + cutoff)]; }

    double norm() const;  // sqrt of summed squared Frobenius norms
    bool is_zero() const { return norm() == 0.0; }

    FourierPoly derivative() const;                // mode k -> ik * mode k
    FourierPoly derivative(int times) const;
    cxd trace_zero_mode() const;                   // Fourier mean of tr f

    FourierPoly& operator+=(const FourierPoly& o);
    FourierPoly& operator-=(const FourierPoly& o);
    FourierPoly& operator*=(cxd c);

    // Convolution product truncated back to the cutoff; the squared Frobenius
    // mass of discarded modes is added to *loss when given.
    static FourierPoly product(const FourierPoly& a, const FourierPoly& b, double* loss = nullptr);
};

// One homogeneous term sigma(x, xi) = coeff_dir(x) |xi|^order, stored through
// its values on the two components of the cosphere S*S^1 (xi = +1 and -1).
struct HomogeneousSymbol {
    double order = 0.0;
    FourierPoly plus, minus;

    double norm() const { return std::hypot(plus.norm(), minus.norm()); }

    // d/dxi of the homogeneous extension: multiplies by `order` on the +1
    // direction and by -`order` on the -1 direction, lowering the order by 1.
    HomogeneousSymbol xi_derivative() const;
};

// Truncated asymptotic expansion sigma ~ sum_j sigma_{m-j}. Components are
// stored sparsely in strictly decreasing order; `bottom` is the validity
// floor (deeper terms are unknown, not zero). `trunc_loss` accumulates the
// Fourier mass discarded by cutoff truncation across all operations that
// produced this expansion.
class SymbolExpansion {
public:
    SymbolExpansion() = default;
    SymbolExpansion(int rank, int cutoff, double bottom)
        : rank_(rank), cutoff_(cutoff), bottom_(bottom) {}

    int rank() const { return rank_; }
    int cutoff() const { return cutoff_; }
    double bottom() const { return bottom_; }
    double trunc_loss() const { return trunc_loss_; }
    void add_loss(double l) { trunc_loss_ += l; }

    const std::vector<HomogeneousSymbol>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }
    // Order of the highest stored component; `bottom` when empty.
    double leading_order() const { return comps_.empty() ? bottom_ : comps_.front().order; }

    const HomogeneousSymbol* component_at(double order) const;
    double component_norm(double order) const;
    // Largest component norm with order > `order` (strictly).
    double norm_above(double order) const;
    double max_component_norm() const;

    // Merge a term into the expansion (dropped silently below `bottom`).
    void accumulate(double order, const FourierPoly& plus, const FourierPoly& minus);
    void set_bottom(double b);
    void prune_zeros();

private:
    int rank_ = 0;
    int cutoff_ = 0;
    double bottom_ = 0.0;
    double trunc_loss_ = 0.0;
    std::vector<HomogeneousSymbol> comps_;
};

// sigma(AB) ~ sum_j ((-i)^j / j!) d_xi^j sigma(A) . d_x^j sigma(B); the result
// is valid down to max(bottom_A + top_B, bottom_B + top_A).
SymbolExpansion compose(const SymbolExpansion& a, const SymbolExpansion& b);

SymbolExpansion symbol_add(const SymbolExpansion& a, const SymbolExpansion& b);
SymbolExpansion symbol_sub(const SymbolExpansion& a, const SymbolExpansion& b);
SymbolExpansion symbol_scale(cxd c, const SymbolExpansion& a);
SymbolExpansion symbol_commutator(const SymbolExpansion& a, const SymbolExpansion& b);

// Symbol of (I + Delta)^s on the trivial rank-r bundle over S^1, Delta the
// flat Laplacian: components binom(s, j) I at orders 2s - 2j, both directions,
// valid down to 2s - depth.
SymbolExpansion power_symbol(double s, int rank, int cutoff, int depth);

SymbolExpansion identity_symbol(int rank, int cutoff, int depth);

// |xi|^order times the identity: a single homogeneous component on both
// cosphere directions (the symbol of |D|^order away from the zero mode).
SymbolExpansion homogeneous_power_symbol(double order, int rank, int cutoff, int depth);

// Zeroth-order multiplication operator by the matrix function f.
SymbolExpansion multiplication_symbol(const FourierPoly& f, int depth);

struct TraceResult {
    cxd value{0.0, 0.0};
    bool truncated = false;  // expansion did not reach the required order
};

// res^w(A) = (2pi)^-1 int_{S^1} tr(sigma_{-1}(A)(x,+1) + sigma_{-1}(A)(x,-1)) dx.
// If the expansion bottom lies above -1 the residue is reported as 0 with the
// truncated flag set.
TraceResult wodzicki_residue(const SymbolExpansion& a);

// Tr^lo(A) = (2pi)^-1 int_{S^1} tr sigma_0 over both directions, optionally
// against scalar weights per direction. Leading order > 0 is an error.
cxd leading_order_trace(const SymbolExpansion& a);
cxd leading_order_trace(const SymbolExpansion& a, const FourierPoly& weight_plus,
                        const FourierPoly& weight_minus);

// Plain-text table serialization; hexfloat fields, bit-exact round trip.
std::string symbol_to_table(const SymbolExpansion& a);
SymbolExpansion symbol_from_table(const std::string& table);

double binomial_real(double s, int j);

}  // namespace cw
