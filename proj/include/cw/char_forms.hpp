#pragma once

#include "cw/connection.hpp"

namespace cw {

// Ad-invariant polynomials applied to curvature. The engine keeps raw trace
// forms; report-time normalizations like (i/2pi)^k are applied by callers.
struct InvariantPolynomial {
    enum class Kind { TracePower, Pfaffian, AHatTruncated, ChernCharacterTruncated };
    Kind kind = Kind::TracePower;
    int k = 1;            // trace power
    int max_degree = 4;   // truncation for the series kinds
    cxd normalization{1.0, 0.0};

    static InvariantPolynomial trace_power(int k) {
        InvariantPolynomial p;
        p.kind = Kind::TracePower;
        p.k = k;
        return p;
    }
    static InvariantPolynomial pfaffian() {
        InvariantPolynomial p;
        p.kind = Kind::Pfaffian;
        return p;
    }
    static InvariantPolynomial a_hat(int max_degree) {
        InvariantPolynomial p;
        p.kind = Kind::AHatTruncated;
        p.max_degree = max_degree;
        return p;
    }
    static InvariantPolynomial chern_character(int max_degree) {
        InvariantPolynomial p;
        p.kind = Kind::ChernCharacterTruncated;
        p.max_degree = max_degree;
        return p;
    }
};

// Matrix-level evaluation (conjugation-invariance probes).
cxd apply_invariant(const InvariantPolynomial& p, const MatC& a);

// Recursive cofactor Pfaffian of an even-rank skew matrix;
// ||A + A^T|| >= 1e-12 is an argument error.
cxd pfaffian(const MatC& a);
double pfaffian(const MatD& a);

// p(Omega) as a form. TracePower k gives the 2k-form tr(F^...^F); Pfaffian
// needs a metric-derived connection (orthonormal frames) and gives the d-form
// Euler integrand.
ScalarForm char_form(const ConnPtr& conn, const InvariantPolynomial& p);

// Graded pieces of the series kinds: (degree, form) for degrees 0,2,4,... up
// to min(max_degree, dim). Degree-0 parts are constant functions.
std::vector<std::pair<int, ScalarForm>> char_form_series(const ConnPtr& conn,
                                                         const InvariantPolynomial& p);

// The odd transgression form
//   CS_k(conn0, conn1) = k * int_0^1 tr[(omega1-omega0) ^ Omega_t^{k-1}] dt,
//   omega_t = t omega0 + (1-t) omega1,
// with d CS_k = tr(Omega_1^k) - tr(Omega_0^k). The t-integral is a fixed
// 16-node Gauss-Legendre rule (the integrand is polynomial in t of degree
// <= 2k-2, so this is exact for k <= 3).
ScalarForm relative_cs_form(const ConnPtr& conn0, const ConnPtr& conn1, int k);

// Integration over the fiber of the product fibration Z x B -> B, fiber
// coordinates first. Forms of degree < dim Z integrate to the zero 0-form.
ScalarForm fiber_integration(const ScalarForm& total, const ChartAtlas& fiber,
                             const ChartAtlas& base, const QuadratureSpec& q);

// b -> int_Z tr((R^E)^k) as a (2k - dim Z)-form on B for a connection on the
// product Z x B; the vertical part of the pushforward-bundle curvature is R^E
// for product fibrations, so this is the fiber integral of the trace-power
// char form.
ScalarForm bismut_vertical_char_form(const ConnPtr& connE, const ChartAtlas& fiber,
                                     const ChartAtlas& base, int k, const QuadratureSpec& q);

}  // namespace cw
