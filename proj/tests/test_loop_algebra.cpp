#include <doctest.h>

#include <cmath>

#include "cw/loop_algebra.hpp"

using namespace cw;

namespace {
constexpr int kCutoff = 16;
constexpr int kDepth = 6;
}

TEST_CASE("random loop algebra elements are g-valued") {
    for (int i = 0; i < 10; ++i) {
        auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 100 + i);
        CHECK(X.reality_residual() < 1e-14);
        auto U = LoopAlgebraElement::random(LieAlgebra::U1, kCutoff, 2, 200 + i);
        CHECK(U.reality_residual() < 1e-14);
    }
}

TEST_CASE("the loop bracket is antisymmetric and satisfies Jacobi") {
    auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 1);
    auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 2);
    auto Z = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 3);
    auto XY = loop_bracket(X, Y);
    auto YX = loop_bracket(Y, X);
    FourierPoly sum = XY.value;
    sum += YX.value;
    CHECK(sum.norm() < 1e-13);
    // [[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0
    FourierPoly jac = loop_bracket(XY, Z).value;
    jac += loop_bracket(loop_bracket(Y, Z), X).value;
    jac += loop_bracket(loop_bracket(Z, X), Y).value;
    CHECK(jac.norm() < 1e-12);
}

TEST_CASE("abelian covariant derivative is the zero expansion") {
    auto X = LoopAlgebraElement::random(LieAlgebra::U1, kCutoff, 2, 5);
    SymbolExpansion nx = hs_connection_operator(X, 2.0, kDepth);
    CHECK(nx.is_zero());
}

TEST_CASE("the covariant derivative has order zero") {
    auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 7);
    SymbolExpansion nx = hs_connection_operator(X, 2.0, kDepth);
    CHECK(nx.norm_above(0.0) < 1e-12);
    CHECK(nx.component_norm(0.0) > 1e-3);
    CHECK_THROWS_AS(hs_connection_operator(X, 0.5, kDepth), ValidationError);
}

TEST_CASE("middle term leading order is -2s") {
    // The isolated middle term is P(-s) composed with a nonzero multiplication
    // operator, so its leading nonzero order is exactly -2s (for s = 2: -4).
    auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 9);
    for (SobolevWeight w : {SobolevWeight::Homogeneous, SobolevWeight::Inhomogeneous}) {
        SymbolExpansion mid = hs_connection_middle_term(X, 2.0, 8, w);
        CHECK(mid.norm_above(-4.0) == 0.0);
        CHECK(mid.component_norm(-4.0) > 1e-3);
    }
}

TEST_CASE("curvature order pattern: abelian algebras are flat at every s") {
    for (double s : {1.0, 2.0, 3.0}) {
        auto X = LoopAlgebraElement::random(LieAlgebra::U1, kCutoff, 2, 11);
        auto Y = LoopAlgebraElement::random(LieAlgebra::U1, kCutoff, 2, 12);
        SymbolExpansion om = hs_curvature(X, Y, s, kDepth);
        CHECK(om.max_component_norm() < 1e-12);
    }
}

TEST_CASE("curvature order pattern: su(2) vanishes identically at s = 1") {
    for (int i = 0; i < 5; ++i) {
        auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 300 + 2 * i);
        auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 301 + 2 * i);
        SymbolExpansion om = hs_curvature(X, Y, 1.0, kDepth);
        CHECK(om.max_component_norm() < 1e-8);
        CHECK(om.trunc_loss() == 0.0);
    }
}

TEST_CASE("curvature order pattern: su(2) at s = 2 starts exactly at order -2") {
    for (int i = 0; i < 5; ++i) {
        auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 400 + 2 * i);
        auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 401 + 2 * i);
        SymbolExpansion om = hs_curvature(X, Y, 2.0, kDepth);
        CHECK(om.norm_above(-2.0) < 1e-8);
        CHECK(om.component_norm(-2.0) > 1e-3);
    }
}

TEST_CASE("characterization: the literal variants break the s = 1 flatness") {
    auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 500);
    auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 501);
    // bracket on the wrong side
    SymbolExpansion om_paper =
        hs_curvature(X, Y, 1.0, kDepth, SobolevWeight::Homogeneous, HsBracketVariant::PaperBracket);
    CHECK(om_paper.component_norm(-2.0) > 1e-3);
    // inhomogeneous smoothing weights
    SymbolExpansion om_inhom = hs_curvature(X, Y, 1.0, kDepth, SobolevWeight::Inhomogeneous);
    CHECK(om_inhom.component_norm(-2.0) > 1e-3);
}

TEST_CASE("alpha map basics") {
    auto Z = LoopAlgebraElement::zero(LieAlgebra::SU2, kCutoff);
    CHECK(alpha_map(Z, kDepth).is_zero());

    // u(1): both sides of the bracket identity vanish (to rounding: the two
    // pointwise products in the bracket accumulate in different orders)
    auto X = LoopAlgebraElement::random(LieAlgebra::U1, kCutoff, 2, 21);
    auto Y = LoopAlgebraElement::random(LieAlgebra::U1, kCutoff, 2, 22);
    SymbolExpansion lhs = symbol_commutator(alpha_map(X, kDepth), alpha_map(Y, kDepth));
    CHECK(lhs.max_component_norm() < 1e-12);
    CHECK(alpha_map(loop_bracket(X, Y), kDepth).max_component_norm() < 1e-12);
}

TEST_CASE("alpha is a Lie algebra homomorphism at depth 6") {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 600 + 2 * i);
        auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 601 + 2 * i);
        SymbolExpansion lhs = symbol_commutator(alpha_map(X, kDepth), alpha_map(Y, kDepth));
        SymbolExpansion rhs = alpha_map(loop_bracket(X, Y), kDepth);
        worst = std::max(worst, symbol_sub(lhs, rhs).max_component_norm());
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("characterization: the single-derivative alpha reading fails") {
    auto X = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 700);
    auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, kCutoff, 2, 701);
    SymbolExpansion lhs =
        symbol_commutator(alpha_map(X, kDepth, false), alpha_map(Y, kDepth, false));
    SymbolExpansion rhs = alpha_map(loop_bracket(X, Y), kDepth, false);
    CHECK(symbol_sub(lhs, rhs).max_component_norm() > 1e-2);
}
