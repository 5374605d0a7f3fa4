#include <doctest.h>

#include <cmath>

#include "cw/quadrature.hpp"
#include "cw/symbols.hpp"

using namespace cw;

namespace {

FourierPoly random_poly(int rank, int cutoff, int max_mode, uint64_t seed) {
    FourierPoly f = FourierPoly::zero(rank, cutoff);
    for (int k = -max_mode; k <= max_mode; ++k)
        for (int i = 0; i < rank; ++i)
            for (int j = 0; j < rank; ++j)
                f.mode(k)(i, j) = cxd(2.0 * counter_uniform(seed, k + 8, 2 * (i * rank + j)) - 1.0,
                                      2.0 * counter_uniform(seed, k + 8, 2 * (i * rank + j) + 1) - 1.0);
    return f;
}

SymbolExpansion random_order0(int rank, int cutoff, int depth, uint64_t seed) {
    SymbolExpansion a(rank, cutoff, -depth);
    for (int c = 0; c <= std::min(3, depth); ++c)
        a.accumulate(-static_cast<double>(c), random_poly(rank, cutoff, 2, seed + 10 * c),
                     random_poly(rank, cutoff, 2, seed + 10 * c + 5));
    return a;
}

}  // namespace

TEST_CASE("power symbol coefficients follow the binomial series") {
    // s = 1: exact polynomial 1 + xi^2
    SymbolExpansion p1 = power_symbol(1.0, 2, 8, 4);
    CHECK(p1.component_norm(2.0) == doctest::Approx(std::sqrt(2.0) * std::sqrt(2.0)));
    CHECK(p1.component_norm(0.0) == doctest::Approx(2.0));
    CHECK(p1.component_norm(1.0) == 0.0);
    CHECK(p1.component_norm(-2.0) == 0.0);

    // s = 1/2: coefficients 1, 1/2, -1/8 at orders 1, -1, -3
    SymbolExpansion ph = power_symbol(0.5, 1, 8, 6);
    const HomogeneousSymbol* c0 = ph.component_at(1.0);
    const HomogeneousSymbol* c1 = ph.component_at(-1.0);
    const HomogeneousSymbol* c2 = ph.component_at(-3.0);
    REQUIRE(c0 != nullptr);
    REQUIRE(c1 != nullptr);
    REQUIRE(c2 != nullptr);
    CHECK(c0->plus.mode(0)(0, 0).real() == doctest::Approx(1.0));
    CHECK(c1->plus.mode(0)(0, 0).real() == doctest::Approx(0.5));
    CHECK(c2->minus.mode(0)(0, 0).real() == doctest::Approx(-0.125));

    // s = -1: geometric series (-1)^j at orders -2-2j
    SymbolExpansion pm = power_symbol(-1.0, 1, 8, 8);
    for (int j = 0; j <= 4; ++j) {
        const HomogeneousSymbol* c = pm.component_at(-2.0 - 2.0 * j);
        REQUIRE(c != nullptr);
        CHECK(c->plus.mode(0)(0, 0).real() == doctest::Approx(j % 2 == 0 ? 1.0 : -1.0));
    }
    CHECK_THROWS_AS(power_symbol(1.0, 1, 8, -1), ValidationError);
}

TEST_CASE("composition with the identity and multiplication operators") {
    SymbolExpansion a = random_order0(2, 8, 5, 77);
    SymbolExpansion id = identity_symbol(2, 8, 5);
    SymbolExpansion ia = compose(id, a);
    SymbolExpansion diff = symbol_sub(ia, a);
    CHECK(diff.max_component_norm() < 1e-14);

    // two multiplication operators compose to the pointwise product
    FourierPoly f = random_poly(2, 16, 2, 5), g = random_poly(2, 16, 2, 6);
    SymbolExpansion mf = multiplication_symbol(f, 6), mg = multiplication_symbol(g, 6);
    SymbolExpansion prod = compose(mf, mg);
    CHECK(prod.components().size() == 1);
    CHECK(prod.leading_order() == doctest::Approx(0.0));
    FourierPoly fg = FourierPoly::product(f, g);
    const HomogeneousSymbol* c = prod.component_at(0.0);
    REQUIRE(c != nullptr);
    double worst = 0.0;
    for (int k = -16; k <= 16; ++k)
        worst = std::max(worst, (c->plus.mode(k) - fg.mode(k)).cwiseAbs().maxCoeff());
    CHECK(worst < 1e-14);
}

TEST_CASE("power symbols invert each other through the calculus") {
    for (double s : {0.5, 1.0, 2.0}) {
        SymbolExpansion p = power_symbol(s, 1, 16, 6);
        SymbolExpansion q = power_symbol(-s, 1, 16, 6);
        SymbolExpansion pq = compose(p, q);
        SymbolExpansion diff = symbol_sub(pq, identity_symbol(1, 16, 6));
        CHECK(diff.max_component_norm() < 1e-10);
    }
    // rank and cutoff mismatches are argument errors
    CHECK_THROWS_AS(compose(power_symbol(1.0, 1, 16, 4), power_symbol(1.0, 2, 16, 4)),
                    ValidationError);
    CHECK_THROWS_AS(compose(power_symbol(1.0, 1, 16, 4), power_symbol(1.0, 1, 8, 4)),
                    ValidationError);
}

TEST_CASE("binomial inverse identity: scalar-sequence oracle vs calculus") {
    // Cauchy product of the binomial series for (1+u)^s and (1+u)^{-s} in
    // u = xi^{-2}: coefficients must convolve to the delta sequence. The same
    // cancellation drives compose(power(s), power(-s)) = Id, but this check
    // never touches the symbol code path.
    for (double s : {0.5, 1.0, 2.0}) {
        for (int n = 1; n <= 3; ++n) {
            double conv = 0.0;
            for (int j = 0; j <= n; ++j) conv += binomial_real(s, j) * binomial_real(-s, n - j);
            CHECK(std::abs(conv) < 1e-14);
        }
    }
}

TEST_CASE("composition is associative at depth 5") {
    SymbolExpansion a = random_order0(2, 16, 5, 101);
    SymbolExpansion b = random_order0(2, 16, 5, 202);
    SymbolExpansion c = random_order0(2, 16, 5, 303);
    SymbolExpansion lhs = compose(compose(a, b), c);
    SymbolExpansion rhs = compose(a, compose(b, c));
    SymbolExpansion diff = symbol_sub(lhs, rhs);
    CHECK(diff.max_component_norm() < 1e-9);
    CHECK(lhs.trunc_loss() == 0.0);  // band-limited inputs stay inside the cutoff
}

TEST_CASE("order additivity of composition") {
    SymbolExpansion a = power_symbol(1.5, 1, 8, 4);   // leading 3
    SymbolExpansion b = power_symbol(-0.5, 1, 8, 4);  // leading -1
    CHECK(compose(a, b).leading_order() == doctest::Approx(2.0));
}

TEST_CASE("Wodzicki residue definition and examples") {
    // multiplication operators have no order -1 part
    FourierPoly f = random_poly(3, 8, 2, 9);
    CHECK(wodzicki_residue(multiplication_symbol(f, 6)).value == cxd(0.0, 0.0));

    // res of (I+Delta)^{-1/2} is 2 under the (2pi)^{-1} two-direction convention
    SymbolExpansion p = power_symbol(-0.5, 1, 8, 6);
    CHECK(std::abs(wodzicki_residue(p).value - cxd(2.0, 0.0)) < 1e-14);

    // truncation warning when the expansion stops above order -1
    FourierPoly g = random_poly(1, 8, 1, 10);
    SymbolExpansion shallow = multiplication_symbol(g, 0);  // known only to order 0
    CHECK(wodzicki_residue(shallow).truncated);
    CHECK(wodzicki_residue(shallow).value == cxd(0.0, 0.0));
    // depth 0 still includes the order -1 leading term of (I+Delta)^{-1/2}
    CHECK(std::abs(wodzicki_residue(power_symbol(-0.5, 1, 8, 0)).value - cxd(2.0, 0.0)) < 1e-14);

    // expansions of order <= -2 have exactly zero residue
    SymbolExpansion deep = power_symbol(-1.0, 1, 8, 6);  // orders -2, -4, ...
    CHECK(wodzicki_residue(deep).value == cxd(0.0, 0.0));
}

TEST_CASE("leading order trace definition and weighted variant") {
    SymbolExpansion id = identity_symbol(3, 8, 4);
    CHECK(std::abs(leading_order_trace(id) - cxd(6.0, 0.0)) < 1e-14);  // 2r

    SymbolExpansion neg = power_symbol(-0.5, 1, 8, 6);  // leading order -1
    CHECK(leading_order_trace(neg) == cxd(0.0, 0.0));

    SymbolExpansion pos = power_symbol(0.5, 1, 8, 6);  // leading order +1
    CHECK_THROWS_AS(leading_order_trace(pos), ValidationError);

    // weighted trace picks up the matching Fourier modes
    FourierPoly f = FourierPoly::zero(1, 8);
    f.mode(0)(0, 0) = cxd(1.5, 0.0);
    f.mode(2)(0, 0) = cxd(0.0, 0.5);
    SymbolExpansion mf = multiplication_symbol(f, 4);
    FourierPoly wp = FourierPoly::zero(1, 8), wm = FourierPoly::zero(1, 8);
    wp.mode(-2)(0, 0) = cxd(2.0, 0.0);
    wm.mode(0)(0, 0) = cxd(1.0, 0.0);
    // (2pi)^-1 int (w+ tr sigma0+ + w- tr sigma0-) = 2*(i0.5) + 1*(1.5)
    CHECK(std::abs(leading_order_trace(mf, wp, wm) - cxd(1.5, 1.0)) < 1e-14);
}

TEST_CASE("both traces vanish on commutators") {
    double wres = 0.0, lotr = 0.0, lotr_w = 0.0;
    for (int p = 0; p < 50; ++p) {
        SymbolExpansion a = random_order0(2, 16, 6, 1000 + p);
        SymbolExpansion b = random_order0(2, 16, 6, 2000 + p);
        SymbolExpansion comm = symbol_commutator(a, b);
        wres = std::max(wres, std::abs(wodzicki_residue(comm).value));
        lotr = std::max(lotr, std::abs(leading_order_trace(comm)));
        FourierPoly wp = random_poly(1, 16, 2, 3000 + p);
        FourierPoly wm = random_poly(1, 16, 2, 4000 + p);
        lotr_w = std::max(lotr_w, std::abs(leading_order_trace(comm, wp, wm)));
    }
    CHECK(wres < 1e-10);
    CHECK(lotr < 1e-10);
    CHECK(lotr_w < 1e-10);
}

TEST_CASE("truncation loss is measured when products leave the cutoff") {
    FourierPoly f = random_poly(1, 3, 3, 21);  // full band
    SymbolExpansion a = multiplication_symbol(f, 4);
    SymbolExpansion prod = compose(a, a);
    CHECK(prod.trunc_loss() > 0.0);
}

TEST_CASE("serialization round-trips bit-exactly") {
    SymbolExpansion a = random_order0(2, 6, 4, 55);
    a.add_loss(1.2345678901234567e-3);
    const std::string table = symbol_to_table(a);
    SymbolExpansion b = symbol_from_table(table);
    CHECK(b.rank() == a.rank());
    CHECK(b.cutoff() == a.cutoff());
    CHECK(b.bottom() == a.bottom());
    CHECK(b.trunc_loss() == a.trunc_loss());
    REQUIRE(b.components().size() == a.components().size());
    for (size_t i = 0; i < a.components().size(); ++i) {
        const auto& ca = a.components()[i];
        const auto& cb = b.components()[i];
        CHECK(ca.order == cb.order);
        for (int k = -6; k <= 6; ++k)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) {
                    CHECK(ca.plus.mode(k)(r, c) == cb.plus.mode(k)(r, c));
                    CHECK(ca.minus.mode(k)(r, c) == cb.minus.mode(k)(r, c));
                }
    }
    CHECK(symbol_to_table(b) == table);
}
