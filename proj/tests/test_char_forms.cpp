#include <doctest.h>

#include <cmath>

#include "cw/char_forms.hpp"
#include "cw/group_charts.hpp"
#include "cw/symbol_forms.hpp"

using namespace cw;

namespace {

VecD interior_point(const Chart& c, uint64_t seed, uint64_t probe) {
    VecD x(c.dim);
    for (int i = 0; i < c.dim; ++i) {
        const double u = counter_uniform(seed, probe, i);
        const double margin = c.periodic[i] ? 0.0 : c.margin * c.range(i);
        x[i] = c.lo[i] + margin + (c.range(i) - 2.0 * margin) * u;
    }
    return x;
}

VecD rnd_vec(int d, uint64_t s, uint64_t p, uint64_t salt) {
    VecD v(d);
    for (int i = 0; i < d; ++i) v[i] = 2.0 * counter_uniform(s, p, salt + i) - 1.0;
    return v;
}

MatC random_matrix(int n, uint64_t seed, uint64_t probe) {
    MatC m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = cxd(2.0 * counter_uniform(seed, probe, 2 * (i * n + j)) - 1.0,
                          2.0 * counter_uniform(seed, probe, 2 * (i * n + j) + 1) - 1.0);
    return m;
}

MatC random_skew(int n, uint64_t seed, uint64_t probe) {
    MatC m = random_matrix(n, seed, probe);
    return 0.5 * (m - m.transpose().eval());
}

// special orthogonal from QR of a random real matrix
MatD random_special_orthogonal(int n, uint64_t seed, uint64_t probe) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = 2.0 * counter_uniform(seed, probe, i * n + j) - 1.0;
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    Eigen::MatrixXd q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    return MatD(q);
}

// rank-2 trig connection on the 4-cube, generic and non-flat
ConnPtr random_d4_connection(uint64_t seed) {
    auto m4 = metric_by_id("euclidean-d4");
    std::array<double, 32> c{};
    for (size_t i = 0; i < c.size(); ++i) c[i] = 2.0 * counter_uniform(seed, i, 0) - 1.0;
    auto f = [c]<class S>(int, const S* x, S* w) {
        using cw::cos;
        using cw::sin;
        const cxd I(0.0, 1.0);
        for (int i = 0; i < 4; ++i) {
            const size_t o = static_cast<size_t>(i) * 8;
            const S a = sin(x[(i + 1) % 4] * S(2.0) + x[i]) * S(c[o + 0]);
            const S b = cos(x[(i + 2) % 4] + x[(i + 3) % 4] * S(3.0)) * S(c[o + 1]);
            const S d = sin(x[i] * S(3.0)) * S(c[o + 2]);
            const S e = cos(x[(i + 1) % 4] * S(2.0)) * S(c[o + 3]);
            // su(2)-ish antihermitian coefficients keep curvature well scaled
            w[i * 4 + 0] = S(I) * a;
            w[i * 4 + 1] = S(cxd(c[o + 4], 0.0)) * b + S(I) * d;
            w[i * 4 + 2] = S(cxd(-c[o + 4], 0.0)) * b + S(I) * d;
            w[i * 4 + 3] = S(I) * e;
        }
    };
    return make_connection("random-d4", m4->atlas(), 2, f);
}

}  // namespace

TEST_CASE("pfaffian on matrices") {
    MatC a = MatC::Zero(2, 2);
    a(0, 1) = cxd(3.5, 0.0);
    a(1, 0) = cxd(-3.5, 0.0);
    CHECK(pfaffian(a) == cxd(3.5, 0.0));

    for (int p = 0; p < 30; ++p) {
        MatC s = random_skew(4, 61, p);
        const cxd pf = pfaffian(s);
        const cxd det = s.determinant();
        CHECK(std::abs(pf * pf - det) <= 1e-10 * std::max(1.0, std::abs(det)));
        // Pf(g A g^T) = det(g) Pf(A)
        MatC g = random_matrix(4, 67, p);
        MatC gag = g * s * g.transpose();
        gag = 0.5 * (gag - gag.transpose().eval());  // kill rounding asymmetry
        CHECK(std::abs(pfaffian(gag) - g.determinant() * pf) <=
              1e-10 * std::max(1.0, std::abs(g.determinant() * pf)));
    }
    CHECK_THROWS_AS(pfaffian(random_matrix(4, 3, 0)), ValidationError);
    CHECK_THROWS_AS(pfaffian(MatC::Zero(3, 3).eval()), ValidationError);
}

TEST_CASE("invariant polynomials are conjugation invariant") {
    for (int p = 0; p < 100; ++p) {
        const MatC a = random_matrix(3, 71, p);
        const MatC g = random_matrix(3, 73, p);
        const MatC conj = g * a * g.inverse();
        for (auto poly : {InvariantPolynomial::trace_power(2), InvariantPolynomial::trace_power(3),
                          InvariantPolynomial::chern_character(6), InvariantPolynomial::a_hat(8)}) {
            const cxd lhs = apply_invariant(poly, conj);
            const cxd rhs = apply_invariant(poly, a);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        }
        // Pfaffian under special-orthogonal conjugation
        const MatC s = random_skew(4, 79, p);
        const MatD q = random_special_orthogonal(4, 83, p);
        MatC conj_s = to_complex(q) * s * to_complex(q).transpose();
        conj_s = 0.5 * (conj_s - conj_s.transpose().eval());
        CHECK(std::abs(apply_invariant(InvariantPolynomial::pfaffian(), conj_s) -
                       apply_invariant(InvariantPolynomial::pfaffian(), s)) < 1e-10);
    }
}

TEST_CASE("flat connections give the zero characteristic form") {
    auto flat = connection_by_id("mc-flat-su2");
    ScalarForm c1 = char_form(flat, InvariantPolynomial::trace_power(1));
    const Chart& c = flat->atlas().charts[0];
    for (int p = 0; p < 10; ++p) {
        VecD x = interior_point(c, 5, p);
        std::vector<VecD> v = {rnd_vec(3, 5, p, 0), rnd_vec(3, 5, p, 10)};
        CHECK(std::abs(c1.eval(0, x, v)) == 0.0);
    }
}

TEST_CASE("monopole first Chern numbers") {
    QuadratureSpec q;
    q.nodes_per_axis = 64;
    for (int n : {-2, -1, 1, 2}) {
        auto conn = connection_by_id("monopole?n=" + std::to_string(n));
        ScalarForm c1 = char_form(conn, InvariantPolynomial::trace_power(1));
        const cxd integral = cxd(0.0, 1.0) / kTwoPi * integrate(c1, q).value;
        CHECK(std::abs(integral - cxd(n, 0.0)) < 1e-6);
    }
}

TEST_CASE("Chern-Gauss-Bonnet on the round sphere") {
    auto lc = connection_by_id("levi-civita?metric=round-s2");
    ScalarForm pf = char_form(lc, InvariantPolynomial::pfaffian());
    QuadratureSpec q;
    q.nodes_per_axis = 64;
    const double euler = integrate(pf, q).value.real() / kTwoPi;
    CHECK(std::abs(euler - 2.0) < 1e-6);
}

TEST_CASE("pfaffian char form rejects odd-rank bundles") {
    auto lc3 = connection_by_id("levi-civita?metric=round-s3");
    CHECK_THROWS_AS(char_form(lc3, InvariantPolynomial::pfaffian()), ValidationError);
}

TEST_CASE("characteristic forms are closed") {
    // 2-form on the 4-cube: numeric d must vanish pointwise
    auto conn = random_d4_connection(91);
    ScalarForm c1 = char_form(conn, InvariantPolynomial::trace_power(1));
    ScalarForm dc1 = exterior_derivative_numeric(c1, 1e-4);
    const Chart& c = conn->atlas().charts[0];
    for (int p = 0; p < 25; ++p) {
        VecD x(4);
        for (int i = 0; i < 4; ++i) x[i] = 0.1 + 0.8 * counter_uniform(93, p, i);
        std::vector<VecD> v = {rnd_vec(4, 95, p, 0), rnd_vec(4, 95, p, 10), rnd_vec(4, 95, p, 20)};
        CHECK(std::abs(dc1.eval(0, x, v)) < 1e-5);
    }
    // monopole Chern form: top degree on the sphere, d vanishes by antisymmetry
    auto mono = connection_by_id("monopole?n=1");
    ScalarForm cm = char_form(mono, InvariantPolynomial::trace_power(1));
    ScalarForm dcm = exterior_derivative_numeric(cm, 1e-4);
    const Chart& sc = mono->atlas().charts[0];
    for (int p = 0; p < 10; ++p) {
        VecD x = interior_point(sc, 97, p);
        std::vector<VecD> v = {rnd_vec(2, 99, p, 0), rnd_vec(2, 99, p, 10), rnd_vec(2, 99, p, 20)};
        CHECK(std::abs(dcm.eval(0, x, v)) < 1e-6);
    }
}

TEST_CASE("relative CS form of equal connections vanishes") {
    auto conn = connection_by_id("monopole?n=1");
    ScalarForm cs = relative_cs_form(conn, conn, 2);
    const Chart& c = conn->atlas().charts[0];
    VecD x = interior_point(c, 7, 0);
    // degree 3 on a 2-manifold evaluates to zero identically
    std::vector<VecD> v = {rnd_vec(2, 7, 0, 0), rnd_vec(2, 7, 0, 10), rnd_vec(2, 7, 0, 20)};
    CHECK(std::abs(cs.eval(0, x, v)) == 0.0);

    ScalarForm cs1 = relative_cs_form(conn, conn, 1);
    std::vector<VecD> v1 = {rnd_vec(2, 7, 1, 0)};
    CHECK(std::abs(cs1.eval(0, x, v1)) < 1e-15);
}

TEST_CASE("transgression identity pins the factor k") {
    // d CS_k(c0, c1) = tr(Omega_1^k) - tr(Omega_0^k) pointwise on a generic
    // non-flat rank-2 bundle over the 4-cube, k = 1 and 2
    auto c0 = random_d4_connection(101);
    auto c1 = random_d4_connection(202);
    for (int k : {1, 2}) {
        ScalarForm cs = relative_cs_form(c0, c1, k);
        ScalarForm dcs = exterior_derivative_numeric(cs, 1e-4);
        ScalarForm delta = form_add(char_form(c1, InvariantPolynomial::trace_power(k)),
                                    form_scale(cxd(-1.0, 0.0),
                                               char_form(c0, InvariantPolynomial::trace_power(k))));
        for (int p = 0; p < 10; ++p) {
            VecD x(4);
            for (int i = 0; i < 4; ++i) x[i] = 0.15 + 0.7 * counter_uniform(103, p, i);
            std::vector<VecD> v(2 * k);
            for (int i = 0; i < 2 * k; ++i) v[i] = rnd_vec(4, 107, p, 10 * i);
            const cxd lhs = dcs.eval(0, x, v);
            const cxd rhs = delta.eval(0, x, v);
            CHECK(std::abs(lhs - rhs) < 1e-5);
        }
    }
    CHECK_THROWS_AS(relative_cs_form(c0, connection_by_id("monopole?n=1"), 2), ValidationError);
}

TEST_CASE("SU(2) transgression reduces to the Maurer-Cartan generator") {
    auto flat = connection_by_id("mc-flat-su2");
    auto gauge = connection_by_id("mc-gauge-su2");
    ScalarForm cs = relative_cs_form(flat, gauge, 2);
    GroupChart gc = group_chart("su2");
    ScalarForm mc3 = maurer_cartan_power_trace(gc, 3);
    const Chart& c = gc.atlas.charts[0];
    // CS_2(flat, g^-1 flat g) = -(1/3) tr((g^-1 dg)^3)
    for (int p = 0; p < 20; ++p) {
        VecD x = interior_point(c, 11, p);
        std::vector<VecD> v = {rnd_vec(3, 13, p, 0), rnd_vec(3, 13, p, 10), rnd_vec(3, 13, p, 20)};
        const cxd lhs = cs.eval(0, x, v);
        const cxd rhs = -mc3.eval(0, x, v) / 3.0;
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(1.0, std::abs(rhs)));
    }
    QuadratureSpec q;
    q.nodes_per_axis = 48;
    const double total = std::abs(integrate(mc3, q).value);
    CHECK(total == doctest::Approx(24.0 * kPi * kPi).epsilon(5e-3));
}

TEST_CASE("Maurer-Cartan form basics") {
    GroupChart su2 = group_chart("su2");
    // left translation by a constant group element leaves g^-1 dg unchanged
    GroupChart translated = su2;
    VecD x0(3);
    x0 << 1.2, 0.9, 2.5;
    const MatC g0 = group_element(su2, x0);
    auto base_eval = su2.eval;
    translated.eval = [base_eval, g0](const Jet2c* x, Jet2c* g) {
        base_eval(x, g);
        std::array<Jet2c, 4> tmp;
        for (int i = 0; i < 4; ++i) tmp[i] = g[i];
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                Jet2c acc(cxd(0.0, 0.0));
                for (int m = 0; m < 2; ++m) acc = acc + Jet2c(g0(r, m)) * tmp[m * 2 + c];
                g[r * 2 + c] = acc;
            }
    };
    const Chart& c = su2.atlas.charts[0];
    for (int p = 0; p < 20; ++p) {
        VecD x = interior_point(c, 17, p);
        VecD v = rnd_vec(3, 19, p, 0);
        const MatC a = maurer_cartan_form(su2, x, v);
        const MatC b = maurer_cartan_form(translated, x, v);
        CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
        // values are antihermitian (su(2)-valued)
        CHECK((a + a.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    }
    // U(1): g = e^{i theta} gives g^-1 dg = i dtheta
    GroupChart u1 = group_chart("u1");
    VecD t(1);
    t << 2.2;
    VecD dt(1);
    dt << 1.0;
    CHECK(std::abs(maurer_cartan_form(u1, t, dt)(0, 0) - cxd(0.0, 1.0)) < 1e-13);
    // SO(3) chart produces orthogonal matrices
    GroupChart so3 = group_chart("so3");
    VecD y(3);
    y << 1.0, 1.3, 0.7;
    const MatC R = group_element(so3, y);
    CHECK((R * R.transpose() - MatC::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("naturality: char form of a pulled-back connection is the pullback") {
    // monopole pulled back along S^2 x plane -> S^2
    auto mono = connection_by_id("monopole?n=1");
    ChartAtlas plane;
    plane.name = "plane";
    plane.charts.push_back(make_chart("square", {0.0, 0.0}, {1.0, 1.0}));
    ChartAtlas prod = product_atlas(mono->atlas(), plane);
    auto f = []<class S>(int, const S* x, S* w) {
        using cw::cos;
        w[0] = S(cxd(0.0, 0.0));
        w[1] = S(cxd(0.0, -0.5)) * (S(cxd(1.0, 0.0)) - cos(x[0]));
        w[2] = S(cxd(0.0, 0.0));
        w[3] = S(cxd(0.0, 0.0));
    };
    ConnPtr pulled_conn = make_connection("pulled-monopole", prod, 1, f);
    ScalarForm lhs = char_form(pulled_conn, InvariantPolynomial::trace_power(1));

    ManifoldMap proj;
    proj.from = prod;
    proj.to = mono->atlas();
    proj.apply = [](const VecD& x) {
        VecD y(2);
        y << x[0], x[1];
        return y;
    };
    proj.differential = [](const VecD&) {
        MatD J = MatD::Zero(2, 4);
        J(0, 0) = 1.0;
        J(1, 1) = 1.0;
        return J;
    };
    ScalarForm rhs = pullback(char_form(mono, InvariantPolynomial::trace_power(1)), proj);
    for (int p = 0; p < 20; ++p) {
        VecD x(4);
        x << kPi * (0.1 + 0.8 * counter_uniform(23, p, 0)), kTwoPi * counter_uniform(23, p, 1),
            counter_uniform(23, p, 2), counter_uniform(23, p, 3);
        std::vector<VecD> v = {rnd_vec(4, 29, p, 0), rnd_vec(4, 29, p, 10)};
        CHECK(std::abs(lhs.eval(0, x, v) - rhs.eval(0, x, v)) < 1e-9);
    }
}

TEST_CASE("A-hat truncation degenerates to one in low dimension") {
    auto lc = connection_by_id("levi-civita?metric=round-s3");
    auto series = char_form_series(lc, InvariantPolynomial::a_hat(8));
    // on a 3-manifold only the degree-0 piece survives
    REQUIRE(series.size() == 1);
    CHECK(series[0].first == 0);
    VecD x(3);
    x << 0.7, 1.0, 2.0;
    std::vector<VecD> none;
    CHECK(std::abs(series[0].second.eval(0, x, none) - cxd(1.0, 0.0)) < 1e-15);
}

TEST_CASE("fiber integration") {
    auto s2 = metric_by_id("round-s2");
    ChartAtlas plane;
    plane.name = "plane";
    plane.charts.push_back(make_chart("square", {0.0, 0.0}, {1.0, 1.0}));
    ChartAtlas prod = product_atlas(s2->atlas(), plane);
    QuadratureSpec q;
    q.nodes_per_axis = 48;

    // area form pulled back from the fiber integrates to the constant 4 pi
    ScalarForm area_pulled;
    area_pulled.degree = 2;
    area_pulled.atlas = prod;
    area_pulled.proto = cxd(0, 0);
    area_pulled.eval = [](int, const VecD& x, const std::vector<VecD>& v) {
        return cxd(std::sin(x[0]) * (v[0][0] * v[1][1] - v[0][1] * v[1][0]), 0.0);
    };
    ScalarForm pushed = fiber_integration(area_pulled, s2->atlas(), plane, q);
    CHECK(pushed.degree == 0);
    VecD b(2);
    b << 0.3, 0.8;
    std::vector<VecD> none;
    CHECK(std::abs(pushed.eval(0, b, none) - cxd(4.0 * kPi, 0.0)) < 1e-6);

    // degree below the fiber dimension gives the zero form
    ScalarForm low = zero_form(prod, 1, cxd(0, 0));
    CHECK(fiber_integration(low, s2->atlas(), plane, q).degree == 0);

    // d commutes with integration over closed fibers
    ScalarForm mixed;
    mixed.degree = 2;
    mixed.atlas = prod;
    mixed.proto = cxd(0, 0);
    mixed.eval = [](int, const VecD& x, const std::vector<VecD>& v) {
        // sin(theta) (1 + 0.3 sin(b1 + phi)) dtheta ^ dphi + smooth base-mixing pieces
        const double f = std::sin(x[0]) * (1.0 + 0.3 * std::sin(x[2] + x[1]));
        const double g = std::pow(std::sin(x[0]), 2) * std::cos(x[3]);
        return cxd(f * (v[0][0] * v[1][1] - v[0][1] * v[1][0]) +
                       g * (v[0][0] * v[1][2] - v[0][2] * v[1][0]),
                   0.0);
    };
    ScalarForm lhs = exterior_derivative_numeric(fiber_integration(mixed, s2->atlas(), plane, q), 1e-4);
    ScalarForm rhs = fiber_integration(exterior_derivative_numeric(mixed, 1e-4), s2->atlas(), plane, q);
    for (int p = 0; p < 5; ++p) {
        VecD bb(2);
        bb << 0.2 + 0.6 * counter_uniform(31, p, 0), 0.2 + 0.6 * counter_uniform(31, p, 1);
        std::vector<VecD> w = {rnd_vec(2, 37, p, 0)};
        CHECK(std::abs(lhs.eval(0, bb, w) - rhs.eval(0, bb, w)) < 1e-5);
    }
}

TEST_CASE("fiber-integrated Chern character over a point base gives the charge") {
    QuadratureSpec q;
    q.nodes_per_axis = 64;
    for (int n : {-1, 2}) {
        auto mono = connection_by_id("monopole?n=" + std::to_string(n));
        auto series = char_form_series(mono, InvariantPolynomial::chern_character(2));
        REQUIRE(series.size() == 2);
        ScalarForm ch1 = form_scale(cxd(0.0, 1.0) / kTwoPi, series[1].second);
        ScalarForm pushed = fiber_integration(ch1, mono->atlas(), point_atlas(), q);
        std::vector<VecD> none;
        CHECK(std::abs(pushed.eval(0, VecD(0), none) - cxd(n, 0.0)) < 1e-6);
    }
}

TEST_CASE("vertical char form matches fiber integration of the char form") {
    // connection pulled back from the fiber alone: the result is constant in b
    auto s2 = metric_by_id("round-s2");
    ChartAtlas plane;
    plane.name = "plane";
    plane.charts.push_back(make_chart("square", {0.0, 0.0}, {1.0, 1.0}));
    ChartAtlas prod = product_atlas(s2->atlas(), plane);
    auto f = []<class S>(int, const S* x, S* w) {
        using cw::cos;
        w[0] = S(cxd(0.0, 0.0));
        w[1] = S(cxd(0.0, -1.0)) * (S(cxd(1.0, 0.0)) - cos(x[0]));
        w[2] = S(cxd(0.0, 0.0));
        w[3] = S(cxd(0.0, 0.0));
    };
    ConnPtr connE = make_connection("pulled-monopole-2", prod, 1, f);
    QuadratureSpec q;
    q.nodes_per_axis = 48;

    ScalarForm vert = bismut_vertical_char_form(connE, s2->atlas(), plane, 1, q);
    CHECK(vert.degree == 0);
    ScalarForm direct =
        fiber_integration(char_form(connE, InvariantPolynomial::trace_power(1)), s2->atlas(), plane, q);
    std::vector<VecD> none;
    VecD b1(2), b2(2);
    b1 << 0.2, 0.3;
    b2 << 0.8, 0.6;
    const cxd v1 = vert.eval(0, b1, none);
    const cxd v2 = vert.eval(0, b2, none);
    CHECK(std::abs(v1 - v2) < 1e-10);  // no b-dependence
    CHECK(std::abs(v1 - direct.eval(0, b1, none)) < 1e-8);
    // charge-2 monopole: integral of tr F = -4 pi i n with n = 2
    CHECK(std::abs(v1 - cxd(0.0, -4.0 * kPi)) < 1e-6);
}

TEST_CASE("leading-order char form on multiplication-operator families") {
    // curvature of the monopole as a multiplication operator over S^2
    auto mono = connection_by_id("monopole?n=1");
    MatrixForm F = curvature_form(mono);
    MultOpCurvatureFamily family;
    family.atlas = mono->atlas();
    family.rank = 1;
    family.cutoff = 8;
    family.depth = 4;
    auto feval = F.eval;
    family.curvature = [feval](int chart, const VecD& x, const VecD& u, const VecD& v) {
        std::vector<VecD> pair = {u, v};
        return multiplication_symbol(FourierPoly::constant(feval(chart, x, pair), 8), 4);
    };

    ScalarForm lo = leading_order_char_form(family, 1);
    ScalarForm mat = char_form(mono, InvariantPolynomial::trace_power(1));
    const Chart& c = mono->atlas().charts[0];
    for (int p = 0; p < 20; ++p) {
        VecD x = interior_point(c, 41, p);
        std::vector<VecD> v = {rnd_vec(2, 43, p, 0), rnd_vec(2, 43, p, 10)};
        // vol(S*S^1) = 2 under the (2pi)^-1 convention
        CHECK(std::abs(lo.eval(0, x, v) - 2.0 * mat.eval(0, x, v)) < 1e-9);
    }
    QuadratureSpec q;
    q.nodes_per_axis = 64;
    const cxd integral = cxd(0.0, 1.0) / kTwoPi * integrate(lo, q).value;
    CHECK(std::abs(integral - cxd(2.0, 0.0)) < 1e-6);  // 2 x n x normalization, n = 1

    // zero curvature gives the zero form
    MultOpCurvatureFamily zero_family = family;
    zero_family.curvature = [](int, const VecD&, const VecD&, const VecD&) {
        return multiplication_symbol(FourierPoly::zero(1, 8), 4);
    };
    ScalarForm z = leading_order_char_form(zero_family, 1);
    VecD x = interior_point(c, 47, 0);
    std::vector<VecD> v = {rnd_vec(2, 47, 0, 0), rnd_vec(2, 47, 0, 10)};
    CHECK(std::abs(z.eval(0, x, v)) == 0.0);

    // xi-dependent values are rejected
    MultOpCurvatureFamily bad = family;
    bad.curvature = [](int, const VecD&, const VecD&, const VecD&) {
        return power_symbol(0.5, 1, 8, 4);
    };
    ScalarForm b = leading_order_char_form(bad, 1);
    CHECK_THROWS_AS(b.eval(0, x, v), ValidationError);
}

TEST_CASE("Wodzicki-traced transgression on a symbol-valued bundle") {
    // omega0 = 0, omega1 = i h(x) dphi (x) S with S = (I+Delta)^{-1/2}:
    // res_w picks up 2, so CS_1 = 2 i h dphi and d CS_1 = c_1(Omega1) - 0.
    auto s2 = metric_by_id("round-s2");
    SymbolConnection c0, c1;
    c0.atlas = c1.atlas = s2->atlas();
    c0.rank = c1.rank = 1;
    c0.cutoff = c1.cutoff = 8;
    auto h = [](int, const Jet2c* x) { return sin(x[0]) * sin(x[0]) * cos(x[1] * Jet2c(cxd(2.0, 0.0))); };
    SymbolConnectionTerm term;
    term.coeff = h;
    term.dx_index = 1;
    term.symbol = symbol_scale(cxd(0.0, 1.0), power_symbol(-0.5, 1, 8, 6));
    c1.terms.push_back(term);

    ScalarForm cs = relative_cs_form_symbol(c0, c1, 1, SymbolTraceKind::Wodzicki);
    ScalarForm dcs = exterior_derivative_numeric(cs, 1e-5);
    ScalarForm ck1 = symbol_char_form(c1, 1, SymbolTraceKind::Wodzicki);
    const Chart& chart = s2->atlas().charts[0];
    for (int p = 0; p < 15; ++p) {
        VecD x = interior_point(chart, 53, p);
        std::vector<VecD> v = {rnd_vec(2, 59, p, 0), rnd_vec(2, 59, p, 10)};
        CHECK(std::abs(dcs.eval(0, x, v) - ck1.eval(0, x, v)) < 1e-6);
    }

    // gauge case: multiplication-operator values have zero residue, so the
    // Wodzicki CS form vanishes while the leading-order one does not
    SymbolConnection cg = c1;
    cg.terms[0].symbol = multiplication_symbol(
        FourierPoly::constant(MatC::Identity(1, 1) * cxd(0.0, 1.0), 8), 6);
    ScalarForm csw = relative_cs_form_symbol(c0, cg, 1, SymbolTraceKind::Wodzicki);
    ScalarForm cslo = relative_cs_form_symbol(c0, cg, 1, SymbolTraceKind::LeadingOrder);
    VecD x = interior_point(chart, 61, 0);
    std::vector<VecD> v1 = {rnd_vec(2, 61, 0, 0)};
    CHECK(std::abs(csw.eval(0, x, v1)) < 1e-14);
    CHECK(std::abs(cslo.eval(0, x, v1)) > 1e-6);
}

TEST_CASE("connection independence of the monopole Chern number") {
    QuadratureSpec q;
    q.nodes_per_axis = 64;
    auto v = [&](const std::string& id) {
        auto conn = connection_by_id(id);
        ScalarForm c1 = char_form(conn, InvariantPolynomial::trace_power(1));
        return (cxd(0.0, 1.0) / kTwoPi * integrate(c1, q).value).real();
    };
    const double a = v("perturbed-monopole?n=1&seed=5&eps=0.3");
    const double b = v("perturbed-monopole?n=1&seed=9&eps=0.2");
    CHECK(std::abs(a - b) < 1e-6);
    CHECK(std::abs(a - 1.0) < 1e-6);
}
