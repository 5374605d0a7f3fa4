#include <doctest.h>

#include <cmath>

#include "cw/quadrature.hpp"

using namespace cw;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
    const GaussRule& r = gauss_legendre(8);  // exact to degree 15
    double s0 = 0.0, s14 = 0.0;
    for (size_t i = 0; i < r.nodes.size(); ++i) {
        s0 += r.weights[i];
        s14 += r.weights[i] * std::pow(r.nodes[i], 14);
    }
    CHECK(s0 == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(s14 == doctest::Approx(2.0 / 15.0).epsilon(1e-13));
}

TEST_CASE("Gauss-Legendre nodes are interior and symmetric") {
    for (int n : {2, 5, 48, 64}) {
        const GaussRule& r = gauss_legendre(n);
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(r.nodes[i]) < 1.0);
            CHECK(r.nodes[i] == doctest::Approx(-r.nodes[n - 1 - i]).epsilon(1e-14));
        }
    }
}

TEST_CASE("counter stream is deterministic and roughly uniform") {
    CHECK(counter_uniform(42, 7, 1) == counter_uniform(42, 7, 1));
    CHECK(counter_uniform(42, 7, 1) != counter_uniform(42, 8, 1));
    CHECK(counter_uniform(42, 7, 1) != counter_uniform(43, 7, 1));
    double mean = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) mean += counter_uniform(9, i, 0);
    mean /= n;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("tree sum is order-deterministic") {
    std::vector<double> v;
    for (int i = 0; i < 1001; ++i) v.push_back(std::sin(i) * 1e-3);
    const double a = tree_sum(v);
    const double b = tree_sum(v);
    CHECK(a == b);
    double naive = 0.0;
    for (double x : v) naive += x;
    CHECK(a == doctest::Approx(naive).epsilon(1e-12));
}

TEST_CASE("quadrature spec validation") {
    QuadratureSpec q;
    q.nodes_per_axis = 1;
    CHECK_THROWS_AS(q.validate(), ValidationError);
    q.nodes_per_axis = 2;
    CHECK_NOTHROW(q.validate());
    q.scheme = QuadScheme::MonteCarlo;
    q.mc_samples = 10;
    CHECK_THROWS_AS(q.validate(), ValidationError);
}
