#include <doctest.h>

#include <cmath>

#include "cw/jet.hpp"

using namespace cw;

namespace {

// f(x0, x1) = sin(x0) * x1^2 + exp(x0 * x1) / (1 + x1^2) + sqrt(2 + cos(x0))
template <class S>
S test_fn(const S& x0, const S& x1) {
    using cw::cos;
    using cw::exp;
    using cw::sin;
    using cw::sqrt;
    return sin(x0) * x1 * x1 + exp(x0 * x1) / (S(1.0) + x1 * x1) + sqrt(S(2.0) + cos(x0));
}

double fd1(double x0, double x1, int wrt, double h) {
    double a0 = x0, a1 = x1, b0 = x0, b1 = x1;
    (wrt == 0 ? a0 : a1) += h;
    (wrt == 0 ? b0 : b1) -= h;
    return (test_fn(a0, a1) - test_fn(b0, b1)) / (2 * h);
}

double fd2(double x0, double x1, int i, int j, double h) {
    double p0 = x0, p1 = x1, m0 = x0, m1 = x1;
    (j == 0 ? p0 : p1) += h;
    (j == 0 ? m0 : m1) -= h;
    return (fd1(p0, p1, i, h) - fd1(m0, m1, i, h)) / (2 * h);
}

}  // namespace

TEST_CASE("second-order jets match finite differences") {
    const double x0 = 0.7, x1 = -0.4, h = 1e-5;
    Jet2d a = Jet2d::variable(0, x0);
    Jet2d b = Jet2d::variable(1, x1);
    Jet2d f = test_fn(a, b);

    CHECK(f.v == doctest::Approx(test_fn(x0, x1)).epsilon(1e-14));
    for (int i = 0; i < 2; ++i)
        CHECK(f.d1(i) == doctest::Approx(fd1(x0, x1, i, h)).epsilon(1e-8));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            CHECK(f.d2(i, j) == doctest::Approx(fd2(x0, x1, i, j, h)).epsilon(1e-5));
}

TEST_CASE("jet division and power") {
    Jet2d x = Jet2d::variable(0, 2.0);
    Jet2d y = pow(x, 3.5) / x;  // = x^2.5
    CHECK(y.v == doctest::Approx(std::pow(2.0, 2.5)));
    CHECK(y.d1(0) == doctest::Approx(2.5 * std::pow(2.0, 1.5)));
    CHECK(y.d2(0, 0) == doctest::Approx(2.5 * 1.5 * std::pow(2.0, 0.5)));
}

TEST_CASE("complex jets differentiate the exponential") {
    Jet2c t = Jet2c::variable(0, cxd(0.3, 0.0));
    Jet2c g = exp(t * Jet2c(cxd(0.0, 2.0)));  // e^{2it}
    CHECK(std::abs(g.v - std::exp(cxd(0.0, 0.6))) < 1e-14);
    CHECK(std::abs(g.d1(0) - cxd(0.0, 2.0) * std::exp(cxd(0.0, 0.6))) < 1e-14);
    CHECK(std::abs(g.d2(0, 0) - cxd(-4.0, 0.0) * std::exp(cxd(0.0, 0.6))) < 1e-13);
}
