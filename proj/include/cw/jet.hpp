#pragma once

// Forward-mode automatic differentiation with second-order truncated Taylor
// arithmetic. A Jet2 carries a value, its gradient in up to kMaxDim seed
// directions and the full symmetric Hessian block. All curvature code obtains
// exact first and second derivatives of metric coefficients this way; central
// finite differences appear only in cross-check tests.

#include <array>
#include <cmath>
#include <cstdint>

#include "cw/common.hpp"

namespace cw {

template <class S>
struct Jet2 {
    static constexpr int kMaxVars = kMaxDim;
    static constexpr int kMaxPairs = kMaxVars * (kMaxVars + 1) / 2;

    S v{};
    std::array<S, kMaxVars> g{};
    std::array<S, kMaxPairs> h{};  // packed upper triangle, index pair_index(i,j)

    Jet2() = default;
    Jet2(S value) : v(value) {}  // NOLINT: implicit by design, scalars promote to constants
    Jet2(double value) requires(!std::is_same_v<S, double>) : v(value) {}

    static constexpr int pair_index(int i, int j) {
        if (i > j) std::swap(i, j);
        return j * (j + 1) / 2 + i;
    }

    static Jet2 variable(int var, S value) {
        Jet2 r(value);
        r.g[static_cast<size_t>(var)] = S(1);
        return r;
    }

    S d1(int i) const { return g[static_cast<size_t>(i)]; }
    S d2(int i, int j) const { return h[static_cast<size_t>(pair_index(i, j))]; }
};

using Jet2d = Jet2<double>;
using Jet2c = Jet2<cxd>;

template <class S>
Jet2<S> operator+(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.v + b.v);
    for (int i = 0; i < Jet2<S>::kMaxVars; ++i) r.g[i] = a.g[i] + b.g[i];
    for (int i = 0; i < Jet2<S>::kMaxPairs; ++i) r.h[i] = a.h[i] + b.h[i];
    return r;
}

template <class S>
Jet2<S> operator-(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.v - b.v);
    for (int i = 0; i < Jet2<S>::kMaxVars; ++i) r.g[i] = a.g[i] - b.g[i];
    for (int i = 0; i < Jet2<S>::kMaxPairs; ++i) r.h[i] = a.h[i] - b.h[i];
    return r;
}

template <class S>
Jet2<S> operator-(const Jet2<S>& a) {
    Jet2<S> r(-a.v);
    for (int i = 0; i < Jet2<S>::kMaxVars; ++i) r.g[i] = -a.g[i];
    for (int i = 0; i < Jet2<S>::kMaxPairs; ++i) r.h[i] = -a.h[i];
    return r;
}

template <class S>
Jet2<S> operator*(const Jet2<S>& a, const Jet2<S>& b) {
    Jet2<S> r(a.v * b.v);
    for (int i = 0; i < Jet2<S>::kMaxVars; ++i) r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int j = 0; j < Jet2<S>::kMaxVars; ++j)
        for (int i = 0; i <= j; ++i) {
            const int p = Jet2<S>::pair_index(i, j);
            r.h[p] = a.h[p] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[p];
        }
    return r;
}

// f(a) with f', f'' supplied: chain rule for the 2-jet.
template <class S>
Jet2<S> jet_apply(const Jet2<S>& a, S f, S df, S d2f) {
    Jet2<S> r(f);
    for (int i = 0; i < Jet2<S>::kMaxVars; ++i) r.g[i] = df * a.g[i];
    for (int j = 0; j < Jet2<S>::kMaxVars; ++j)
        for (int i = 0; i <= j; ++i) {
            const int p = Jet2<S>::pair_index(i, j);
            r.h[p] = d2f * a.g[i] * a.g[j] + df * a.h[p];
        }
    return r;
}

template <class S>
Jet2<S> inv(const Jet2<S>& a) {
    const S iv = S(1) / a.v;
    return jet_apply(a, iv, -iv * iv, S(2) * iv * iv * iv);
}

template <class S>
Jet2<S> operator/(const Jet2<S>& a, const Jet2<S>& b) {
    return a * inv(b);
}

template <class S>
Jet2<S> sin(const Jet2<S>& a) {
    using std::cos;
    using std::sin;
    return jet_apply(a, S(sin(a.v)), S(cos(a.v)), S(-sin(a.v)));
}
template <class S>
Jet2<S> cos(const Jet2<S>& a) {
    using std::cos;
    using std::sin;
    return jet_apply(a, S(cos(a.v)), S(-sin(a.v)), S(-cos(a.v)));
}
template <class S>
Jet2<S> exp(const Jet2<S>& a) {
    using std::exp;
    const S e = exp(a.v);
    return jet_apply(a, e, e, e);
}
template <class S>
Jet2<S> sqrt(const Jet2<S>& a) {
    using std::sqrt;
    const S s = sqrt(a.v);
    return jet_apply(a, s, S(0.5) / s, S(-0.25) / (s * a.v));
}
template <class S>
Jet2<S> pow(const Jet2<S>& a, double p) {
    using std::pow;
    return jet_apply(a, S(pow(a.v, p)), S(p) * pow(a.v, p - 1.0), S(p * (p - 1.0)) * pow(a.v, p - 2.0));
}

// Plain-scalar passthroughs so one templated definition evaluates on both
// doubles and jets.
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double exp(double x) { return std::exp(x); }
inline double sqrt(double x) { return std::sqrt(x); }
inline double pow(double x, double p) { return std::pow(x, p); }
inline double inv(double x) { return 1.0 / x; }
inline cxd sin(const cxd& x) { return std::sin(x); }
inline cxd cos(const cxd& x) { return std::cos(x); }
inline cxd exp(const cxd& x) { return std::exp(x); }
inline cxd sqrt(const cxd& x) { return std::sqrt(x); }
inline cxd inv(const cxd& x) { return cxd(1.0, 0.0) / x; }

}  // namespace cw
