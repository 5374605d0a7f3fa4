#pragma once

#include <functional>
#include <vector>

#include "cw/chart.hpp"
#include "cw/quadrature.hpp"

namespace cw {

// Degree-p antisymmetric multilinear field with values in V (complex scalars
// or complex matrices). Evaluation receives a chart index, a point and p
// tangent vectors in the chart basis. `proto` fixes the value shape so the
// zero form of the right rank can be produced.
template <class V>
struct Form {
    int degree = 0;
    ChartAtlas atlas;
    V proto{};
    std::function<V(int chart, const VecD& x, const std::vector<VecD>& vecs)> eval;

    V operator()(int chart, const VecD& x, const std::vector<VecD>& vecs) const {
        return eval(chart, x, vecs);
    }
};

using ScalarForm = Form<cxd>;
using MatrixForm = Form<MatC>;

namespace detail {
inline cxd zero_like(const cxd&) { return cxd(0.0, 0.0); }
inline MatC zero_like(const MatC& p) { return MatC::Zero(p.rows(), p.cols()); }
inline cxd mul_values(const cxd& a, const cxd& b) { return a * b; }
inline MatC mul_values(const MatC& a, const MatC& b) { return a * b; }
}  // namespace detail

template <class V>
Form<V> zero_form(const ChartAtlas& atlas, int degree, V proto) {
    Form<V> f;
    f.degree = degree;
    f.atlas = atlas;
    f.proto = proto;
    f.eval = [proto](int, const VecD&, const std::vector<VecD>&) { return detail::zero_like(proto); };
    return f;
}

void require_same_atlas(const ChartAtlas& a, const ChartAtlas& b, const char* who);

// Shuffle-permutation wedge. Matrix values multiply in shuffle order; no trace
// is taken here. Degree sums beyond the manifold dimension give the zero form.
template <class V>
Form<V> wedge(const Form<V>& a, const Form<V>& b);

template <class V>
Form<V> form_add(const Form<V>& a, const Form<V>& b);

template <class V>
Form<V> form_scale(cxd c, const Form<V>& a);

// Coordinate exterior derivative with central finite differences at `step`.
// Test-only machinery for closedness claims; production derivatives use jets.
template <class V>
Form<V> exterior_derivative_numeric(const Form<V>& a, double step);

ScalarForm trace_form(const MatrixForm& a);

// dx^i on the given atlas.
ScalarForm coordinate_form(const ChartAtlas& atlas, int i);
ScalarForm scalar_form(const ChartAtlas& atlas, std::function<cxd(int, const VecD&)> f);
// f * dx^i
ScalarForm function_one_form(const ChartAtlas& atlas, std::function<cxd(int, const VecD&)> f, int i);

struct IntegrationResult {
    cxd value{0.0, 0.0};
    double std_error = 0.0;  // Monte Carlo only
    long nodes = 0;
};

// Integral of a top-degree scalar form over all charts of its atlas,
// coordinate orientation times `orientation`. Gauss-Legendre tensor grids or
// the counter-based Monte Carlo stream; node evaluations are pure and are
// split statically across `workers`, with a deterministic pairwise reduction
// so the result is bit-identical for any worker count. Matrix-valued forms are
// traced before integration.
IntegrationResult integrate(const ScalarForm& a, const QuadratureSpec& spec, int orientation = +1,
                            int workers = 1);

// Map between charted manifolds with an explicit differential (columns = image
// of coordinate frame vectors).
struct ManifoldMap {
    ChartAtlas from, to;
    std::function<VecD(const VecD&)> apply;
    std::function<MatD(const VecD&)> differential;
};

template <class V>
Form<V> pullback(const Form<V>& target_form, const ManifoldMap& map);

extern template struct Form<cxd>;
extern template struct Form<MatC>;

}  // namespace cw
