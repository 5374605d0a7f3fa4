#pragma once

#include <functional>

#include "cw/connection.hpp"

namespace cw {

// Matrix-group coordinate chart: the group element g(x) evaluable on complex
// 2-jets, so g^{-1} dg and its first derivatives are exact.
struct GroupChart {
    std::string name;  // "su2" | "u1" | "so3"
    ChartAtlas atlas;
    int matrix_dim = 0;
    // fills matrix_dim^2 row-major entries
    std::function<void(const Jet2c* x, Jet2c* g)> eval;
};

GroupChart group_chart(const std::string& name);

MatC group_element(const GroupChart& gc, const VecD& x);

// g(x)^{-1} dg(x)[tangent]
MatC maurer_cartan_form(const GroupChart& gc, const VecD& x, const VecD& tangent);

// g^{-1} dg as a matrix-valued 1-form on the group chart.
MatrixForm maurer_cartan_one_form(const GroupChart& gc);

// tr((g^{-1} dg)^p) as a scalar p-form.
ScalarForm maurer_cartan_power_trace(const GroupChart& gc, int p);

// The gauge transform g^{-1} nabla g of the flat connection on the trivial
// bundle over the group: omega = g^{-1} dg.
ConnPtr gauge_transformed_flat(const GroupChart& gc);

}  // namespace cw
