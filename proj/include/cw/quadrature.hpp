#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cw/common.hpp"

namespace cw {

enum class QuadScheme { GaussLegendre, MonteCarlo };

struct QuadratureSpec {
    QuadScheme scheme = QuadScheme::GaussLegendre;
    int nodes_per_axis = 48;     // Gauss-Legendre
    long mc_samples = 2000000;   // Monte Carlo
    uint64_t seed = 0;           // Monte Carlo only

    void validate() const {
        if (scheme == QuadScheme::GaussLegendre && nodes_per_axis < 2)
            throw ValidationError("QuadratureSpec: nodes-per-axis must be >= 2");
        if (scheme == QuadScheme::MonteCarlo && mc_samples < 1000)
            throw ValidationError("QuadratureSpec: sample-count must be >= 1000");
    }

    // Spec defaults: 48 nodes/axis up to dimension 3, 24 for dimension 5.
    static QuadratureSpec default_for_dim(int dim) {
        QuadratureSpec q;
        q.nodes_per_axis = dim <= 3 ? 48 : 24;
        return q;
    }

    std::string describe() const;
};

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule on (-1,1); cached per n, thread-safe to read.
const GaussRule& gauss_legendre(int n);

// Counter-based uniform stream: value in [0,1) fully determined by
// (seed, index, component). Parallel workers draw identical samples no matter
// how the index range is partitioned.
double counter_uniform(uint64_t seed, uint64_t index, uint64_t component);

// Deterministic pairwise tree sum; result depends only on element order.
double tree_sum(const std::vector<double>& values);

}  // namespace cw
