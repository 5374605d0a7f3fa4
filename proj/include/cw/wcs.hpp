#pragma once

#include "cw/curvature.hpp"
#include "cw/quadrature.hpp"

namespace cw {

// Circle action on a catalog manifold. Catalog actions are coordinate
// translations along Killing directions, so they are isometries by
// construction; tests verify the pullback-metric residual.
class CircleAction {
public:
    virtual ~CircleAction() = default;
    virtual std::string id() const = 0;
    virtual MetricPtr base_metric() const = 0;
    // act(theta, m), wrapped into the chart box along periodic coordinates
    virtual VecD act(double theta, const VecD& m) const = 0;
    // d act(theta, .)|_m in chart bases
    virtual MatD differential(double theta, const VecD& m) const = 0;
    // d/dtheta act(theta, m), a tangent vector at act(theta, m)
    virtual VecD velocity(double theta, const VecD& m) const = 0;
};

using ActionPtr = std::shared_ptr<const CircleAction>;

// "trivial" | "hopf" (round-s3) | "psi-rotation" (squashed-t11); the metric
// must match the action's homogeneous space.
ActionPtr action_by_id(const std::string& id, MetricPtr metric);

// theta -> base(theta + theta0), for reparametrization-invariance checks.
ActionPtr offset_action(ActionPtr base, double theta0);

// One loop gamma with velocities and a (2k-1)-vector frame along it, sampled
// on a uniform theta grid.
struct LoopSamples {
    int chart = 0;
    std::vector<VecD> point;
    std::vector<VecD> velocity;
    std::vector<std::vector<VecD>> frame;  // frame[i][a], a = 0..2k-2
};

// The Wodzicki-Chern-Simons (2k-1)-form of the H^s family evaluated on a
// frame along a loop:
//   (2/(2k-1)!) sum_sigma sgn(sigma) int_{S^1} tr[ (-Omega(X_s1, gdot)
//     - 2 (w -> Omega(w, gdot) X_s1)) . Omega(X_s2,X_s3) ... ] dtheta,
// trapezoid rule on the uniform grid (the integrand is smooth and periodic).
double wcs_form_at_loop(CurvatureProvider& curvature, const LoopSamples& loop, int k);

struct WcsResult {
    double value = 0.0;
    double std_error = 0.0;  // Monte Carlo only
    long nodes = 0;
    int theta_nodes = 0;
    // (nodes-per-axis or sample count, value) at each refinement level,
    // coarsest first; the last row is `value`.
    std::vector<std::pair<long, double>> convergence;
};

// int_M a* CS_k over the orbit cycle of the action: at each quadrature node m
// the loop theta -> act(theta, m) is built, the chart frame is pushed forward
// by d act(theta, .), and the form above is integrated over M in chart
// orientation. Requires dim M = 2k - 1. Node work is split across `workers`
// with per-worker curvature caches and a deterministic pairwise reduction, so
// results are bit-identical for any worker count.
WcsResult wcs_integral(const MetricPtr& metric, const ActionPtr& action, int k,
                       const QuadratureSpec& q, int workers = 1, int theta_nodes = 64,
                       int convergence_levels = 3);

}  // namespace cw
