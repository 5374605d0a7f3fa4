#pragma once

#include <map>
#include <memory>
#include <vector>

#include "cw/metric.hpp"

namespace cw {

// Christoffel symbols of the second kind, Gamma[k](i,j) = Gamma^k_{ij}.
struct Christoffel {
    int d = 0;
    std::array<MatD, kMaxDim> gamma;
    double sym(int k, int i, int j) const { return gamma[k](i, j); }
};

// Riemann tensor R^i_{jkl} at a point together with the metric data needed to
// form the endomorphism-valued 2-form, sectional curvatures and orthonormal
// frames. Index convention: round spheres have sectional curvature +1.
struct CurvatureSample {
    int d = 0;
    VecD x;
    MatD g, g_inv;
    std::array<double, kMaxDim * kMaxDim * kMaxDim * kMaxDim> R{};

    double riem(int i, int j, int k, int l) const { return R[((i * d + j) * d + k) * d + l]; }
    double& riem(int i, int j, int k, int l) { return R[((i * d + j) * d + k) * d + l]; }

    // Omega(u,v) = R(u,v) as an endomorphism in the chart basis.
    MatD endo(const VecD& u, const VecD& v) const;
    // w -> Omega(w, v) a  (the second Eq-type term of the loop-space form).
    MatD endo_right(const VecD& a, const VecD& v) const;

    // First Bianchi residual max_i |R^i_{jkl} + R^i_{klj} + R^i_{ljk}|.
    double bianchi_residual() const;
    // max |g(Omega(u,v)w, z) + g(w, Omega(u,v)z)| over the coordinate frame.
    double metric_skewness_residual() const;
};

Christoffel christoffel(const MetricField& metric, int chart, const VecD& x);

// Christoffel symbols together with their exact first derivatives.
struct ChristoffelJet {
    int d = 0;
    std::array<MatD, kMaxDim> gamma;                        // gamma[k](i,j) = Gamma^k_ij
    std::array<std::array<MatD, kMaxDim>, kMaxDim> dgamma;  // dgamma[m][k] = d_m Gamma^k
};
ChristoffelJet christoffel_jet(const MetricField& metric, int chart, const VecD& x);

CurvatureSample riemann_curvature(const MetricField& metric, int chart, const VecD& x);

double sectional_curvature(const CurvatureSample& s, const VecD& u, const VecD& v);

// Curvature evaluation behind a stable-reference interface so integrators can
// swap in a caching implementation. Instances are not thread-safe; each worker
// owns one.
class CurvatureProvider {
public:
    virtual ~CurvatureProvider() = default;
    virtual const CurvatureSample& at(int chart, const VecD& x) = 0;
};

class DirectCurvature final : public CurvatureProvider {
public:
    explicit DirectCurvature(MetricPtr metric) : metric_(std::move(metric)) {}
    const CurvatureSample& at(int chart, const VecD& x) override;

private:
    MetricPtr metric_;
    CurvatureSample scratch_;
};

// Caches samples keyed by the coordinates the metric actually depends on
// (the complement of killing_mask). Exact-key cache: quadrature grids repeat
// coordinates bit-identically.
class CachedCurvature final : public CurvatureProvider {
public:
    explicit CachedCurvature(MetricPtr metric);
    const CurvatureSample& at(int chart, const VecD& x) override;
    size_t entries() const { return cache_.size(); }

private:
    MetricPtr metric_;
    std::vector<bool> mask_;
    std::map<std::pair<int, std::vector<double>>, std::unique_ptr<CurvatureSample>> cache_;
};

}  // namespace cw
