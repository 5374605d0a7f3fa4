#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cw/chart.hpp"
#include "cw/jet.hpp"

namespace cw {

// Value, gradient and Hessian of every metric coefficient at one point.
struct MetricJet {
    int d = 0;
    MatD g;                                                   // g_ij
    std::array<MatD, kMaxDim> dg;                             // d_k g_ij
    std::array<MatD, kMaxDim*(kMaxDim + 1) / 2> d2g;          // d_k d_l g_ij, packed
    const MatD& hess(int k, int l) const { return d2g[Jet2d::pair_index(k, l)]; }
};

// A Riemannian metric in coordinate charts, evaluable on second-order jets.
class MetricField {
public:
    virtual ~MetricField() = default;

    virtual const ChartAtlas& atlas() const = 0;
    virtual std::string id() const = 0;
    int dim() const { return atlas().dim(); }

    virtual MatD eval(int chart, const VecD& x) const = 0;
    virtual MetricJet eval_jet2(int chart, const VecD& x) const = 0;

    // Coordinates none of the g_ij depend on. Purely an acceleration hint for
    // curvature caching; verified against the metric by tests.
    virtual std::vector<bool> killing_mask() const { return std::vector<bool>(dim(), false); }
};

using MetricPtr = std::shared_ptr<const MetricField>;

// Wraps a functor  f(chart, const S* x, S* g_rowmajor)  templated over the
// scalar type so plain and jet evaluation share one definition.
template <class F>
class AnalyticMetric final : public MetricField {
public:
    AnalyticMetric(std::string id, ChartAtlas atlas, F f, std::vector<bool> killing = {})
        : id_(std::move(id)), atlas_(std::move(atlas)), f_(std::move(f)), killing_(std::move(killing)) {
        atlas_.validate();
    }

    const ChartAtlas& atlas() const override { return atlas_; }
    std::string id() const override { return id_; }

    MatD eval(int chart, const VecD& x) const override {
        const int d = dim();
        std::array<double, kMaxDim> xs{};
        for (int i = 0; i < d; ++i) xs[i] = x[i];
        std::array<double, kMaxDim * kMaxDim> gs{};
        f_(chart, xs.data(), gs.data());
        MatD g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = gs[i * d + j];
        return g;
    }

    MetricJet eval_jet2(int chart, const VecD& x) const override {
        const int d = dim();
        std::array<Jet2d, kMaxDim> xs;
        for (int i = 0; i < d; ++i) xs[i] = Jet2d::variable(i, x[i]);
        std::array<Jet2d, kMaxDim * kMaxDim> gs;
        f_(chart, xs.data(), gs.data());
        MetricJet out;
        out.d = d;
        out.g = MatD(d, d);
        for (int k = 0; k < d; ++k) out.dg[k] = MatD(d, d);
        for (int p = 0; p < d * (d + 1) / 2; ++p) out.d2g[p] = MatD(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const Jet2d& e = gs[i * d + j];
                out.g(i, j) = e.v;
                for (int k = 0; k < d; ++k) out.dg[k](i, j) = e.d1(k);
                for (int k = 0; k < d; ++k)
                    for (int l = k; l < d; ++l) out.d2g[Jet2d::pair_index(k, l)](i, j) = e.d2(k, l);
            }
        return out;
    }

    std::vector<bool> killing_mask() const override {
        return killing_.empty() ? MetricField::killing_mask() : killing_;
    }

private:
    std::string id_;
    ChartAtlas atlas_;
    F f_;
    std::vector<bool> killing_;
};

template <class F>
MetricPtr make_metric(std::string id, ChartAtlas atlas, F f, std::vector<bool> killing = {}) {
    return std::make_shared<AnalyticMetric<F>>(std::move(id), std::move(atlas), std::move(f),
                                               std::move(killing));
}

// Catalog lookup by id, e.g. "round-s2", "squashed-t11?t=0.5", "euclidean-d3",
// "su2-biinvariant", "scaled?base=round-s3&c=2".
MetricPtr metric_by_id(const std::string& id);
std::vector<std::string> metric_catalog_ids();

// g -> c*g on the same atlas.
MetricPtr scaled_metric(MetricPtr base, double c);

}  // namespace cw
