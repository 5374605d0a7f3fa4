#pragma once

#include <memory>

#include "cw/curvature.hpp"
#include "cw/forms.hpp"
#include "cw/metric.hpp"

namespace cw {

// Value and first derivatives of a matrix-valued function of chart coordinates.
struct MatrixJet {
    MatC value;
    std::array<MatC, kMaxDim> d;
};

// A connection on a rank-r bundle in local trivializations: the coefficient
// matrices omega_i of the connection 1-form, evaluable with first derivatives
// so the curvature F = d omega + omega ^ omega comes from exact jets.
class Connection {
public:
    virtual ~Connection() = default;
    virtual int rank() const = 0;
    virtual const ChartAtlas& atlas() const = 0;
    virtual std::string id() const = 0;
    virtual std::vector<MatrixJet> omega_jet(int chart, const VecD& x) const = 0;
    // The base metric when the connection is metric-derived (orthonormal
    // frames for the Pfaffian need it); null otherwise.
    virtual const MetricField* metric() const { return nullptr; }

    std::vector<MatC> omega(int chart, const VecD& x) const;
};

using ConnPtr = std::shared_ptr<const Connection>;

// omega as a matrix-valued 1-form.
MatrixForm connection_one_form(const ConnPtr& c);
// F = d omega + omega ^ omega as a matrix-valued 2-form (exact derivatives).
MatrixForm curvature_form(const ConnPtr& c);

// t * a + (1 - t) * b on the same bundle.
ConnPtr blend_connection(double t, const ConnPtr& a, const ConnPtr& b);

// Wraps a functor  f(chart, const S* x, S* omega)  with omega laid out
// [coordinate][row*rank+col], templated over the scalar so plain and jet
// evaluation share one definition (S = cxd or Jet2c; coordinates arrive as
// real-valued jets).
template <class F>
class AnalyticConnection final : public Connection {
public:
    AnalyticConnection(std::string id, ChartAtlas atlas, int rank, F f, MetricPtr metric = nullptr)
        : id_(std::move(id)), atlas_(std::move(atlas)), rank_(rank), f_(std::move(f)),
          metric_(std::move(metric)) {}

    int rank() const override { return rank_; }
    const ChartAtlas& atlas() const override { return atlas_; }
    std::string id() const override { return id_; }
    const MetricField* metric() const override { return metric_.get(); }

    std::vector<MatrixJet> omega_jet(int chart, const VecD& x) const override {
        const int d = atlas_.dim();
        std::array<Jet2c, kMaxDim> xs;
        for (int i = 0; i < d; ++i) xs[i] = Jet2c::variable(i, cxd(x[i], 0.0));
        std::vector<Jet2c> out(static_cast<size_t>(d) * rank_ * rank_, Jet2c(cxd(0, 0)));
        f_(chart, xs.data(), out.data());
        std::vector<MatrixJet> w(d);
        for (int i = 0; i < d; ++i) {
            w[i].value = MatC(rank_, rank_);
            for (int k = 0; k < d; ++k) w[i].d[k] = MatC(rank_, rank_);
            for (int r = 0; r < rank_; ++r)
                for (int c = 0; c < rank_; ++c) {
                    const Jet2c& e = out[static_cast<size_t>(i) * rank_ * rank_ + r * rank_ + c];
                    w[i].value(r, c) = e.v;
                    for (int k = 0; k < d; ++k) w[i].d[k](r, c) = e.d1(k);
                }
        }
        return w;
    }

private:
    std::string id_;
    ChartAtlas atlas_;
    int rank_;
    F f_;
    MetricPtr metric_;
};

template <class F>
ConnPtr make_connection(std::string id, ChartAtlas atlas, int rank, F f, MetricPtr metric = nullptr) {
    return std::make_shared<AnalyticConnection<F>>(std::move(id), std::move(atlas), rank,
                                                   std::move(f), std::move(metric));
}

// Levi-Civita connection of a catalog metric on its tangent bundle,
// omega_i = Gamma^._{.i}, derivatives from the metric 2-jet.
ConnPtr levi_civita_connection(MetricPtr metric);

// Catalog: "monopole?n=<int>", "perturbed-monopole?n=<int>&seed=<int>&eps=<real>",
// "levi-civita?metric=<metric-id>", "mc-flat-su2", "mc-gauge-su2".
ConnPtr connection_by_id(const std::string& id);

}  // namespace cw
