#include "cw/connection.hpp"

#include <cmath>

#include "cw/idquery.hpp"
#include "cw/group_charts.hpp"
#include "cw/quadrature.hpp"

namespace cw {

std::vector<MatC> Connection::omega(int chart, const VecD& x) const {
    auto jets = omega_jet(chart, x);
    std::vector<MatC> out(jets.size());
    for (size_t i = 0; i < jets.size(); ++i) out[i] = jets[i].value;
    return out;
}

MatrixForm connection_one_form(const ConnPtr& c) {
    MatrixForm f;
    f.degree = 1;
    f.atlas = c->atlas();
    f.proto = MatC::Zero(c->rank(), c->rank());
    f.eval = [c](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        const auto w = c->omega(chart, x);
        MatC out = MatC::Zero(c->rank(), c->rank());
        for (size_t i = 0; i < w.size(); ++i) out += vecs[0][static_cast<int>(i)] * w[i];
        return out;
    };
    return f;
}

MatrixForm curvature_form(const ConnPtr& c) {
    MatrixForm f;
    f.degree = 2;
    f.atlas = c->atlas();
    f.proto = MatC::Zero(c->rank(), c->rank());
    f.eval = [c](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        const auto w = c->omega_jet(chart, x);
        const int d = c->atlas().dim();
        // F_ij = d_i omega_j - d_j omega_i + [omega_i, omega_j]
        MatC out = MatC::Zero(c->rank(), c->rank());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                const double uv = vecs[0][i] * vecs[1][j];
                if (uv == 0.0) continue;
                MatC fij = w[j].d[i] - w[i].d[j] + w[i].value * w[j].value - w[j].value * w[i].value;
                out += uv * fij;
            }
        return out;
    };
    return f;
}

namespace {

class BlendConnection final : public Connection {
public:
    BlendConnection(double t, ConnPtr a, ConnPtr b) : t_(t), a_(std::move(a)), b_(std::move(b)) {
        if (a_->rank() != b_->rank())
            throw ValidationError("blend_connection: rank mismatch");
        require_same_atlas(a_->atlas(), b_->atlas(), "blend_connection");
    }
    int rank() const override { return a_->rank(); }
    const ChartAtlas& atlas() const override { return a_->atlas(); }
    std::string id() const override { return "blend(" + a_->id() + "," + b_->id() + ")"; }
    std::vector<MatrixJet> omega_jet(int chart, const VecD& x) const override {
        auto wa = a_->omega_jet(chart, x);
        auto wb = b_->omega_jet(chart, x);
        const int d = atlas().dim();
        for (int i = 0; i < d; ++i) {
            wa[i].value = t_ * wa[i].value + (1.0 - t_) * wb[i].value;
            for (int k = 0; k < d; ++k) wa[i].d[k] = t_ * wa[i].d[k] + (1.0 - t_) * wb[i].d[k];
        }
        return wa;
    }

private:
    double t_;
    ConnPtr a_, b_;
};

class LeviCivitaConnection final : public Connection {
public:
    explicit LeviCivitaConnection(MetricPtr metric) : metric_(std::move(metric)) {}
    int rank() const override { return metric_->dim(); }
    const ChartAtlas& atlas() const override { return metric_->atlas(); }
    std::string id() const override { return "levi-civita?metric=" + metric_->id(); }
    const MetricField* metric() const override { return metric_.get(); }

    std::vector<MatrixJet> omega_jet(int chart, const VecD& x) const override {
        const ChristoffelJet G = christoffel_jet(*metric_, chart, x);
        const int d = G.d;
        std::vector<MatrixJet> w(d);
        for (int i = 0; i < d; ++i) {
            w[i].value = MatC::Zero(d, d);
            for (int k = 0; k < d; ++k) w[i].d[k] = MatC::Zero(d, d);
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    w[i].value(a, b) = cxd(G.gamma[a](b, i), 0.0);
                    for (int k = 0; k < d; ++k) w[i].d[k](a, b) = cxd(G.dgamma[k][a](b, i), 0.0);
                }
        }
        return w;
    }

private:
    MetricPtr metric_;
};

ConnPtr make_monopole(int n) {
    auto s2 = metric_by_id("round-s2");
    const double half_n = 0.5 * n;
    auto f = [half_n]<class S>(int, const S* x, S* w) {
        // omega_theta = 0, omega_phi = -(i n / 2)(1 - cos theta)
        w[0] = S(cxd(0.0, 0.0));
        w[1] = S(cxd(0.0, -half_n)) * (S(cxd(1.0, 0.0)) - cos(x[0]));
    };
    return make_connection("monopole?n=" + std::to_string(n), s2->atlas(), 1, f, s2);
}

ConnPtr make_perturbed_monopole(int n, long seed, double eps) {
    auto s2 = metric_by_id("round-s2");
    // Smooth global 1-form perturbation: i*(a sin th sin(m phi + c)) dth
    //                                  + i*(b sin^2 th cos(m' phi + c')) dphi.
    const double a = eps * (2.0 * counter_uniform(seed, 0, 0) - 1.0);
    const double b = eps * (2.0 * counter_uniform(seed, 1, 0) - 1.0);
    const double c1 = kTwoPi * counter_uniform(seed, 2, 0);
    const double c2 = kTwoPi * counter_uniform(seed, 3, 0);
    const int m1 = 1 + static_cast<int>(2.9 * counter_uniform(seed, 4, 0));
    const int m2 = 1 + static_cast<int>(2.9 * counter_uniform(seed, 5, 0));
    const double half_n = 0.5 * n;
    auto f = [=]<class S>(int, const S* x, S* w) {
        const S st = sin(x[0]);
        w[0] = S(cxd(0.0, a)) * st * sin(x[1] * S(double(m1)) + S(c1));
        w[1] = S(cxd(0.0, -half_n)) * (S(cxd(1.0, 0.0)) - cos(x[0])) +
               S(cxd(0.0, b)) * st * st * cos(x[1] * S(double(m2)) + S(c2));
    };
    std::string id = "perturbed-monopole?n=" + std::to_string(n) + "&seed=" + std::to_string(seed);
    return make_connection(std::move(id), s2->atlas(), 1, f, s2);
}

ConnPtr make_flat_su2(int rank) {
    auto su2 = metric_by_id("su2-biinvariant");
    auto f = [rank]<class S>(int, const S*, S* w) {
        for (int i = 0; i < 3 * rank * rank; ++i) w[i] = S(cxd(0.0, 0.0));
    };
    return make_connection("mc-flat-su2", su2->atlas(), rank, f);
}

}  // namespace

ConnPtr blend_connection(double t, const ConnPtr& a, const ConnPtr& b) {
    return std::make_shared<BlendConnection>(t, a, b);
}

ConnPtr levi_civita_connection(MetricPtr metric) {
    return std::make_shared<LeviCivitaConnection>(std::move(metric));
}

ConnPtr connection_by_id(const std::string& id) {
    const IdQuery q = parse_id(id);
    if (q.name == "monopole") return make_monopole(static_cast<int>(q.get_int("n", 1)));
    if (q.name == "perturbed-monopole")
        return make_perturbed_monopole(static_cast<int>(q.get_int("n", 1)), q.get_int("seed", 1),
                                       q.get_real("eps", 0.25));
    if (q.name == "levi-civita") return levi_civita_connection(metric_by_id(q.get("metric", "round-s2")));
    if (q.name == "mc-flat-su2") return make_flat_su2(2);
    if (q.name == "mc-gauge-su2") return gauge_transformed_flat(group_chart("su2"));
    throw ValidationError("unknown connection id '" + id +
                          "'; known: monopole?n=, perturbed-monopole?n=&seed=&eps=, "
                          "levi-civita?metric=, mc-flat-su2, mc-gauge-su2");
}

}  // namespace cw
