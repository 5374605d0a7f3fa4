#include "cw/group_charts.hpp"

#include <cmath>

#include "cw/metric.hpp"

namespace cw {

namespace {

// ZYZ Euler angles (phi, theta, psi):
//   g = exp(-i phi sigma3/2) exp(-i theta sigma2/2) exp(-i psi sigma3/2)
// covering SU(2) once for phi in (0,2pi), theta in (0,pi), psi in (0,4pi).
void su2_eval(const Jet2c* x, Jet2c* g) {
    const cxd I(0.0, 1.0);
    const Jet2c half_sum = (x[0] + x[2]) * Jet2c(cxd(0.5, 0.0));
    const Jet2c half_diff = (x[0] - x[2]) * Jet2c(cxd(0.5, 0.0));
    const Jet2c ct = cos(x[1] * Jet2c(cxd(0.5, 0.0)));
    const Jet2c st = sin(x[1] * Jet2c(cxd(0.5, 0.0)));
    const Jet2c em_sum = exp(half_sum * Jet2c(-I));   // e^{-i(phi+psi)/2}
    const Jet2c ep_sum = exp(half_sum * Jet2c(I));
    const Jet2c em_diff = exp(half_diff * Jet2c(-I));
    const Jet2c ep_diff = exp(half_diff * Jet2c(I));
    g[0] = ct * em_sum;
    g[1] = -(st * em_diff);
    g[2] = st * ep_diff;
    g[3] = ct * ep_sum;
}

void u1_eval(const Jet2c* x, Jet2c* g) { g[0] = exp(x[0] * Jet2c(cxd(0.0, 1.0))); }

// R_z(phi) R_y(theta) R_z(psi)
void so3_eval(const Jet2c* x, Jet2c* g) {
    const Jet2c cf = cos(x[0]), sf = sin(x[0]);
    const Jet2c ct = cos(x[1]), st = sin(x[1]);
    const Jet2c cp = cos(x[2]), sp = sin(x[2]);
    g[0] = cf * ct * cp - sf * sp;
    g[1] = -(cf * ct * sp) - sf * cp;
    g[2] = cf * st;
    g[3] = sf * ct * cp + cf * sp;
    g[4] = -(sf * ct * sp) + cf * cp;
    g[5] = sf * st;
    g[6] = -(st * cp);
    g[7] = st * sp;
    g[8] = ct;
}

std::array<Jet2c, kMaxDim> seed_vars(const VecD& x, int d) {
    std::array<Jet2c, kMaxDim> xs;
    for (int i = 0; i < d; ++i) xs[i] = Jet2c::variable(i, cxd(x[i], 0.0));
    return xs;
}

}  // namespace

GroupChart group_chart(const std::string& name) {
    GroupChart gc;
    gc.name = name;
    if (name == "su2") {
        gc.atlas = metric_by_id("su2-biinvariant")->atlas();
        gc.matrix_dim = 2;
        gc.eval = su2_eval;
    } else if (name == "u1") {
        gc.atlas = metric_by_id("round-s1")->atlas();
        gc.matrix_dim = 1;
        gc.eval = u1_eval;
    } else if (name == "so3") {
        ChartAtlas a;
        a.name = "so3-euler";
        a.charts.push_back(make_chart("euler(phi,theta,psi)", {0.0, 0.0, 0.0},
                                      {kTwoPi, kPi, kTwoPi}, {1, 0, 1}));
        gc.atlas = std::move(a);
        gc.matrix_dim = 3;
        gc.eval = so3_eval;
    } else {
        throw ValidationError("unknown group chart '" + name + "'; known: su2, u1, so3");
    }
    return gc;
}

namespace {

struct GroupJet {
    MatC g;
    std::array<MatC, kMaxDim> dg;
};

GroupJet eval_group(const GroupChart& gc, const VecD& x) {
    const int d = gc.atlas.dim();
    const int n = gc.matrix_dim;
    auto xs = seed_vars(x, d);
    std::vector<Jet2c> out(static_cast<size_t>(n) * n, Jet2c(cxd(0, 0)));
    gc.eval(xs.data(), out.data());
    GroupJet gj;
    gj.g = MatC(n, n);
    for (int k = 0; k < d; ++k) gj.dg[k] = MatC(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            gj.g(r, c) = out[static_cast<size_t>(r) * n + c].v;
            for (int k = 0; k < d; ++k) gj.dg[k](r, c) = out[static_cast<size_t>(r) * n + c].d1(k);
        }
    return gj;
}

}  // namespace

MatC group_element(const GroupChart& gc, const VecD& x) { return eval_group(gc, x).g; }

MatC maurer_cartan_form(const GroupChart& gc, const VecD& x, const VecD& tangent) {
    const GroupJet gj = eval_group(gc, x);
    MatC dg = MatC::Zero(gc.matrix_dim, gc.matrix_dim);
    for (int k = 0; k < gc.atlas.dim(); ++k) dg += tangent[k] * gj.dg[k];
    return gj.g.inverse() * dg;
}

MatrixForm maurer_cartan_one_form(const GroupChart& gc) {
    MatrixForm f;
    f.degree = 1;
    f.atlas = gc.atlas;
    f.proto = MatC::Zero(gc.matrix_dim, gc.matrix_dim);
    auto gcc = std::make_shared<GroupChart>(gc);
    f.eval = [gcc](int, const VecD& x, const std::vector<VecD>& vecs) {
        return maurer_cartan_form(*gcc, x, vecs[0]);
    };
    return f;
}

ScalarForm maurer_cartan_power_trace(const GroupChart& gc, int p) {
    if (p < 1) throw ValidationError("maurer_cartan_power_trace: power must be >= 1");
    MatrixForm mc = maurer_cartan_one_form(gc);
    MatrixForm acc = mc;
    for (int i = 1; i < p; ++i) acc = wedge(acc, mc);
    return trace_form(acc);
}

ConnPtr gauge_transformed_flat(const GroupChart& gc) {
    // omega_i = g^{-1} d_i g with first derivatives from the 2-jet of g.
    struct GaugeConn final : Connection {
        GroupChart gc;
        explicit GaugeConn(GroupChart c) : gc(std::move(c)) {}
        int rank() const override { return gc.matrix_dim; }
        const ChartAtlas& atlas() const override { return gc.atlas; }
        std::string id() const override { return "mc-gauge-" + gc.name; }
        std::vector<MatrixJet> omega_jet(int /*chart*/, const VecD& x) const override {
            const int d = gc.atlas.dim();
            const int n = gc.matrix_dim;
            auto xs = seed_vars(x, d);
            std::vector<Jet2c> out(static_cast<size_t>(n) * n, Jet2c(cxd(0, 0)));
            gc.eval(xs.data(), out.data());
            MatC g(n, n);
            std::array<MatC, kMaxDim> dg;
            for (int k = 0; k < d; ++k) dg[k] = MatC(n, n);
            std::array<MatC, Jet2d::kMaxPairs> d2;
            for (int pidx = 0; pidx < d * (d + 1) / 2; ++pidx) d2[pidx] = MatC(n, n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    const Jet2c& e = out[static_cast<size_t>(r) * n + c];
                    g(r, c) = e.v;
                    for (int k = 0; k < d; ++k) dg[k](r, c) = e.d1(k);
                    for (int k = 0; k < d; ++k)
                        for (int l = k; l < d; ++l)
                            d2[Jet2d::pair_index(k, l)](r, c) = e.d2(k, l);
                }
            const MatC ginv = g.inverse();
            std::vector<MatrixJet> w(d);
            for (int i = 0; i < d; ++i) {
                w[i].value = ginv * dg[i];
                // d_k (g^{-1} d_i g) = -g^{-1} (d_k g) g^{-1} (d_i g) + g^{-1} d_k d_i g
                for (int k = 0; k < d; ++k)
                    w[i].d[k] = -ginv * dg[k] * ginv * dg[i] + ginv * d2[Jet2d::pair_index(k, i)];
            }
            return w;
        }
    };
    return std::make_shared<GaugeConn>(gc);
}

}  // namespace cw
