#include <cmath>
#include <sstream>

#include "cw/idquery.hpp"
#include "cw/metric.hpp"

// Built-in metric catalog. Chart coordinate order fixes the orientation used
// by every integral; the chart name records the order.
//
//   euclidean-dN      unit cube (0,1)^N, identity metric
//   round-s1          theta in (0,2pi)
//   round-s2          (theta, phi), g = dtheta^2 + sin^2(theta) dphi^2
//   round-s3          Hopf coordinates (eta, xi1, xi2)
//   round-s5          nested Hopf coordinates (eta1, eta2, xi1, xi2, xi3)
//   su2-biinvariant   ZYZ Euler angles (phi, theta, psi), psi period 4pi;
//                     (1/4)[dtheta^2 + sin^2 dphi^2 + (dpsi + cos dphi)^2],
//                     isometric to the unit round S^3
//   squashed-t11?t=   circle bundle over S^2 x S^2 on S^2 x S^3, fiber scale t,
//                     chart (theta1, phi1, theta2, phi2, psi), psi period 4pi

namespace cw {

namespace {

ChartAtlas single_chart_atlas(std::string name, Chart c) {
    ChartAtlas a;
    a.name = std::move(name);
    a.charts.push_back(std::move(c));
    return a;
}

MetricPtr make_euclidean(int d) {
    std::vector<double> lo(d, 0.0), hi(d, 1.0);
    auto atlas = single_chart_atlas("euclidean-d" + std::to_string(d),
                                    make_chart("cube(x1..x" + std::to_string(d) + ")", lo, hi));
    auto f = [d]<class S>(int, const S*, S* g) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g[i * d + j] = (i == j) ? S(1) : S(0);
    };
    return make_metric("euclidean-d" + std::to_string(d), std::move(atlas), f,
                       std::vector<bool>(d, true));
}

MetricPtr make_round_s1() {
    auto atlas = single_chart_atlas("round-s1", make_chart("circle(theta)", {0.0}, {kTwoPi}, {1}));
    auto f = []<class S>(int, const S*, S* g) { g[0] = S(1); };
    return make_metric("round-s1", std::move(atlas), f, {true});
}

MetricPtr make_round_s2() {
    auto atlas =
        single_chart_atlas("round-s2", make_chart("sphere(theta,phi)", {0.0, 0.0}, {kPi, kTwoPi}, {0, 1}));
    auto f = []<class S>(int, const S* x, S* g) {
        const S s = sin(x[0]);
        g[0] = S(1);
        g[1] = S(0);
        g[2] = S(0);
        g[3] = s * s;
    };
    return make_metric("round-s2", std::move(atlas), f, {false, true});
}

MetricPtr make_round_s3() {
    auto atlas = single_chart_atlas(
        "round-s3", make_chart("hopf(eta,xi1,xi2)", {0.0, 0.0, 0.0}, {kPi / 2.0, kTwoPi, kTwoPi}, {0, 1, 1}));
    auto f = []<class S>(int, const S* x, S* g) {
        const S c = cos(x[0]), s = sin(x[0]);
        for (int i = 0; i < 9; ++i) g[i] = S(0);
        g[0] = S(1);
        g[4] = c * c;
        g[8] = s * s;
    };
    return make_metric("round-s3", std::move(atlas), f, {false, true, true});
}

MetricPtr make_round_s5() {
    auto atlas = single_chart_atlas(
        "round-s5", make_chart("hopf(eta1,eta2,xi1,xi2,xi3)", {0.0, 0.0, 0.0, 0.0, 0.0},
                               {kPi / 2.0, kPi / 2.0, kTwoPi, kTwoPi, kTwoPi}, {0, 0, 1, 1, 1}));
    auto f = []<class S>(int, const S* x, S* g) {
        const S s1 = sin(x[0]), c1 = cos(x[0]), s2 = sin(x[1]), c2 = cos(x[1]);
        for (int i = 0; i < 25; ++i) g[i] = S(0);
        g[0 * 5 + 0] = S(1);
        g[1 * 5 + 1] = s1 * s1;
        g[2 * 5 + 2] = c1 * c1;
        g[3 * 5 + 3] = s1 * s1 * c2 * c2;
        g[4 * 5 + 4] = s1 * s1 * s2 * s2;
    };
    return make_metric("round-s5", std::move(atlas), f, {false, false, true, true, true});
}

MetricPtr make_su2_biinvariant() {
    auto atlas = single_chart_atlas(
        "su2-biinvariant",
        make_chart("euler(phi,theta,psi)", {0.0, 0.0, 0.0}, {kTwoPi, kPi, 2.0 * kTwoPi}, {1, 0, 1}));
    auto f = []<class S>(int, const S* x, S* g) {
        const S c = cos(x[1]);
        for (int i = 0; i < 9; ++i) g[i] = S(0);
        g[0 * 3 + 0] = S(0.25);            // phi-phi: sin^2 + cos^2
        g[1 * 3 + 1] = S(0.25);            // theta-theta
        g[2 * 3 + 2] = S(0.25);            // psi-psi
        g[0 * 3 + 2] = S(0.25) * c;        // phi-psi
        g[2 * 3 + 0] = S(0.25) * c;
    };
    return make_metric("su2-biinvariant", std::move(atlas), f, {true, false, true});
}

MetricPtr make_squashed_t11(double t) {
    if (!(t > 0.0 && t <= 1.0))
        throw ValidationError("squashed-t11: parameter t must lie in (0, 1]");
    std::ostringstream id;
    id << "squashed-t11?t=" << t;
    auto atlas = single_chart_atlas(
        id.str(), make_chart("t11(theta1,phi1,theta2,phi2,psi)", {0.0, 0.0, 0.0, 0.0, 0.0},
                             {kPi, kTwoPi, kPi, kTwoPi, 2.0 * kTwoPi}, {0, 1, 0, 1, 1}));
    auto f = [t]<class S>(int, const S* x, S* g) {
        const S s1 = sin(x[0]), c1 = cos(x[0]);
        const S s2 = sin(x[2]), c2 = cos(x[2]);
        const double a = 1.0 / 6.0, b = t / 9.0;
        for (int i = 0; i < 25; ++i) g[i] = S(0);
        g[0 * 5 + 0] = S(a);
        g[2 * 5 + 2] = S(a);
        g[1 * 5 + 1] = S(a) * s1 * s1 + S(b) * c1 * c1;
        g[3 * 5 + 3] = S(a) * s2 * s2 + S(b) * c2 * c2;
        g[4 * 5 + 4] = S(b);
        g[1 * 5 + 4] = S(b) * c1;
        g[4 * 5 + 1] = S(b) * c1;
        g[3 * 5 + 4] = S(b) * c2;
        g[4 * 5 + 3] = S(b) * c2;
        g[1 * 5 + 3] = S(b) * c1 * c2;
        g[3 * 5 + 1] = S(b) * c1 * c2;
    };
    return make_metric(id.str(), std::move(atlas), f, {false, true, false, true, true});
}

class ScaledMetric final : public MetricField {
public:
    ScaledMetric(MetricPtr base, double c) : base_(std::move(base)), c_(c) {
        if (!(c > 0.0)) throw ValidationError("scaled metric: factor must be > 0");
    }
    const ChartAtlas& atlas() const override { return base_->atlas(); }
    std::string id() const override {
        std::ostringstream os;
        os << "scaled?base=" << base_->id() << "&c=" << c_;
        return os.str();
    }
    MatD eval(int chart, const VecD& x) const override { return c_ * base_->eval(chart, x); }
    MetricJet eval_jet2(int chart, const VecD& x) const override {
        MetricJet j = base_->eval_jet2(chart, x);
        j.g *= c_;
        for (int k = 0; k < j.d; ++k) j.dg[k] *= c_;
        for (int p = 0; p < j.d * (j.d + 1) / 2; ++p) j.d2g[p] *= c_;
        return j;
    }
    std::vector<bool> killing_mask() const override { return base_->killing_mask(); }

private:
    MetricPtr base_;
    double c_;
};

}  // namespace

MetricPtr scaled_metric(MetricPtr base, double c) {
    return std::make_shared<ScaledMetric>(std::move(base), c);
}

MetricPtr metric_by_id(const std::string& id) {
    const IdQuery q = parse_id(id);
    if (q.name == "euclidean-d1") return make_euclidean(1);
    if (q.name == "euclidean-d2") return make_euclidean(2);
    if (q.name == "euclidean-d3") return make_euclidean(3);
    if (q.name == "euclidean-d4") return make_euclidean(4);
    if (q.name == "euclidean-d5") return make_euclidean(5);
    if (q.name == "round-s1") return make_round_s1();
    if (q.name == "round-s2") return make_round_s2();
    if (q.name == "round-s3") return make_round_s3();
    if (q.name == "round-s5") return make_round_s5();
    if (q.name == "su2-biinvariant") return make_su2_biinvariant();
    if (q.name == "squashed-t11") return make_squashed_t11(q.get_real("t", 1.0));
    if (q.name == "scaled")
        return scaled_metric(metric_by_id(q.get("base", "round-s2")), q.get_real("c", 1.0));
    throw ValidationError("unknown metric id '" + id + "'; known: " + [] {
        std::string s;
        for (const auto& m : metric_catalog_ids()) s += m + " ";
        return s;
    }());
}

std::vector<std::string> metric_catalog_ids() {
    return {"euclidean-d1", "euclidean-d2", "euclidean-d3", "euclidean-d4", "euclidean-d5",
            "round-s1",     "round-s2",     "round-s3",     "round-s5",     "su2-biinvariant",
            "squashed-t11?t=<0..1]", "scaled?base=<id>&c=<real>"};
}

}  // namespace cw
