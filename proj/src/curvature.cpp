#include "cw/curvature.hpp"

#include <cmath>
#include <sstream>

namespace cw {

namespace {

std::string point_str(const VecD& x) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    return os.str();
}

void check_domain(const MetricField& metric, int chart, const VecD& x) {
    const auto& charts = metric.atlas().charts;
    if (chart < 0 || chart >= static_cast<int>(charts.size()))
        throw ValidationError("metric '" + metric.id() + "': chart index out of range");
    const Chart& c = charts[chart];
    if (x.size() != c.dim)
        throw ValidationError("metric '" + metric.id() + "': point dimension mismatch");
    if (!c.strictly_inside(x))
        throw ChartDomainError("metric '" + metric.id() + "', chart '" + c.name +
                               "': point " + point_str(x) + " outside chart interior");
}

MatD invert_metric(const MetricField& metric, int chart, const VecD& x, const MatD& g) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu{Eigen::MatrixXd(g)};
    if (!lu.isInvertible())
        throw DegenerateMetricError("metric '" + metric.id() + "', chart '" +
                                    metric.atlas().charts[chart].name + "': singular metric at " +
                                    point_str(x));
    return MatD(lu.inverse());
}

}  // namespace

Christoffel christoffel(const MetricField& metric, int chart, const VecD& x) {
    check_domain(metric, chart, x);
    const MetricJet J = metric.eval_jet2(chart, x);
    const int d = J.d;
    const MatD ginv = invert_metric(metric, chart, x, J.g);

    Christoffel G;
    G.d = d;
    for (int k = 0; k < d; ++k) G.gamma[k] = MatD::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                double s = 0.0;
                for (int l = 0; l < d; ++l)
                    s += ginv(k, l) * (J.dg[i](j, l) + J.dg[j](i, l) - J.dg[l](i, j));
                G.gamma[k](i, j) = 0.5 * s;
                G.gamma[k](j, i) = 0.5 * s;
            }
    return G;
}

ChristoffelJet christoffel_jet(const MetricField& metric, int chart, const VecD& x) {
    check_domain(metric, chart, x);
    const MetricJet J = metric.eval_jet2(chart, x);
    const int d = J.d;
    const MatD ginv = invert_metric(metric, chart, x, J.g);

    ChristoffelJet G;
    G.d = d;
    std::array<MatD, kMaxDim> dginv;
    for (int m = 0; m < d; ++m) dginv[m] = -ginv * J.dg[m] * ginv;
    for (int k = 0; k < d; ++k) G.gamma[k] = MatD::Zero(d, d);
    for (int m = 0; m < d; ++m)
        for (int k = 0; k < d; ++k) G.dgamma[m][k] = MatD::Zero(d, d);

    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double s = 0.0;
                for (int l = 0; l < d; ++l)
                    s += ginv(k, l) * (J.dg[i](j, l) + J.dg[j](i, l) - J.dg[l](i, j));
                G.gamma[k](i, j) = 0.5 * s;
                for (int m = 0; m < d; ++m) {
                    double t = 0.0;
                    for (int l = 0; l < d; ++l) {
                        t += dginv[m](k, l) * (J.dg[i](j, l) + J.dg[j](i, l) - J.dg[l](i, j));
                        t += ginv(k, l) * (J.hess(m, i)(j, l) + J.hess(m, j)(i, l) - J.hess(m, l)(i, j));
                    }
                    G.dgamma[m][k](i, j) = 0.5 * t;
                }
            }
    return G;
}

CurvatureSample riemann_curvature(const MetricField& metric, int chart, const VecD& x) {
    const ChristoffelJet G = christoffel_jet(metric, chart, x);
    const MetricJet J = metric.eval_jet2(chart, x);
    const int d = G.d;

    CurvatureSample S;
    S.d = d;
    S.x = x;
    S.g = J.g;
    S.g_inv = invert_metric(metric, chart, x, J.g);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double r = G.dgamma[k][i](l, j) - G.dgamma[l][i](k, j);
                    for (int m = 0; m < d; ++m)
                        r += G.gamma[i](k, m) * G.gamma[m](l, j) - G.gamma[i](l, m) * G.gamma[m](k, j);
                    S.riem(i, j, k, l) = r;
                }
    return S;
}

MatD CurvatureSample::endo(const VecD& u, const VecD& v) const {
    MatD E = MatD::Zero(d, d);
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) {
            const double uv = u[k] * v[l];
            if (uv == 0.0) continue;
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) E(i, j) += riem(i, j, k, l) * uv;
        }
    return E;
}

MatD CurvatureSample::endo_right(const VecD& a, const VecD& v) const {
    // (E w)^i = R^i_{jkl} a^j w^k v^l
    MatD E = MatD::Zero(d, d);
    for (int j = 0; j < d; ++j)
        for (int l = 0; l < d; ++l) {
            const double av = a[j] * v[l];
            if (av == 0.0) continue;
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) E(i, k) += riem(i, j, k, l) * av;
        }
    return E;
}

double CurvatureSample::bianchi_residual() const {
    double worst = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l)
                    worst = std::max(worst, std::abs(riem(i, j, k, l) + riem(i, k, l, j) + riem(i, l, j, k)));
    return worst;
}

double CurvatureSample::metric_skewness_residual() const {
    double worst = 0.0;
    VecD ek = VecD::Zero(d), el = VecD::Zero(d);
    for (int k = 0; k < d; ++k)
        for (int l = k + 1; l < d; ++l) {
            ek.setZero();
            el.setZero();
            ek[k] = 1.0;
            el[l] = 1.0;
            const MatD E = endo(ek, el);
            const MatD M = g * E;  // M_wz = g(E w, z) after transpose bookkeeping
            worst = std::max(worst, (M + M.transpose()).cwiseAbs().maxCoeff());
        }
    return worst;
}

double sectional_curvature(const CurvatureSample& s, const VecD& u, const VecD& v) {
    const MatD E = s.endo(u, v);
    const VecD Ruv_v = E * v;
    double num = 0.0;
    for (int i = 0; i < s.d; ++i)
        for (int j = 0; j < s.d; ++j) num += s.g(i, j) * Ruv_v[i] * u[j];
    const double uu = (u.transpose() * s.g * u)(0, 0);
    const double vv = (v.transpose() * s.g * v)(0, 0);
    const double uv = (u.transpose() * s.g * v)(0, 0);
    const double denom = uu * vv - uv * uv;
    if (std::abs(denom) < 1e-14) throw ValidationError("sectional_curvature: degenerate 2-plane");
    return num / denom;
}

const CurvatureSample& DirectCurvature::at(int chart, const VecD& x) {
    scratch_ = riemann_curvature(*metric_, chart, x);
    return scratch_;
}

CachedCurvature::CachedCurvature(MetricPtr metric)
    : metric_(std::move(metric)), mask_(metric_->killing_mask()) {}

const CurvatureSample& CachedCurvature::at(int chart, const VecD& x) {
    std::vector<double> key;
    key.reserve(mask_.size());
    for (size_t i = 0; i < mask_.size(); ++i)
        if (!mask_[i]) key.push_back(x[static_cast<int>(i)]);
    auto k = std::make_pair(chart, std::move(key));
    auto it = cache_.find(k);
    if (it == cache_.end()) {
        auto sample = std::make_unique<CurvatureSample>(riemann_curvature(*metric_, chart, x));
        it = cache_.emplace(std::move(k), std::move(sample)).first;
    }
    return *it->second;
}

}  // namespace cw
