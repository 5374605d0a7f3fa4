#include "cw/wcs.hpp"

#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

#include "cw/idquery.hpp"

namespace cw {

namespace {

// Coordinate translation m -> m + f(theta) * direction with wrapping.
class TranslationAction final : public CircleAction {
public:
    TranslationAction(std::string id, MetricPtr metric, VecD direction)
        : id_(std::move(id)), metric_(std::move(metric)), dir_(std::move(direction)) {}

    std::string id() const override { return id_; }
    MetricPtr base_metric() const override { return metric_; }

    VecD act(double theta, const VecD& m) const override {
        VecD p = m + theta * dir_;
        metric_->atlas().charts[0].normalize(p);
        return p;
    }
    MatD differential(double, const VecD&) const override {
        const int d = metric_->dim();
        return MatD::Identity(d, d);
    }
    VecD velocity(double, const VecD&) const override { return dir_; }

private:
    std::string id_;
    MetricPtr metric_;
    VecD dir_;
};

class OffsetAction final : public CircleAction {
public:
    OffsetAction(ActionPtr base, double theta0) : base_(std::move(base)), theta0_(theta0) {}
    std::string id() const override { return base_->id() + "+offset"; }
    MetricPtr base_metric() const override { return base_->base_metric(); }
    VecD act(double theta, const VecD& m) const override { return base_->act(theta + theta0_, m); }
    MatD differential(double theta, const VecD& m) const override {
        return base_->differential(theta + theta0_, m);
    }
    VecD velocity(double theta, const VecD& m) const override {
        return base_->velocity(theta + theta0_, m);
    }

private:
    ActionPtr base_;
    double theta0_;
};

}  // namespace

ActionPtr action_by_id(const std::string& id, MetricPtr metric) {
    const IdQuery q = parse_id(id);
    const int d = metric->dim();
    if (q.name == "trivial")
        return std::make_shared<TranslationAction>("trivial", metric, VecD::Zero(d));
    if (q.name == "hopf") {
        if (parse_id(metric->id()).name != "round-s3")
            throw ValidationError("action 'hopf' requires metric round-s3");
        VecD dir = VecD::Zero(3);
        dir[1] = 1.0;
        dir[2] = 1.0;
        return std::make_shared<TranslationAction>("hopf", metric, dir);
    }
    if (q.name == "psi-rotation") {
        if (parse_id(metric->id()).name != "squashed-t11")
            throw ValidationError("action 'psi-rotation' requires metric squashed-t11");
        VecD dir = VecD::Zero(5);
        dir[4] = 2.0;  // the 4pi fiber wraps once per theta period 2pi
        return std::make_shared<TranslationAction>("psi-rotation", metric, dir);
    }
    throw ValidationError("unknown action id '" + id + "'; known: trivial, hopf, psi-rotation");
}

ActionPtr offset_action(ActionPtr base, double theta0) {
    return std::make_shared<OffsetAction>(std::move(base), theta0);
}

namespace {

struct PermTable {
    std::vector<std::vector<int>> perms;
    std::vector<double> signs;
};

const PermTable& perm_table(int n) {
    static std::array<PermTable, 8> tables;
    static std::once_flag flags[8];
    std::call_once(flags[n], [n] {
        PermTable& t = tables[n];
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == n) {
                int inv = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (p[i] > p[j]) ++inv;
                t.perms.push_back(p);
                t.signs.push_back(inv % 2 == 0 ? 1.0 : -1.0);
                return;
            }
            for (int i = pos; i < n; ++i) {
                std::swap(p[pos], p[i]);
                rec(pos + 1);
                std::swap(p[pos], p[i]);
            }
        };
        rec(0);
    });
    return tables[n];
}

}  // namespace

double wcs_form_at_loop(CurvatureProvider& curvature, const LoopSamples& loop, int k) {
    const int nf = 2 * k - 1;
    const size_t nt = loop.point.size();
    if (nt == 0 || loop.velocity.size() != nt || loop.frame.size() != nt)
        throw ValidationError("wcs_form_at_loop: inconsistent loop sampling");
    for (const auto& f : loop.frame)
        if (static_cast<int>(f.size()) != nf)
            throw ValidationError("wcs_form_at_loop: frame must have 2k-1 vector fields");

    const PermTable& pt = perm_table(nf);
    double theta_sum = 0.0;
    for (size_t it = 0; it < nt; ++it) {
        const CurvatureSample& R = curvature.at(loop.chart, loop.point[it]);
        const int d = R.d;
        if (nf > d) return 0.0;  // degree above dim: vanishes identically
        const auto& X = loop.frame[it];
        const VecD& gdot = loop.velocity[it];

        // E_a = -Omega(X_a, gdot) - 2 (w -> Omega(w, gdot) X_a)
        std::vector<MatD> E(nf);
        for (int a = 0; a < nf; ++a)
            E[a] = -R.endo(X[a], gdot) - 2.0 * R.endo_right(X[a], gdot);
        // P[a*nf+b] = Omega(X_a, X_b)
        std::vector<MatD> P(static_cast<size_t>(nf) * nf);
        for (int a = 0; a < nf; ++a)
            for (int b = a + 1; b < nf; ++b) {
                P[static_cast<size_t>(a) * nf + b] = R.endo(X[a], X[b]);
                P[static_cast<size_t>(b) * nf + a] = -P[static_cast<size_t>(a) * nf + b];
            }
        // Q[(ab)][(cd)] = P[ab] * P[cd] for k = 3; chain products otherwise
        double sample = 0.0;
        if (k == 1) {
            sample = E[0].trace();
        } else if (k == 2) {
            for (size_t ip = 0; ip < pt.perms.size(); ++ip) {
                const auto& s = pt.perms[ip];
                sample += pt.signs[ip] * (E[s[0]] * P[static_cast<size_t>(s[1]) * nf + s[2]]).trace();
            }
        } else if (k == 3) {
            std::vector<MatD> Q(static_cast<size_t>(nf) * nf * nf * nf);
            for (int a = 0; a < nf; ++a)
                for (int b = 0; b < nf; ++b) {
                    if (a == b) continue;
                    for (int c = 0; c < nf; ++c)
                        for (int e = 0; e < nf; ++e) {
                            if (c == e || c == a || c == b || e == a || e == b) continue;
                            Q[((static_cast<size_t>(a) * nf + b) * nf + c) * nf + e] =
                                P[static_cast<size_t>(a) * nf + b] * P[static_cast<size_t>(c) * nf + e];
                        }
                }
            for (size_t ip = 0; ip < pt.perms.size(); ++ip) {
                const auto& s = pt.perms[ip];
                const MatD& q = Q[((static_cast<size_t>(s[1]) * nf + s[2]) * nf + s[3]) * nf + s[4]];
                // tr(E * q) without forming the product
                const MatD& e = E[s[0]];
                double tr = 0.0;
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) tr += e(i, j) * q(j, i);
                sample += pt.signs[ip] * tr;
            }
        } else {
            for (size_t ip = 0; ip < pt.perms.size(); ++ip) {
                const auto& s = pt.perms[ip];
                MatD prod = E[s[0]];
                for (int i = 0; i < k - 1; ++i)
                    prod = prod * P[static_cast<size_t>(s[2 * i + 1]) * nf + s[2 * i + 2]];
                sample += pt.signs[ip] * prod.trace();
            }
        }
        theta_sum += sample;
    }
    double factorial = 1.0;
    for (int i = 2; i <= nf; ++i) factorial *= i;
    return (2.0 / factorial) * (kTwoPi / static_cast<double>(nt)) * theta_sum;
}

namespace {

double node_value(CurvatureProvider& curv, const CircleAction& action, const VecD& m, int k,
                  int theta_nodes) {
    const int d = m.size();
    const int nf = 2 * k - 1;
    LoopSamples loop;
    loop.chart = 0;
    loop.point.resize(theta_nodes);
    loop.velocity.resize(theta_nodes);
    loop.frame.resize(theta_nodes);
    for (int it = 0; it < theta_nodes; ++it) {
        const double theta = kTwoPi * it / theta_nodes;
        loop.point[it] = action.act(theta, m);
        loop.velocity[it] = action.velocity(theta, m);
        const MatD D = action.differential(theta, m);
        loop.frame[it].resize(nf);
        for (int a = 0; a < nf; ++a) loop.frame[it][a] = D.col(a % d);
    }
    return wcs_form_at_loop(curv, loop, k);
}

double wcs_level(const MetricPtr& metric, const ActionPtr& action, int k, const QuadratureSpec& q,
                 int workers, int theta_nodes, double* std_error, long* nodes_out) {
    const Chart& c = metric->atlas().charts[0];
    const int d = metric->dim();

    long total = 1;
    std::vector<double> values;
    if (q.scheme == QuadScheme::GaussLegendre) {
        for (int i = 0; i < d; ++i) total *= q.nodes_per_axis;
    } else {
        total = q.mc_samples;
    }
    values.resize(total);

    auto run_range = [&](long lo, long hi) {
        CachedCurvature curv(metric);
        const GaussRule* rule =
            q.scheme == QuadScheme::GaussLegendre ? &gauss_legendre(q.nodes_per_axis) : nullptr;
        VecD m(d);
        for (long idx = lo; idx < hi; ++idx) {
            double w = 1.0;
            if (rule) {
                long rem = idx;
                for (int i = 0; i < d; ++i) {
                    const int ni = static_cast<int>(rem % q.nodes_per_axis);
                    rem /= q.nodes_per_axis;
                    const double half = 0.5 * c.range(i);
                    m[i] = c.lo[i] + half * (rule->nodes[ni] + 1.0);
                    w *= half * rule->weights[ni];
                }
            } else {
                for (int i = 0; i < d; ++i)
                    m[i] = c.lo[i] + c.range(i) * counter_uniform(q.seed, static_cast<uint64_t>(idx),
                                                                  static_cast<uint64_t>(i));
            }
            values[idx] = w * node_value(curv, *action, m, k, theta_nodes);
        }
    };

    workers = std::max(1, workers);
    if (workers == 1) {
        run_range(0, total);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long lo = w * chunk, hi = std::min(total, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back([&, lo, hi] { run_range(lo, hi); });
        }
        for (auto& t : pool) t.join();
    }

    *nodes_out = total;
    if (q.scheme == QuadScheme::GaussLegendre) {
        *std_error = 0.0;
        return tree_sum(values);
    }
    double volume = 1.0;
    for (int i = 0; i < d; ++i) volume *= c.range(i);
    const double mean = tree_sum(values) / static_cast<double>(total);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    *std_error = volume * std::sqrt(ss / (total - 1.0)) / std::sqrt(static_cast<double>(total));
    return volume * mean;
}

}  // namespace

WcsResult wcs_integral(const MetricPtr& metric, const ActionPtr& action, int k,
                       const QuadratureSpec& q, int workers, int theta_nodes,
                       int convergence_levels) {
    q.validate();
    if (k < 1) throw ValidationError("wcs_integral: k must be >= 1");
    const int d = metric->dim();
    if (d != 2 * k - 1)
        throw ValidationError("wcs_integral: dim M = " + std::to_string(d) +
                              " but 2k-1 = " + std::to_string(2 * k - 1));
    if (theta_nodes < 4) throw ValidationError("wcs_integral: need at least 4 theta nodes");
    if (metric->atlas().charts.size() != 1)
        throw ValidationError("wcs_integral: single-chart catalog atlases only");

    WcsResult out;
    out.theta_nodes = theta_nodes;
    std::vector<QuadratureSpec> levels;
    for (int l = std::max(1, convergence_levels); l >= 1; --l) {
        QuadratureSpec ql = q;
        if (q.scheme == QuadScheme::GaussLegendre) {
            ql.nodes_per_axis = std::max(2, q.nodes_per_axis >> (l - 1));
            if (l > 1 && ql.nodes_per_axis == q.nodes_per_axis) continue;
        } else {
            ql.mc_samples = std::max(1000L, q.mc_samples >> (2 * (l - 1)));
            if (l > 1 && ql.mc_samples == q.mc_samples) continue;
        }
        levels.push_back(ql);
    }
    for (const QuadratureSpec& ql : levels) {
        double se = 0.0;
        long nodes = 0;
        const double v = wcs_level(metric, action, k, ql, workers, theta_nodes, &se, &nodes);
        const long level_key =
            ql.scheme == QuadScheme::GaussLegendre ? ql.nodes_per_axis : ql.mc_samples;
        out.convergence.push_back({level_key, v});
        out.value = v;
        out.std_error = se;
        out.nodes = nodes;
    }
    return out;
}

}  // namespace cw
