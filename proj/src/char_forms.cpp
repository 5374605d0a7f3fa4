#include "cw/char_forms.hpp"

#include <cmath>
#include <numeric>

namespace cw {

namespace {

cxd pfaffian_impl(std::vector<cxd>& a, int n) {
    // recursive cofactor expansion along the first row
    if (n == 0) return cxd(1.0, 0.0);
    if (n == 2) return a[1];
    cxd sum(0.0, 0.0);
    std::vector<cxd> minor((n - 2) * (n - 2));
    for (int j = 1; j < n; ++j) {
        const cxd aij = a[static_cast<size_t>(j)];  // A(0, j)
        if (aij == cxd(0.0, 0.0)) continue;
        int rr = 0;
        for (int r = 1; r < n; ++r) {
            if (r == j) continue;
            int cc = 0;
            for (int c = 1; c < n; ++c) {
                if (c == j) continue;
                minor[static_cast<size_t>(rr) * (n - 2) + cc] = a[static_cast<size_t>(r) * n + c];
                ++cc;
            }
            ++rr;
        }
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        std::vector<cxd> m = minor;
        sum += sign * aij * pfaffian_impl(m, n - 2);
    }
    return sum;
}

void require_skew(const MatC& a) {
    if (a.rows() != a.cols() || a.rows() % 2 != 0)
        throw ValidationError("pfaffian: defined only on even-rank matrices");
    if ((a + a.transpose()).cwiseAbs().maxCoeff() >= 1e-12)
        throw ValidationError("pfaffian: input is not skew-symmetric");
}

}  // namespace

cxd pfaffian(const MatC& a) {
    require_skew(a);
    const int n = static_cast<int>(a.rows());
    std::vector<cxd> buf(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) buf[static_cast<size_t>(i) * n + j] = a(i, j);
    return pfaffian_impl(buf, n);
}

double pfaffian(const MatD& a) { return pfaffian(to_complex(a)).real(); }

namespace {

// A-hat series coefficients in terms of raw curvature traces:
//   log det^{1/2}((R/2)/sinh(R/2)) = -tr(R^2)/48 + tr(R^4)/5760 + ...
cxd a_hat_scalar(const MatC& a, int max_degree) {
    cxd out(1.0, 0.0);
    if (max_degree >= 4) {
        const cxd t2 = (a * a).trace();
        out += -t2 / 48.0;
        if (max_degree >= 8) {
            const cxd t4 = (a * a * a * a).trace();
            out += t4 / 5760.0 + t2 * t2 / 4608.0;
        }
    }
    return out;
}

cxd chern_character_scalar(const MatC& a, int max_degree) {
    cxd out = cxd(static_cast<double>(a.rows()), 0.0);
    MatC p = MatC::Identity(a.rows(), a.cols());
    double fact = 1.0;
    for (int j = 1; 2 * j <= max_degree; ++j) {
        p = p * a;
        fact *= j;
        out += p.trace() / fact;
    }
    return out;
}

}  // namespace

cxd apply_invariant(const InvariantPolynomial& p, const MatC& a) {
    switch (p.kind) {
        case InvariantPolynomial::Kind::TracePower: {
            MatC m = MatC::Identity(a.rows(), a.cols());
            for (int i = 0; i < p.k; ++i) m = m * a;
            return p.normalization * m.trace();
        }
        case InvariantPolynomial::Kind::Pfaffian:
            return p.normalization * pfaffian(a);
        case InvariantPolynomial::Kind::AHatTruncated:
            return p.normalization * a_hat_scalar(a, p.max_degree);
        case InvariantPolynomial::Kind::ChernCharacterTruncated:
            return p.normalization * chern_character_scalar(a, p.max_degree);
    }
    throw ValidationError("apply_invariant: unknown kind");
}

namespace {

ScalarForm trace_power_form(const ConnPtr& conn, int k, cxd normalization) {
    MatrixForm F = curvature_form(conn);
    MatrixForm acc = F;
    for (int i = 1; i < k; ++i) acc = wedge(acc, F);
    ScalarForm out = trace_form(acc);
    return normalization == cxd(1.0, 0.0) ? out : form_scale(normalization, out);
}

// Euler form integrand: Pf of the curvature endomorphism expressed in an
// oriented orthonormal frame (columns of the Cholesky factor of g^{-1}).
ScalarForm pfaffian_form(const ConnPtr& conn, cxd normalization) {
    const MetricField* metric = conn->metric();
    if (metric == nullptr)
        throw ValidationError("char_form(pfaffian): connection carries no metric; orthonormal "
                              "frames are required");
    const int d = conn->rank();
    if (d % 2 != 0) throw ValidationError("char_form(pfaffian): odd bundle rank");
    const int m = d / 2;

    MatrixForm F = curvature_form(conn);
    ScalarForm out;
    out.degree = d;
    out.atlas = conn->atlas();
    out.proto = cxd(0, 0);
    ConnPtr c = conn;
    auto Feval = F.eval;

    // permutations of {0..d-1} with signs, fixed once
    auto perms = std::make_shared<std::vector<std::pair<std::vector<int>, double>>>();
    {
        std::vector<int> idx(d);
        std::iota(idx.begin(), idx.end(), 0);
        std::vector<int> p = idx;
        std::function<void(int)> rec = [&](int pos) {
            if (pos == d) {
                int inv = 0;
                for (int i = 0; i < d; ++i)
                    for (int j = i + 1; j < d; ++j)
                        if (p[i] > p[j]) ++inv;
                perms->push_back({p, inv % 2 == 0 ? 1.0 : -1.0});
                return;
            }
            for (int i = pos; i < d; ++i) {
                std::swap(p[pos], p[i]);
                rec(pos + 1);
                std::swap(p[pos], p[i]);
            }
        };
        rec(0);
    }

    out.eval = [c, Feval, d, m, perms, normalization](int chart, const VecD& x,
                                                      const std::vector<VecD>& vecs) -> cxd {
        const MetricField* g = c->metric();
        const MatD gx = g->eval(chart, x);
        // oriented orthonormal frame: g^{-1} = L L^T with det L > 0
        Eigen::LLT<Eigen::MatrixXd> llt{Eigen::MatrixXd(gx.inverse())};
        if (llt.info() != Eigen::Success)
            throw DegenerateMetricError("char_form(pfaffian): metric not positive definite");
        const Eigen::MatrixXd L = llt.matrixL();
        const Eigen::MatrixXd Linv = L.inverse();

        // S[a][b] = Linv F(v_a, v_b) L for every ordered slot pair
        std::vector<MatC> S(static_cast<size_t>(d) * d);
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                if (a == b) continue;
                std::vector<VecD> pair = {vecs[a], vecs[b]};
                MatC M = Linv * Feval(chart, x, pair) * L;
                if ((M + M.transpose()).cwiseAbs().maxCoeff() >
                    1e-8 * std::max(1.0, M.cwiseAbs().maxCoeff()))
                    throw ValidationError("char_form(pfaffian): curvature is not skew in the "
                                          "orthonormal frame");
                S[static_cast<size_t>(a) * d + b] = std::move(M);
            }

        // Pf(Omega)(v_1..v_d) =
        //   (1 / (4^m m!)) sum_{sigma,tau in S_d} sgn(sigma) sgn(tau)
        //     prod_i S[tau(2i) tau(2i+1)](sigma(2i), sigma(2i+1))
        cxd total(0.0, 0.0);
        for (const auto& [sigma, sgn_e] : *perms)
            for (const auto& [tau, sgn_s] : *perms) {
                cxd prod(1.0, 0.0);
                for (int i = 0; i < m && prod != cxd(0.0, 0.0); ++i)
                    prod *= S[static_cast<size_t>(tau[2 * i]) * d + tau[2 * i + 1]](
                        sigma[2 * i], sigma[2 * i + 1]);
                total += sgn_e * sgn_s * prod;
            }
        return normalization * total / (std::pow(4.0, m) * std::tgamma(m + 1.0));
    };
    return out;
}

}  // namespace

ScalarForm char_form(const ConnPtr& conn, const InvariantPolynomial& p) {
    switch (p.kind) {
        case InvariantPolynomial::Kind::TracePower:
            return trace_power_form(conn, p.k, p.normalization);
        case InvariantPolynomial::Kind::Pfaffian:
            return pfaffian_form(conn, p.normalization);
        default:
            throw ValidationError(
                "char_form: series kinds are graded; use char_form_series instead");
    }
}

std::vector<std::pair<int, ScalarForm>> char_form_series(const ConnPtr& conn,
                                                         const InvariantPolynomial& p) {
    const int dim = conn->atlas().dim();
    const int maxdeg = std::min(p.max_degree, dim);
    std::vector<std::pair<int, ScalarForm>> out;
    const int r = conn->rank();
    if (p.kind == InvariantPolynomial::Kind::ChernCharacterTruncated) {
        // rank + tr F + tr(F^F)/2! + ...
        ScalarForm deg0 = scalar_form(conn->atlas(), [r, p](int, const VecD&) {
            return p.normalization * cxd(static_cast<double>(r), 0.0);
        });
        out.push_back({0, std::move(deg0)});
        double fact = 1.0;
        for (int j = 1; 2 * j <= maxdeg; ++j) {
            fact *= j;
            out.push_back({2 * j, trace_power_form(conn, j, p.normalization / fact)});
        }
        return out;
    }
    if (p.kind == InvariantPolynomial::Kind::AHatTruncated) {
        ScalarForm deg0 = scalar_form(conn->atlas(), [p](int, const VecD&) {
            return p.normalization * cxd(1.0, 0.0);
        });
        out.push_back({0, std::move(deg0)});
        if (maxdeg >= 4)
            out.push_back({4, trace_power_form(conn, 2, -p.normalization / 48.0)});
        if (maxdeg >= 8) {
            ScalarForm t4 = trace_power_form(conn, 4, p.normalization / 5760.0);
            ScalarForm t2 = trace_power_form(conn, 2, cxd(1.0, 0.0));
            ScalarForm t22 = form_scale(p.normalization / 4608.0, wedge(t2, t2));
            out.push_back({8, form_add(t4, t22)});
        }
        return out;
    }
    throw ValidationError("char_form_series: only the series kinds are graded");
}

ScalarForm relative_cs_form(const ConnPtr& conn0, const ConnPtr& conn1, int k) {
    if (conn0->rank() != conn1->rank())
        throw ValidationError("relative_cs_form: rank mismatch");
    require_same_atlas(conn0->atlas(), conn1->atlas(), "relative_cs_form");
    if (k < 1) throw ValidationError("relative_cs_form: k must be >= 1");

    // eta = omega1 - omega0 as a matrix 1-form
    MatrixForm eta;
    {
        MatrixForm w1 = connection_one_form(conn1);
        MatrixForm w0 = connection_one_form(conn0);
        eta = form_add(w1, form_scale(cxd(-1.0, 0.0), w0));
    }
    const GaussRule& rule = gauss_legendre(16);
    ScalarForm acc = zero_form(conn0->atlas(), 2 * k - 1, cxd(0, 0));
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = 0.5 * (rule.nodes[i] + 1.0);
        const double w = 0.5 * rule.weights[i];
        ConnPtr blend = blend_connection(t, conn0, conn1);
        MatrixForm integrand = eta;
        if (k > 1) {
            MatrixForm Ft = curvature_form(blend);
            for (int j = 0; j < k - 1; ++j) integrand = wedge(integrand, Ft);
        }
        acc = form_add(acc, form_scale(cxd(w * k, 0.0), trace_form(integrand)));
    }
    return acc;
}

ScalarForm fiber_integration(const ScalarForm& total, const ChartAtlas& fiber,
                             const ChartAtlas& base, const QuadratureSpec& q) {
    q.validate();
    const int dz = fiber.dim(), db = base.dim();
    if (total.atlas.dim() != dz + db)
        throw ValidationError("fiber_integration: form atlas is not the product of the factors");
    if (total.degree < dz) return zero_form(base, 0, cxd(0, 0));
    if (q.scheme != QuadScheme::GaussLegendre)
        throw ValidationError("fiber_integration: Gauss-Legendre only");

    const int pb = total.degree - dz;
    ScalarForm out;
    out.degree = pb;
    out.atlas = base;
    out.proto = cxd(0, 0);
    auto te = total.eval;
    const Chart fc = fiber.charts[0];
    const int nodes = q.nodes_per_axis;
    out.eval = [te, fc, dz, db, pb, nodes](int /*chart*/, const VecD& b,
                                           const std::vector<VecD>& wvecs) -> cxd {
        const GaussRule& rule = gauss_legendre(nodes);
        // arguments: fiber frame first, then lifted base vectors
        std::vector<VecD> args(static_cast<size_t>(dz) + pb, VecD::Zero(dz + db));
        for (int i = 0; i < dz; ++i) args[i][i] = 1.0;
        for (int j = 0; j < pb; ++j)
            for (int i = 0; i < db; ++i) args[dz + j][dz + i] = wvecs[j][i];

        long total_nodes = 1;
        for (int i = 0; i < dz; ++i) total_nodes *= nodes;
        VecD zx(dz + db);
        for (int i = 0; i < db; ++i) zx[dz + i] = b[i];
        cxd sum(0.0, 0.0);
        for (long idx = 0; idx < total_nodes; ++idx) {
            long rem = idx;
            double w = 1.0;
            for (int i = 0; i < dz; ++i) {
                const int ni = static_cast<int>(rem % nodes);
                rem /= nodes;
                const double half = 0.5 * (fc.hi[i] - fc.lo[i]);
                zx[i] = fc.lo[i] + half * (rule.nodes[ni] + 1.0);
                w *= half * rule.weights[ni];
            }
            sum += w * te(0, zx, args);
        }
        return sum;
    };
    return out;
}

ScalarForm bismut_vertical_char_form(const ConnPtr& connE, const ChartAtlas& fiber,
                                     const ChartAtlas& base, int k, const QuadratureSpec& q) {
    if (2 * k < fiber.dim()) return zero_form(base, 0, cxd(0, 0));
    ScalarForm trF = char_form(connE, InvariantPolynomial::trace_power(k));
    return fiber_integration(trF, fiber, base, q);
}

}  // namespace cw
