#include "cw/symbol_forms.hpp"

#include <functional>
#include <memory>
#include <numeric>

namespace cw {

namespace {

// scalar-form (x) constant-symbol term of any degree
struct TensorTerm {
    ScalarForm form;
    SymbolExpansion symbol;
};

cxd apply_trace(SymbolTraceKind kind, const SymbolExpansion& s) {
    return kind == SymbolTraceKind::Wodzicki ? wodzicki_residue(s).value : leading_order_trace(s);
}

// f_a dx^i as a scalar 1-form
ScalarForm coeff_one_form(const ChartAtlas& atlas,
                          std::function<Jet2c(int, const Jet2c*)> f, int i) {
    ScalarForm r;
    r.degree = 1;
    r.atlas = atlas;
    r.proto = cxd(0, 0);
    r.eval = [f, i](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        std::array<Jet2c, kMaxDim> xs;
        for (int j = 0; j < x.size(); ++j) xs[j] = Jet2c(cxd(x[j], 0.0));
        return f(chart, xs.data()).v * vecs[0][i];
    };
    return r;
}

// d(f_a dx^i) = sum_j d_j f dx^j ^ dx^i, exact via jets
ScalarForm coeff_d_two_form(const ChartAtlas& atlas,
                            std::function<Jet2c(int, const Jet2c*)> f, int i) {
    ScalarForm r;
    r.degree = 2;
    r.atlas = atlas;
    r.proto = cxd(0, 0);
    const int dim = atlas.dim();
    r.eval = [f, i, dim](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        std::array<Jet2c, kMaxDim> xs;
        for (int j = 0; j < dim; ++j) xs[j] = Jet2c::variable(j, cxd(x[j], 0.0));
        const Jet2c fx = f(chart, xs.data());
        cxd out(0.0, 0.0);
        const VecD& u = vecs[0];
        const VecD& v = vecs[1];
        for (int j = 0; j < dim; ++j) out += fx.d1(j) * (u[j] * v[i] - v[j] * u[i]);
        return out;
    };
    return r;
}

std::vector<TensorTerm> omega_terms(const SymbolConnection& c) {
    std::vector<TensorTerm> ts;
    for (const auto& t : c.terms)
        ts.push_back({coeff_one_form(c.atlas, t.coeff, t.dx_index), t.symbol});
    return ts;
}

std::vector<TensorTerm> curvature_terms(const SymbolConnection& c) {
    std::vector<TensorTerm> ts;
    for (const auto& t : c.terms)
        ts.push_back({coeff_d_two_form(c.atlas, t.coeff, t.dx_index), t.symbol});
    for (const auto& a : c.terms)
        for (const auto& b : c.terms) {
            ScalarForm fa = coeff_one_form(c.atlas, a.coeff, a.dx_index);
            ScalarForm fb = coeff_one_form(c.atlas, b.coeff, b.dx_index);
            ts.push_back({wedge(fa, fb), compose(a.symbol, b.symbol)});
        }
    return ts;
}

std::vector<TensorTerm> tensor_wedge(const std::vector<TensorTerm>& a,
                                     const std::vector<TensorTerm>& b) {
    std::vector<TensorTerm> out;
    for (const auto& ta : a)
        for (const auto& tb : b)
            out.push_back({wedge(ta.form, tb.form), compose(ta.symbol, tb.symbol)});
    return out;
}

ScalarForm traced(const ChartAtlas& atlas, int degree, const std::vector<TensorTerm>& terms,
                  SymbolTraceKind kind, cxd scale = cxd(1.0, 0.0)) {
    ScalarForm acc = zero_form(atlas, degree, cxd(0, 0));
    for (const auto& t : terms) {
        const cxd tr = scale * apply_trace(kind, t.symbol);
        if (tr == cxd(0.0, 0.0)) continue;
        acc = form_add(acc, form_scale(tr, t.form));
    }
    return acc;
}

std::vector<TensorTerm> scaled(std::vector<TensorTerm> ts, double c) {
    for (auto& t : ts) t.symbol = symbol_scale(cxd(c, 0.0), t.symbol);
    return ts;
}

void require_compatible(const SymbolConnection& a, const SymbolConnection& b) {
    if (a.rank != b.rank || a.cutoff != b.cutoff)
        throw ValidationError("symbol connections: rank or cutoff mismatch");
    require_same_atlas(a.atlas, b.atlas, "symbol connections");
}

}  // namespace

ScalarForm symbol_char_form(const SymbolConnection& conn, int k, SymbolTraceKind kind) {
    if (k < 1) throw ValidationError("symbol_char_form: k must be >= 1");
    auto F = curvature_terms(conn);
    auto acc = F;
    for (int i = 1; i < k; ++i) acc = tensor_wedge(acc, F);
    return traced(conn.atlas, 2 * k, acc, kind);
}

ScalarForm relative_cs_form_symbol(const SymbolConnection& conn0, const SymbolConnection& conn1,
                                   int k, SymbolTraceKind kind) {
    require_compatible(conn0, conn1);
    if (k < 1) throw ValidationError("relative_cs_form_symbol: k must be >= 1");

    // eta = omega1 - omega0
    std::vector<TensorTerm> eta = omega_terms(conn1);
    for (auto t : scaled(omega_terms(conn0), -1.0)) eta.push_back(std::move(t));

    const GaussRule& rule = gauss_legendre(16);
    ScalarForm acc = zero_form(conn0.atlas, 2 * k - 1, cxd(0, 0));
    for (size_t i = 0; i < rule.nodes.size(); ++i) {
        const double t = 0.5 * (rule.nodes[i] + 1.0);
        const double w = 0.5 * rule.weights[i];
        SymbolConnection blend = conn0;
        blend.terms.clear();
        for (const auto& term : conn0.terms) {
            SymbolConnectionTerm bt = term;
            bt.symbol = symbol_scale(cxd(t, 0.0), term.symbol);
            blend.terms.push_back(std::move(bt));
        }
        for (const auto& term : conn1.terms) {
            SymbolConnectionTerm bt = term;
            bt.symbol = symbol_scale(cxd(1.0 - t, 0.0), term.symbol);
            blend.terms.push_back(std::move(bt));
        }
        std::vector<TensorTerm> integrand = eta;
        if (k > 1) {
            auto Ft = curvature_terms(blend);
            for (int j = 0; j < k - 1; ++j) integrand = tensor_wedge(integrand, Ft);
        }
        acc = form_add(acc, traced(conn0.atlas, 2 * k - 1, integrand, kind, cxd(w * k, 0.0)));
    }
    return acc;
}

ScalarForm leading_order_char_form(const MultOpCurvatureFamily& family, int k) {
    if (k < 1) throw ValidationError("leading_order_char_form: k must be >= 1");
    ScalarForm out;
    out.degree = 2 * k;
    out.atlas = family.atlas;
    out.proto = cxd(0, 0);
    auto fam = family.curvature;
    const int n = 2 * k;

    // all permutations of the 2k argument slots, fixed once
    auto perms = std::make_shared<std::vector<std::pair<std::vector<int>, double>>>();
    {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::function<void(int)> rec = [&](int pos) {
            if (pos == n) {
                int inv = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (p[i] > p[j]) ++inv;
                perms->push_back({p, inv % 2 == 0 ? 1.0 : -1.0});
                return;
            }
            for (int i = pos; i < n; ++i) {
                std::swap(p[pos], p[i]);
                rec(pos + 1);
                std::swap(p[pos], p[i]);
            }
        };
        rec(0);
    }

    out.eval = [fam, perms, k, n](int chart, const VecD& x, const std::vector<VecD>& vecs) -> cxd {
        // cache F(v_a, v_b) for ordered pairs; enforce multiplication-operator
        // values (single xi-independent order-0 component)
        std::vector<SymbolExpansion> F(static_cast<size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                if (a == b) continue;
                SymbolExpansion s = fam(chart, x, vecs[a], vecs[b]);
                if (s.leading_order() > 1e-9 ||
                    (!s.is_zero() && s.components().size() > 1))
                    throw ValidationError("leading_order_char_form: curvature is not a "
                                          "multiplication-operator symbol");
                F[static_cast<size_t>(a) * n + b] = std::move(s);
            }
        // tr^lo[(F ^ ... ^ F)(v_1..v_2k)] = (1/2^k) sum_tau sgn(tau)
        //   Tr^lo( F(v_tau1, v_tau2) o ... o F(v_tau(2k-1), v_tau(2k)) )
        cxd total(0.0, 0.0);
        for (const auto& [tau, sgn] : *perms) {
            SymbolExpansion chain = F[static_cast<size_t>(tau[0]) * n + tau[1]];
            for (int i = 1; i < k; ++i)
                chain = compose(chain, F[static_cast<size_t>(tau[2 * i]) * n + tau[2 * i + 1]]);
            total += sgn * leading_order_trace(chain);
        }
        return total / std::pow(2.0, k);
    };
    return out;
}

}  // namespace cw
