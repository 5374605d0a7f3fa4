#include "cw/forms.hpp"

#include <cmath>
#include <memory>
#include <numeric>
#include <thread>

namespace cw {

void require_same_atlas(const ChartAtlas& a, const ChartAtlas& b, const char* who) {
    if (a.name != b.name || a.dim() != b.dim())
        throw ValidationError(std::string(who) + ": incompatible atlases '" + a.name + "' vs '" +
                              b.name + "'");
}

namespace {

// All p-subsets of {0..n-1} in ascending order plus the shuffle sign.
struct Shuffle {
    std::vector<int> left, right;
    double sign;
};

std::vector<Shuffle> shuffles(int n, int p) {
    std::vector<Shuffle> out;
    std::vector<int> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        Shuffle s;
        s.left = idx;
        int inv = 0;
        {
            std::vector<char> in_left(n, 0);
            for (int v : idx) in_left[v] = 1;
            for (int i = 0; i < n; ++i)
                if (!in_left[i]) s.right.push_back(i);
            for (int i = 0; i < p; ++i) inv += idx[i] - i;
        }
        s.sign = (inv % 2 == 0) ? 1.0 : -1.0;
        out.push_back(std::move(s));
        // next combination
        int i = p - 1;
        while (i >= 0 && idx[i] == n - p + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

template <class V>
V eval_subset(const Form<V>& f, int chart, const VecD& x, const std::vector<VecD>& vecs,
              const std::vector<int>& pick) {
    std::vector<VecD> sub(pick.size());
    for (size_t i = 0; i < pick.size(); ++i) sub[i] = vecs[pick[i]];
    return f.eval(chart, x, sub);
}

}  // namespace

template <class V>
Form<V> wedge(const Form<V>& a, const Form<V>& b) {
    require_same_atlas(a.atlas, b.atlas, "wedge");
    const int p = a.degree, q = b.degree;
    V proto = detail::mul_values(a.proto, b.proto);
    if (p + q > a.atlas.dim()) return zero_form(a.atlas, p + q, proto);

    Form<V> r;
    r.degree = p + q;
    r.atlas = a.atlas;
    r.proto = proto;
    auto af = a.eval;
    auto bf = b.eval;
    auto sh = std::make_shared<std::vector<Shuffle>>(shuffles(p + q, p));
    r.eval = [af, bf, sh, proto](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        V acc = detail::zero_like(proto);
        std::vector<VecD> lv, rv;
        for (const Shuffle& s : *sh) {
            lv.clear();
            rv.clear();
            for (int i : s.left) lv.push_back(vecs[i]);
            for (int i : s.right) rv.push_back(vecs[i]);
            V prod = detail::mul_values(af(chart, x, lv), bf(chart, x, rv));
            if (s.sign > 0)
                acc += prod;
            else
                acc -= prod;
        }
        return acc;
    };
    return r;
}

template <class V>
Form<V> form_add(const Form<V>& a, const Form<V>& b) {
    require_same_atlas(a.atlas, b.atlas, "form_add");
    if (a.degree != b.degree) throw ValidationError("form_add: degree mismatch");
    Form<V> r = a;
    auto af = a.eval, bf = b.eval;
    r.eval = [af, bf](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        return V(af(chart, x, vecs) + bf(chart, x, vecs));
    };
    return r;
}

template <class V>
Form<V> form_scale(cxd c, const Form<V>& a) {
    Form<V> r = a;
    auto af = a.eval;
    r.eval = [af, c](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        return V(c * af(chart, x, vecs));
    };
    return r;
}

template <class V>
Form<V> exterior_derivative_numeric(const Form<V>& a, double step) {
    if (!(step > 0.0)) throw ValidationError("exterior_derivative_numeric: step must be > 0");
    Form<V> r;
    r.degree = a.degree + 1;
    r.atlas = a.atlas;
    r.proto = a.proto;
    auto af = a.eval;
    const int p = a.degree;
    r.eval = [af, step, p](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        // sum_j (-1)^j D_{v_j} [ y -> a(y; v_0..^j..v_p) ](x), central differences
        V acc{};
        bool first = true;
        std::vector<VecD> rest(p);
        for (int j = 0; j <= p; ++j) {
            int m = 0;
            for (int i = 0; i <= p; ++i)
                if (i != j) rest[m++] = vecs[i];
            VecD xp = x + step * vecs[j];
            VecD xm = x - step * vecs[j];
            V diff = af(chart, xp, rest) - af(chart, xm, rest);
            V term = (1.0 / (2.0 * step)) * diff;
            if (j % 2 == 1) term = -term;
            if (first) {
                acc = term;
                first = false;
            } else {
                acc += term;
            }
        }
        return acc;
    };
    return r;
}

ScalarForm trace_form(const MatrixForm& a) {
    ScalarForm r;
    r.degree = a.degree;
    r.atlas = a.atlas;
    r.proto = cxd(0, 0);
    auto af = a.eval;
    r.eval = [af](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        return af(chart, x, vecs).trace();
    };
    return r;
}

ScalarForm coordinate_form(const ChartAtlas& atlas, int i) {
    ScalarForm r;
    r.degree = 1;
    r.atlas = atlas;
    r.proto = cxd(0, 0);
    r.eval = [i](int, const VecD&, const std::vector<VecD>& vecs) { return cxd(vecs[0][i], 0.0); };
    return r;
}

ScalarForm scalar_form(const ChartAtlas& atlas, std::function<cxd(int, const VecD&)> f) {
    ScalarForm r;
    r.degree = 0;
    r.atlas = atlas;
    r.proto = cxd(0, 0);
    r.eval = [f](int chart, const VecD& x, const std::vector<VecD>&) { return f(chart, x); };
    return r;
}

ScalarForm function_one_form(const ChartAtlas& atlas, std::function<cxd(int, const VecD&)> f, int i) {
    ScalarForm r;
    r.degree = 1;
    r.atlas = atlas;
    r.proto = cxd(0, 0);
    r.eval = [f, i](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        return f(chart, x) * vecs[0][i];
    };
    return r;
}

namespace {

// Evaluate chunks [0,total) of a pure kernel into a preallocated array; the
// caller reduces deterministically afterwards.
void parallel_fill(long total, int workers, const std::function<void(long, long)>& run_range) {
    workers = std::max(1, workers);
    if (workers == 1 || total < 1024) {
        run_range(0, total);
        return;
    }
    std::vector<std::thread> pool;
    const long chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk, hi = std::min(total, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([=] { run_range(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

IntegrationResult integrate(const ScalarForm& a, const QuadratureSpec& spec, int orientation,
                            int workers) {
    spec.validate();
    const int d = a.atlas.dim();
    if (a.degree != d)
        throw ValidationError("integrate: form degree " + std::to_string(a.degree) +
                              " does not match manifold dimension " + std::to_string(d));

    IntegrationResult out;
    for (size_t ci = 0; ci < a.atlas.charts.size(); ++ci) {
        const Chart& c = a.atlas.charts[ci];
        if (d == 0) {
            std::vector<VecD> none;
            out.value += a.eval(static_cast<int>(ci), VecD(0), none);
            out.nodes += 1;
            continue;
        }
        std::vector<VecD> frame(d, VecD::Zero(d));
        for (int i = 0; i < d; ++i) frame[i][i] = 1.0;

        if (spec.scheme == QuadScheme::GaussLegendre) {
            const GaussRule& rule = gauss_legendre(spec.nodes_per_axis);
            long total = 1;
            for (int i = 0; i < d; ++i) total *= spec.nodes_per_axis;
            std::vector<double> re(total), im(total);
            auto kernel = [&](long lo, long hi) {
                VecD x(d);
                for (long idx = lo; idx < hi; ++idx) {
                    long rem = idx;
                    double w = 1.0;
                    for (int i = 0; i < d; ++i) {
                        const int ni = static_cast<int>(rem % spec.nodes_per_axis);
                        rem /= spec.nodes_per_axis;
                        const double half = 0.5 * c.range(i);
                        x[i] = c.lo[i] + half * (rule.nodes[ni] + 1.0);
                        w *= half * rule.weights[ni];
                    }
                    const cxd v = a.eval(static_cast<int>(ci), x, frame);
                    re[idx] = w * v.real();
                    im[idx] = w * v.imag();
                }
            };
            parallel_fill(total, workers, kernel);
            out.value += cxd(tree_sum(re), tree_sum(im)) * static_cast<double>(orientation);
            out.nodes += total;
        } else {
            const long n = spec.mc_samples;
            double volume = 1.0;
            for (int i = 0; i < d; ++i) volume *= c.range(i);
            std::vector<double> re(n), im(n);
            auto kernel = [&](long lo, long hi) {
                VecD x(d);
                for (long idx = lo; idx < hi; ++idx) {
                    for (int i = 0; i < d; ++i)
                        x[i] = c.lo[i] +
                               c.range(i) * counter_uniform(spec.seed, static_cast<uint64_t>(idx),
                                                            static_cast<uint64_t>(i) + ci * 16);
                    const cxd v = a.eval(static_cast<int>(ci), x, frame);
                    re[idx] = v.real();
                    im[idx] = v.imag();
                }
            };
            parallel_fill(n, workers, kernel);
            const double mean_re = tree_sum(re) / static_cast<double>(n);
            const double mean_im = tree_sum(im) / static_cast<double>(n);
            out.value += volume * cxd(mean_re, mean_im) * static_cast<double>(orientation);
            // standard error of the mean, scaled by the box volume
            double ss = 0.0;
            for (long i = 0; i < n; ++i) {
                const double dr = re[i] - mean_re, di = im[i] - mean_im;
                ss += dr * dr + di * di;
            }
            out.std_error += volume * std::sqrt(ss / (static_cast<double>(n) - 1.0)) /
                             std::sqrt(static_cast<double>(n));
            out.nodes += n;
        }
    }
    return out;
}

template <class V>
Form<V> pullback(const Form<V>& target_form, const ManifoldMap& map) {
    require_same_atlas(target_form.atlas, map.to, "pullback");
    Form<V> r;
    r.degree = target_form.degree;
    r.atlas = map.from;
    r.proto = target_form.proto;
    auto tf = target_form.eval;
    auto apply = map.apply;
    auto diff = map.differential;
    r.eval = [tf, apply, diff](int chart, const VecD& x, const std::vector<VecD>& vecs) {
        const VecD y = apply(x);
        const MatD J = diff(x);
        std::vector<VecD> pushed(vecs.size());
        for (size_t i = 0; i < vecs.size(); ++i) pushed[i] = J * vecs[i];
        return tf(chart, y, pushed);
    };
    return r;
}

template struct Form<cxd>;
template struct Form<MatC>;

template Form<cxd> wedge(const Form<cxd>&, const Form<cxd>&);
template Form<MatC> wedge(const Form<MatC>&, const Form<MatC>&);
template Form<cxd> form_add(const Form<cxd>&, const Form<cxd>&);
template Form<MatC> form_add(const Form<MatC>&, const Form<MatC>&);
template Form<cxd> form_scale(cxd, const Form<cxd>&);
template Form<MatC> form_scale(cxd, const Form<MatC>&);
template Form<cxd> exterior_derivative_numeric(const Form<cxd>&, double);
template Form<MatC> exterior_derivative_numeric(const Form<MatC>&, double);
template Form<cxd> pullback(const Form<cxd>&, const ManifoldMap&);
template Form<MatC> pullback(const Form<MatC>&, const ManifoldMap&);

}  // namespace cw
