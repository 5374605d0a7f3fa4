#include "cw/symbols.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace cw {

namespace {
constexpr double kOrderTol = 1e-9;
constexpr int kMaxXiDerivatives = 64;

void require_compatible(const SymbolExpansion& a, const SymbolExpansion& b, const char* who) {
    if (a.rank() != b.rank())
        throw ValidationError(std::string(who) + ": rank mismatch (" + std::to_string(a.rank()) +
                              " vs " + std::to_string(b.rank()) + ")");
    if (a.cutoff() != b.cutoff())
        throw ValidationError(std::string(who) + ": Fourier cutoff mismatch (" +
                              std::to_string(a.cutoff()) + " vs " + std::to_string(b.cutoff()) + ")");
}
}  // namespace

FourierPoly FourierPoly::zero(int rank, int cutoff) {
    FourierPoly f;
    f.rank = rank;
    f.cutoff = cutoff;
    f.modes.assign(static_cast<size_t>(2 * cutoff + 1), MatC::Zero(rank, rank));
    return f;
}

FourierPoly FourierPoly::constant(const MatC& m, int cutoff) {
    FourierPoly f = zero(static_cast<int>(m.rows()), cutoff);
    f.mode(0) = m;
    return f;
}

double FourierPoly::norm() const {
    double s = 0.0;
    for (const auto& m : modes) s += m.squaredNorm();
    return std::sqrt(s);
}

FourierPoly FourierPoly::derivative() const {
    FourierPoly f = *this;
    for (int k = -cutoff; k <= cutoff; ++k) f.mode(k) *= cxd(0.0, static_cast<double>(k));
    return f;
}

FourierPoly FourierPoly::derivative(int times) const {
    FourierPoly f = *this;
    for (int k = -cutoff; k <= cutoff; ++k) {
        const cxd ik(0.0, static_cast<double>(k));
        cxd factor(1.0, 0.0);
        for (int t = 0; t < times; ++t) factor *= ik;
        f.mode(k) *= factor;
    }
    return f;
}

cxd FourierPoly::trace_zero_mode() const { return mode(0).trace(); }

FourierPoly& FourierPoly::operator+=(const FourierPoly& o) {
    for (size_t i = 0; i < modes.size(); ++i) modes[i] += o.modes[i];
    return *this;
}
FourierPoly& FourierPoly::operator-=(const FourierPoly& o) {
    for (size_t i = 0; i < modes.size(); ++i) modes[i] -= o.modes[i];
    return *this;
}
FourierPoly& FourierPoly::operator*=(cxd c) {
    for (auto& m : modes) m *= c;
    return *this;
}

FourierPoly FourierPoly::product(const FourierPoly& a, const FourierPoly& b, double* loss) {
    FourierPoly r = zero(a.rank, a.cutoff);
    const int N = a.cutoff;
    for (int p = -N; p <= N; ++p) {
        if (a.mode(p).isZero(0.0)) continue;
        for (int q = -N; q <= N; ++q) {
            if (b.mode(q).isZero(0.0)) continue;
            const int k = p + q;
            const MatC prod = a.mode(p) * b.mode(q);
            if (k < -N || k > N) {
                if (loss) *loss += prod.squaredNorm();
                continue;
            }
            r.mode(k) += prod;
        }
    }
    return r;
}

HomogeneousSymbol HomogeneousSymbol::xi_derivative() const {
    HomogeneousSymbol d;
    d.order = order - 1.0;
    d.plus = plus;
    d.plus *= cxd(order, 0.0);
    d.minus = minus;
    d.minus *= cxd(-order, 0.0);
    return d;
}

const HomogeneousSymbol* SymbolExpansion::component_at(double order) const {
    for (const auto& c : comps_)
        if (std::abs(c.order - order) < kOrderTol) return &c;
    return nullptr;
}

double SymbolExpansion::component_norm(double order) const {
    const HomogeneousSymbol* c = component_at(order);
    return c ? c->norm() : 0.0;
}

double SymbolExpansion::norm_above(double order) const {
    double worst = 0.0;
    for (const auto& c : comps_)
        if (c.order > order + kOrderTol) worst = std::max(worst, c.norm());
    return worst;
}

double SymbolExpansion::max_component_norm() const {
    double worst = 0.0;
    for (const auto& c : comps_) worst = std::max(worst, c.norm());
    return worst;
}

void SymbolExpansion::accumulate(double order, const FourierPoly& plus, const FourierPoly& minus) {
    if (order < bottom_ - kOrderTol) return;
    auto it = std::find_if(comps_.begin(), comps_.end(),
                           [&](const HomogeneousSymbol& c) { return std::abs(c.order - order) < kOrderTol; });
    if (it == comps_.end()) {
        HomogeneousSymbol h;
        h.order = order;
        h.plus = plus;
        h.minus = minus;
        comps_.push_back(std::move(h));
        std::sort(comps_.begin(), comps_.end(),
                  [](const HomogeneousSymbol& a, const HomogeneousSymbol& b) { return a.order > b.order; });
    } else {
        it->plus += plus;
        it->minus += minus;
    }
}

void SymbolExpansion::set_bottom(double b) {
    bottom_ = b;
    comps_.erase(std::remove_if(comps_.begin(), comps_.end(),
                                [&](const HomogeneousSymbol& c) { return c.order < b - kOrderTol; }),
                 comps_.end());
}

void SymbolExpansion::prune_zeros() {
    comps_.erase(std::remove_if(comps_.begin(), comps_.end(),
                                [](const HomogeneousSymbol& c) { return c.norm() == 0.0; }),
                 comps_.end());
}

SymbolExpansion compose(const SymbolExpansion& a, const SymbolExpansion& b) {
    require_compatible(a, b, "compose");
    const double top_a = a.leading_order(), top_b = b.leading_order();
    const double bottom = std::max(a.bottom() + top_b, b.bottom() + top_a);
    SymbolExpansion r(a.rank(), a.cutoff(), bottom);
    r.add_loss(a.trunc_loss() + b.trunc_loss());

    for (const auto& ca : a.components()) {
        // d_xi^j applied iteratively; the factor dies once j exceeds a
        // non-negative integer order.
        HomogeneousSymbol da = ca;
        cxd cj(1.0, 0.0);  // (-i)^j / j!
        for (int j = 0; j <= kMaxXiDerivatives; ++j) {
            if (j > 0) {
                da = da.xi_derivative();
                cj *= cxd(0.0, -1.0) / static_cast<double>(j);
            }
            if (da.norm() == 0.0) break;
            bool any_in_range = false;
            for (const auto& cb : b.components()) {
                const double order = da.order + cb.order;
                if (order < bottom - kOrderTol) continue;
                any_in_range = true;
                double loss = 0.0;
                FourierPoly plus = FourierPoly::product(da.plus, cb.plus.derivative(j), &loss);
                FourierPoly minus = FourierPoly::product(da.minus, cb.minus.derivative(j), &loss);
                plus *= cj;
                minus *= cj;
                r.add_loss(loss);
                r.accumulate(order, plus, minus);
            }
            if (!any_in_range) break;
        }
    }
    r.prune_zeros();
    return r;
}

SymbolExpansion symbol_add(const SymbolExpansion& a, const SymbolExpansion& b) {
    require_compatible(a, b, "symbol_add");
    SymbolExpansion r(a.rank(), a.cutoff(), std::max(a.bottom(), b.bottom()));
    r.add_loss(a.trunc_loss() + b.trunc_loss());
    for (const auto& c : a.components()) r.accumulate(c.order, c.plus, c.minus);
    for (const auto& c : b.components()) r.accumulate(c.order, c.plus, c.minus);
    r.prune_zeros();
    return r;
}

SymbolExpansion symbol_sub(const SymbolExpansion& a, const SymbolExpansion& b) {
    return symbol_add(a, symbol_scale(cxd(-1.0, 0.0), b));
}

SymbolExpansion symbol_scale(cxd c, const SymbolExpansion& a) {
    SymbolExpansion r(a.rank(), a.cutoff(), a.bottom());
    r.add_loss(a.trunc_loss());
    for (const auto& comp : a.components()) {
        FourierPoly plus = comp.plus, minus = comp.minus;
        plus *= c;
        minus *= c;
        r.accumulate(comp.order, plus, minus);
    }
    r.prune_zeros();
    return r;
}

SymbolExpansion symbol_commutator(const SymbolExpansion& a, const SymbolExpansion& b) {
    return symbol_sub(compose(a, b), compose(b, a));
}

double binomial_real(double s, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= (s - i) / (i + 1.0);
    return r;
}

SymbolExpansion power_symbol(double s, int rank, int cutoff, int depth) {
    if (depth < 0) throw ValidationError("power_symbol: depth must be >= 0");
    SymbolExpansion r(rank, cutoff, 2.0 * s - depth);
    const MatC id = MatC::Identity(rank, rank);
    const bool integer_power = (s >= 0.0) && (std::abs(s - std::round(s)) < 1e-14);
    for (int j = 0; 2 * j <= depth; ++j) {
        if (integer_power && j > static_cast<int>(std::round(s))) break;
        const double coeff = binomial_real(s, j);
        if (coeff == 0.0) continue;
        FourierPoly f = FourierPoly::constant(coeff * id, cutoff);
        r.accumulate(2.0 * s - 2.0 * j, f, f);
    }
    return r;
}

SymbolExpansion identity_symbol(int rank, int cutoff, int depth) {
    SymbolExpansion r(rank, cutoff, -static_cast<double>(depth));
    FourierPoly f = FourierPoly::constant(MatC::Identity(rank, rank), cutoff);
    r.accumulate(0.0, f, f);
    return r;
}

SymbolExpansion homogeneous_power_symbol(double order, int rank, int cutoff, int depth) {
    if (depth < 0) throw ValidationError("homogeneous_power_symbol: depth must be >= 0");
    SymbolExpansion r(rank, cutoff, order - depth);
    FourierPoly f = FourierPoly::constant(MatC::Identity(rank, rank), cutoff);
    r.accumulate(order, f, f);
    return r;
}

SymbolExpansion multiplication_symbol(const FourierPoly& f, int depth) {
    SymbolExpansion r(f.rank, f.cutoff, -static_cast<double>(depth));
    r.accumulate(0.0, f, f);
    r.prune_zeros();
    return r;
}

TraceResult wodzicki_residue(const SymbolExpansion& a) {
    TraceResult t;
    if (a.bottom() > -1.0 + kOrderTol) {
        t.truncated = true;
        return t;
    }
    const HomogeneousSymbol* c = a.component_at(-1.0);
    if (!c) return t;  // no order -1 term: residue 0
    t.value = c->plus.trace_zero_mode() + c->minus.trace_zero_mode();
    return t;
}

cxd leading_order_trace(const SymbolExpansion& a) {
    if (a.leading_order() > kOrderTol)
        throw ValidationError("leading_order_trace: symbol has positive order, not in Psi_{<=0}");
    const HomogeneousSymbol* c = a.component_at(0.0);
    if (!c) return cxd(0.0, 0.0);
    return c->plus.trace_zero_mode() + c->minus.trace_zero_mode();
}

cxd leading_order_trace(const SymbolExpansion& a, const FourierPoly& weight_plus,
                        const FourierPoly& weight_minus) {
    if (a.leading_order() > kOrderTol)
        throw ValidationError("leading_order_trace: symbol has positive order, not in Psi_{<=0}");
    if (weight_plus.rank != 1 || weight_minus.rank != 1)
        throw ValidationError("leading_order_trace: weights must be scalar Fourier polynomials");
    const HomogeneousSymbol* c = a.component_at(0.0);
    if (!c) return cxd(0.0, 0.0);
    // (2pi)^-1 int w(x) tr sigma_0(x) dx = sum_k w_k * (tr sigma_0)_{-k}
    cxd out(0.0, 0.0);
    const int N = c->plus.cutoff;
    for (int k = -std::min(N, weight_plus.cutoff); k <= std::min(N, weight_plus.cutoff); ++k) {
        out += weight_plus.mode(k)(0, 0) * c->plus.mode(-k).trace();
        out += weight_minus.mode(k)(0, 0) * c->minus.mode(-k).trace();
    }
    return out;
}

namespace {

std::string hexd(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%a", v);
    return buf;
}

double parse_hexd(const std::string& s) {
    return std::strtod(s.c_str(), nullptr);
}

}  // namespace

std::string symbol_to_table(const SymbolExpansion& a) {
    std::ostringstream os;
    os << "symbol-table v1\n";
    os << "rank " << a.rank() << "\n";
    os << "cutoff " << a.cutoff() << "\n";
    os << "bottom " << hexd(a.bottom()) << "\n";
    os << "trunc_loss " << hexd(a.trunc_loss()) << "\n";
    for (const auto& c : a.components()) {
        os << "component " << hexd(c.order) << "\n";
        for (int dir = 0; dir < 2; ++dir) {
            const FourierPoly& f = dir == 0 ? c.plus : c.minus;
            for (int k = -f.cutoff; k <= f.cutoff; ++k) {
                if (f.mode(k).isZero(0.0)) continue;
                for (int i = 0; i < f.rank; ++i)
                    for (int j = 0; j < f.rank; ++j) {
                        const cxd v = f.mode(k)(i, j);
                        if (v == cxd(0.0, 0.0)) continue;
                        os << (dir == 0 ? "+ " : "- ") << k << " " << i << " " << j << " "
                           << hexd(v.real()) << " " << hexd(v.imag()) << "\n";
                    }
            }
        }
    }
    os << "end\n";
    return os.str();
}

SymbolExpansion symbol_from_table(const std::string& table) {
    std::istringstream is(table);
    std::string line;
    if (!std::getline(is, line) || line != "symbol-table v1")
        throw ValidationError("symbol_from_table: bad header");
    int rank = 0, cutoff = 0;
    double bottom = 0.0, loss = 0.0;
    std::string kw;
    {
        std::istringstream l1, l2, l3, l4;
        std::getline(is, line);
        l1.str(line);
        l1 >> kw >> rank;
        std::getline(is, line);
        l2.str(line);
        l2 >> kw >> line;
        cutoff = std::atoi(line.c_str());
        std::getline(is, line);
        std::string v;
        l3.str(line);
        l3 >> kw >> v;
        bottom = parse_hexd(v);
        std::getline(is, line);
        l4.str(line);
        l4 >> kw >> v;
        loss = parse_hexd(v);
    }
    SymbolExpansion r(rank, cutoff, bottom);
    r.add_loss(loss);
    FourierPoly plus = FourierPoly::zero(rank, cutoff), minus = FourierPoly::zero(rank, cutoff);
    bool open = false;
    double order = 0.0;
    auto flush = [&]() {
        if (open) {
            r.accumulate(order, plus, minus);
            plus = FourierPoly::zero(rank, cutoff);
            minus = FourierPoly::zero(rank, cutoff);
        }
    };
    while (std::getline(is, line)) {
        if (line == "end") break;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "component") {
            flush();
            std::string v;
            ls >> v;
            order = parse_hexd(v);
            open = true;
        } else if (tag == "+" || tag == "-") {
            int k, i, j;
            std::string re, im;
            ls >> k >> i >> j >> re >> im;
            FourierPoly& f = tag == "+" ? plus : minus;
            f.mode(k)(i, j) = cxd(parse_hexd(re), parse_hexd(im));
        } else {
            throw ValidationError("symbol_from_table: unexpected line '" + line + "'");
        }
    }
    flush();
    r.prune_zeros();
    return r;
}

}  // namespace cw
