#include "cw/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "cw/char_forms.hpp"
#include "cw/connection.hpp"
#include "cw/group_charts.hpp"
#include "cw/idquery.hpp"
#include "cw/loop_algebra.hpp"
#include "cw/symbol_forms.hpp"
#include "cw/wcs.hpp"

namespace cw {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double to_real(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double r = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ValidationError("parameter '" + key + "' is not a real number: '" + v + "'");
    return r;
}

long to_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long r = std::strtol(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ValidationError("parameter '" + key + "' is not an integer: '" + v + "'");
    return r;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

double ExperimentConfig::real_param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : to_real(key, it->second);
}

long ExperimentConfig::int_param(const std::string& key, long fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : to_int(key, it->second);
}

std::string ExperimentConfig::str_param(const std::string& key, const std::string& fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key or value");
        if (key == "experiment")
            cfg.experiment = val;
        else if (key == "seed")
            cfg.seed = static_cast<uint64_t>(to_int(key, val));
        else if (key == "workers")
            cfg.workers = static_cast<int>(to_int(key, val));
        else if (cfg.params.count(key))
            throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key '" +
                                  key + "'");
        else
            cfg.params[key] = val;
    }
    if (cfg.experiment.empty()) throw ValidationError("config: missing 'experiment' key");
    // id query parameters merge in unless overridden by explicit keys
    const IdQuery q = parse_id(cfg.experiment);
    for (const auto& [k, v] : q.params)
        if (!cfg.params.count(k)) cfg.params[k] = v;
    cfg.experiment = q.name;
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string ExperimentReport::machine_text() const {
    std::ostringstream os;
    os << "cwengine-report v1\n";
    os << "experiment = " << experiment << "\n";
    os << "engine = " << engine_version << "\n";
    os << "seed = " << seed << "\n";
    for (const auto& [k, v] : resolved) os << "param." << k << " = " << v << "\n";
    for (const auto& [k, v] : values) os << "value." << k << " = " << fmt_double(v) << "\n";
    for (const auto& [level, v] : convergence)
        os << "convergence." << level << " = " << fmt_double(v) << "\n";
    os << "truncation_loss = " << fmt_double(truncation_loss) << "\n";
    return os.str();
}

std::string ExperimentReport::human_text() const {
    std::ostringstream os;
    os << "experiment " << experiment << " (" << engine_version << ")\n";
    os << "  seed " << seed << ", wall " << fmt_double(wall_seconds) << " s\n";
    for (const auto& [k, v] : resolved) os << "  param " << k << " = " << v << "\n";
    for (const auto& [k, v] : values) os << "  " << k << " = " << fmt_double(v) << "\n";
    if (!convergence.empty()) {
        os << "  convergence:\n";
        for (const auto& [level, v] : convergence)
            os << "    " << level << " -> " << fmt_double(v) << "\n";
    }
    if (truncation_loss != 0.0) os << "  truncation loss " << fmt_double(truncation_loss) << "\n";
    return os.str();
}

namespace {

using RunFn = std::function<void(const ExperimentConfig&, ExperimentReport&)>;

struct ExperimentDef {
    std::string name;
    std::string brief;
    std::vector<std::string> allowed_params;
    RunFn run;
};

VecD random_interior_point(const Chart& c, uint64_t seed, uint64_t probe) {
    VecD x(c.dim);
    for (int i = 0; i < c.dim; ++i) {
        const double u = counter_uniform(seed, probe, static_cast<uint64_t>(i));
        const double margin = c.periodic[i] ? 0.0 : c.margin * c.range(i);
        x[i] = c.lo[i] + margin + (c.range(i) - 2.0 * margin) * u;
    }
    return x;
}

VecD random_vector(int dim, uint64_t seed, uint64_t probe, uint64_t salt) {
    VecD v(dim);
    for (int i = 0; i < dim; ++i)
        v[i] = 2.0 * counter_uniform(seed, probe, salt + static_cast<uint64_t>(i)) - 1.0;
    return v;
}

// ---------------------------------------------------------------- experiments

void run_gauss_bonnet(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int nodes = static_cast<int>(cfg.int_param("nodes", 64));
    auto metric = metric_by_id(cfg.str_param("metric", "round-s2"));
    auto lc = levi_civita_connection(metric);
    ScalarForm pf = char_form(lc, InvariantPolynomial::pfaffian());
    QuadratureSpec q;
    q.nodes_per_axis = nodes;
    const IntegrationResult r = integrate(pf, q, +1, cfg.workers);
    rep.values["main"] = r.value.real() / kTwoPi;
    rep.values["imag"] = r.value.imag();
    QuadratureSpec q2 = q;
    q2.nodes_per_axis = std::max(2, nodes / 2);
    rep.convergence.push_back({q2.nodes_per_axis, integrate(pf, q2).value.real() / kTwoPi});
    rep.convergence.push_back({nodes, rep.values["main"]});
}

void run_monopole_c1(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int n = static_cast<int>(cfg.int_param("n", 1));
    if (n == 0) throw ValidationError("monopole-c1: charge n must be nonzero");
    const int nodes = static_cast<int>(cfg.int_param("nodes", 64));
    auto conn = connection_by_id("monopole?n=" + std::to_string(n));
    ScalarForm c1 = char_form(conn, InvariantPolynomial::trace_power(1));
    QuadratureSpec q;
    q.nodes_per_axis = nodes;
    const cxd raw = integrate(c1, q, +1, cfg.workers).value;
    const cxd normalized = cxd(0.0, 1.0) / kTwoPi * raw;  // (i/2pi) tr F
    rep.values["main"] = normalized.real();
    rep.values["imag"] = normalized.imag();
    rep.values["raw_imag_part"] = raw.imag();
}

void run_connection_independence(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int n = static_cast<int>(cfg.int_param("n", 1));
    const int nodes = static_cast<int>(cfg.int_param("nodes", 64));
    const double eps = cfg.real_param("eps", 0.25);
    QuadratureSpec q;
    q.nodes_per_axis = nodes;
    auto integral = [&](const ConnPtr& c) {
        ScalarForm c1 = char_form(c, InvariantPolynomial::trace_power(1));
        return (cxd(0.0, 1.0) / kTwoPi * integrate(c1, q, +1, cfg.workers).value).real();
    };
    std::ostringstream id1, id2;
    id1 << "perturbed-monopole?n=" << n << "&seed=" << cfg.seed + 1 << "&eps=" << eps;
    id2 << "perturbed-monopole?n=" << n << "&seed=" << cfg.seed + 2 << "&eps=" << eps;
    const double v1 = integral(connection_by_id(id1.str()));
    const double v2 = integral(connection_by_id(id2.str()));
    rep.values["first"] = v1;
    rep.values["second"] = v2;
    rep.values["main"] = std::abs(v1 - v2);
}

void run_transgression(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const std::string bundle = cfg.str_param("bundle", "s2");
    const int probes = static_cast<int>(cfg.int_param("probes", 50));
    const double step = cfg.real_param("step", 1e-4);
    if (probes < 1) throw ValidationError("transgression: probes must be >= 1");

    ConnPtr c0, c1;
    int k = 0;
    if (bundle == "s2") {
        k = static_cast<int>(cfg.int_param("k", 1));
        c0 = connection_by_id("monopole?n=1");
        std::ostringstream id;
        id << "perturbed-monopole?n=1&seed=" << cfg.seed + 11 << "&eps=0.3";
        c1 = connection_by_id(id.str());
    } else if (bundle == "su2") {
        k = static_cast<int>(cfg.int_param("k", 2));
        c0 = connection_by_id("mc-flat-su2");
        c1 = connection_by_id("mc-gauge-su2");
    } else {
        throw ValidationError("transgression: bundle must be s2 or su2");
    }
    if (k < 1) throw ValidationError("transgression: k must be >= 1");

    ScalarForm cs = relative_cs_form(c0, c1, k);
    ScalarForm dcs = exterior_derivative_numeric(cs, step);
    ScalarForm delta;
    {
        ScalarForm ck1 = char_form(c1, InvariantPolynomial::trace_power(k));
        ScalarForm ck0 = char_form(c0, InvariantPolynomial::trace_power(k));
        delta = form_add(ck1, form_scale(cxd(-1.0, 0.0), ck0));
    }
    const Chart& chart = c0->atlas().charts[0];
    double worst = 0.0;
    for (int p = 0; p < probes; ++p) {
        const VecD x = random_interior_point(chart, cfg.seed, 100 + p);
        std::vector<VecD> vecs(2 * k);
        for (int i = 0; i < 2 * k; ++i)
            vecs[i] = random_vector(chart.dim, cfg.seed, 100 + p, 7 * (i + 1));
        const cxd lhs = dcs.eval(0, x, vecs);
        const cxd rhs = (2 * k <= chart.dim) ? delta.eval(0, x, vecs) : cxd(0.0, 0.0);
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    rep.values["main"] = worst;
}

void run_maurer_cartan(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int power = static_cast<int>(cfg.int_param("power", 3));
    const int nodes = static_cast<int>(cfg.int_param("nodes", 48));
    if (power < 1 || power % 2 == 0)
        throw ValidationError("maurer-cartan-su2: power must be odd and >= 1");
    GroupChart gc = group_chart(cfg.str_param("group", "su2"));
    ScalarForm f = maurer_cartan_power_trace(gc, power);
    QuadratureSpec q;
    q.nodes_per_axis = nodes;
    const cxd v = integrate(f, q, +1, cfg.workers).value;
    rep.values["integral_real"] = v.real();
    rep.values["integral_imag"] = v.imag();
    rep.values["main"] = std::abs(v);
    rep.values["over_24pi2"] = std::abs(v) / (24.0 * kPi * kPi);
    QuadratureSpec q2 = q;
    q2.nodes_per_axis = std::max(2, nodes / 2);
    rep.convergence.push_back({q2.nodes_per_axis, std::abs(integrate(f, q2).value)});
    rep.convergence.push_back({nodes, rep.values["main"]});
}

void run_symbol_inverse(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const double s = cfg.real_param("s", 1.0);
    const int depth = static_cast<int>(cfg.int_param("depth", 6));
    const int cutoff = static_cast<int>(cfg.int_param("cutoff", 16));
    if (depth < 0) throw ValidationError("symbol-inverse: depth must be >= 0");
    SymbolExpansion p = power_symbol(s, 1, cutoff, depth);
    SymbolExpansion pm = power_symbol(-s, 1, cutoff, depth);
    SymbolExpansion prod = compose(p, pm);
    SymbolExpansion id = identity_symbol(1, cutoff, depth);
    SymbolExpansion diff = symbol_sub(prod, id);
    rep.values["main"] = diff.max_component_norm();
    rep.truncation_loss = prod.trunc_loss();
}

void run_trace_commutators(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int pairs = static_cast<int>(cfg.int_param("pairs", 50));
    const int depth = static_cast<int>(cfg.int_param("depth", 6));
    const int cutoff = static_cast<int>(cfg.int_param("cutoff", 16));
    const int rank = static_cast<int>(cfg.int_param("rank", 2));
    if (pairs < 1) throw ValidationError("trace-commutators: pairs must be >= 1");
    double wres_max = 0.0, lotr_max = 0.0, lotr_weighted_max = 0.0, loss = 0.0;
    for (int p = 0; p < pairs; ++p) {
        // random order-0 expansions with a few components and low modes
        auto rand_symbol = [&](uint64_t salt) {
            SymbolExpansion a(rank, cutoff, -depth);
            for (int comp = 0; comp < 3; ++comp) {
                FourierPoly plus = FourierPoly::zero(rank, cutoff);
                FourierPoly minus = FourierPoly::zero(rank, cutoff);
                for (int k = -2; k <= 2; ++k)
                    for (int i = 0; i < rank; ++i)
                        for (int j = 0; j < rank; ++j) {
                            const uint64_t probe = salt * 1000 + p * 64 + comp * 8;
                            const uint64_t c0 = static_cast<uint64_t>((k + 2) * 97 + i * 13 + j);
                            plus.mode(k)(i, j) =
                                cxd(2.0 * counter_uniform(cfg.seed, probe, 2 * c0) - 1.0,
                                    2.0 * counter_uniform(cfg.seed, probe, 2 * c0 + 1) - 1.0);
                            minus.mode(k)(i, j) =
                                cxd(2.0 * counter_uniform(cfg.seed, probe + 1, 2 * c0) - 1.0,
                                    2.0 * counter_uniform(cfg.seed, probe + 1, 2 * c0 + 1) - 1.0);
                        }
                a.accumulate(static_cast<double>(-comp), plus, minus);
            }
            return a;
        };
        SymbolExpansion A = rand_symbol(1);
        SymbolExpansion B = rand_symbol(2);
        SymbolExpansion comm = symbol_commutator(A, B);
        wres_max = std::max(wres_max, std::abs(wodzicki_residue(comm).value));
        lotr_max = std::max(lotr_max, std::abs(leading_order_trace(comm)));
        // random scalar weights per direction
        FourierPoly wp = FourierPoly::zero(1, cutoff), wm = FourierPoly::zero(1, cutoff);
        for (int k = -2; k <= 2; ++k) {
            wp.mode(k)(0, 0) = cxd(2.0 * counter_uniform(cfg.seed, 7000 + p, k + 2) - 1.0, 0.0);
            wm.mode(k)(0, 0) = cxd(2.0 * counter_uniform(cfg.seed, 8000 + p, k + 2) - 1.0, 0.0);
        }
        lotr_weighted_max = std::max(lotr_weighted_max, std::abs(leading_order_trace(comm, wp, wm)));
        loss = std::max(loss, comm.trunc_loss());
    }
    rep.values["wres_max"] = wres_max;
    rep.values["lotr_max"] = lotr_max;
    rep.values["lotr_weighted_max"] = lotr_weighted_max;
    rep.values["main"] = std::max(wres_max, std::max(lotr_max, lotr_weighted_max));
    rep.truncation_loss = loss;
}

void run_hs_pattern(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const std::string algebra = cfg.str_param("algebra", "su2");
    const double s = cfg.real_param("s", 2.0);
    const int draws = static_cast<int>(cfg.int_param("draws", 20));
    const int depth = static_cast<int>(cfg.int_param("depth", 6));
    const int cutoff = static_cast<int>(cfg.int_param("cutoff", 16));
    if (!(s > 0.5)) throw ValidationError("hs-pattern: requires s > 1/2");
    if (draws < 1) throw ValidationError("hs-pattern: draws must be >= 1");
    const LieAlgebra alg = algebra == "u1" ? LieAlgebra::U1 : LieAlgebra::SU2;

    double max_all = 0.0, max_above_m2 = 0.0, min_at_m2 = 1e300, loss = 0.0;
    for (int i = 0; i < draws; ++i) {
        auto X = LoopAlgebraElement::random(alg, cutoff, 2, cfg.seed + 2 * i);
        auto Y = LoopAlgebraElement::random(alg, cutoff, 2, cfg.seed + 2 * i + 1);
        SymbolExpansion om = hs_curvature(X, Y, s, depth);
        max_all = std::max(max_all, om.max_component_norm());
        max_above_m2 = std::max(max_above_m2, om.norm_above(-2.0));
        min_at_m2 = std::min(min_at_m2, om.component_norm(-2.0));
        loss = std::max(loss, om.trunc_loss());
    }
    rep.values["max_all"] = max_all;
    rep.values["max_above_m2"] = max_above_m2;
    rep.values["min_at_m2"] = min_at_m2 == 1e300 ? 0.0 : min_at_m2;
    rep.values["main"] = max_above_m2;
    rep.truncation_loss = loss;
}

void run_alpha_homomorphism(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int draws = static_cast<int>(cfg.int_param("draws", 20));
    const int depth = static_cast<int>(cfg.int_param("depth", 6));
    const int cutoff = static_cast<int>(cfg.int_param("cutoff", 16));
    if (draws < 1) throw ValidationError("alpha-homomorphism: draws must be >= 1");
    double worst = 0.0;
    for (int i = 0; i < draws; ++i) {
        auto X = LoopAlgebraElement::random(LieAlgebra::SU2, cutoff, 2, cfg.seed + 2 * i);
        auto Y = LoopAlgebraElement::random(LieAlgebra::SU2, cutoff, 2, cfg.seed + 2 * i + 1);
        SymbolExpansion lhs = symbol_commutator(alpha_map(X, depth), alpha_map(Y, depth));
        SymbolExpansion rhs = alpha_map(loop_bracket(X, Y), depth);
        worst = std::max(worst, symbol_sub(lhs, rhs).max_component_norm());
    }
    rep.values["main"] = worst;
}

void run_wcs(const ExperimentConfig& cfg, ExperimentReport& rep) {
    std::string metric_id = cfg.str_param("metric", "round-s3");
    if (parse_id(metric_id).name == "squashed-t11" && cfg.params.count("t")) {
        std::ostringstream id;
        id << "squashed-t11?t=" << cfg.real_param("t", 0.5);
        metric_id = id.str();
    }
    auto metric = metric_by_id(metric_id);
    auto action = action_by_id(cfg.str_param("action", "trivial"), metric);
    const int k = static_cast<int>(cfg.int_param("k", (metric->dim() + 1) / 2));
    if (k < 1) throw ValidationError("wcs: k must be >= 1");
    QuadratureSpec q = QuadratureSpec::default_for_dim(metric->dim());
    q.seed = cfg.seed;
    if (cfg.str_param("quadrature", "gauss") == "monte-carlo") q.scheme = QuadScheme::MonteCarlo;
    q.nodes_per_axis = static_cast<int>(cfg.int_param("nodes_per_axis", q.nodes_per_axis));
    q.mc_samples = cfg.int_param("mc_samples", q.mc_samples);
    const int theta_nodes = static_cast<int>(cfg.int_param("theta_nodes", 64));
    const int levels = static_cast<int>(cfg.int_param("levels", 3));

    const WcsResult r = wcs_integral(metric, action, k, q, cfg.workers, theta_nodes, levels);
    rep.values["main"] = r.value;
    rep.values["abs"] = std::abs(r.value);
    if (q.scheme == QuadScheme::MonteCarlo) rep.values["stderr"] = r.std_error;
    rep.convergence = r.convergence;
    if (r.convergence.size() >= 2) {
        const double prev = r.convergence[r.convergence.size() - 2].second;
        const double denom = std::max(std::abs(r.value), 1e-300);
        rep.values["refinement_rel_change"] = std::abs(r.value - prev) / denom;
    }
    // rationality diagnostic: value / pi^a for a = 0..4
    for (int a = 0; a <= 4; ++a)
        rep.values["over_pi" + std::to_string(a)] = r.value / std::pow(kPi, a);
}

void run_fit_check(const ExperimentConfig& cfg, ExperimentReport& rep) {
    const int n = static_cast<int>(cfg.int_param("n", 1));
    if (n == 0) throw ValidationError("fit-check: charge n must be nonzero");
    const int fiber_nodes = static_cast<int>(cfg.int_param("fiber_nodes", 64));
    const int probes = static_cast<int>(cfg.int_param("probes", 10));
    const double step = cfg.real_param("step", 1e-4);

    // (a) point base: ch(E) = int_Z ch(R^E), 0-form part -> first Chern number
    auto mono = connection_by_id("monopole?n=" + std::to_string(n));
    QuadratureSpec q;
    q.nodes_per_axis = fiber_nodes;
    {
        auto series = char_form_series(mono, InvariantPolynomial::chern_character(2));
        // degree-2 piece integrates over the fiber; normalization (i/2pi)
        ScalarForm ch1 = form_scale(cxd(0.0, 1.0) / kTwoPi, series[1].second);
        ScalarForm pushed = fiber_integration(ch1, mono->atlas(), point_atlas(), q);
        std::vector<VecD> none;
        rep.values["ch1"] = pushed.eval(0, VecD(0), none).real();
        rep.values["main"] = std::abs(rep.values["ch1"] - n);
    }

    // (b) closedness of the fiber-integrated trace-power form on a 5-dim
    // product with base-mixing connection terms
    {
        auto s2 = metric_by_id("round-s2");
        auto b3 = metric_by_id("euclidean-d3");
        ChartAtlas prod = product_atlas(s2->atlas(), b3->atlas());
        const double half_n = 0.5 * n;
        auto f = [half_n]<class S>(int, const S* x, S* w) {
            // x = (theta, phi, b1, b2, b3); rank 1
            w[0] = S(cxd(0.0, 0.3)) * sin(x[0]) * sin(x[1] + x[3]);
            w[1] = S(cxd(0.0, -half_n)) * (S(cxd(1.0, 0.0)) - cos(x[0])) +
                   S(cxd(0.0, 0.4)) * sin(x[0]) * sin(x[0]) * cos(x[1] - x[2]);
            w[2] = S(cxd(0.0, 0.25)) * sin(x[0]) * sin(x[0]) * sin(x[1] + x[4]);
            w[3] = S(cxd(0.0, -0.2)) * cos(x[0]) * x[4];
            w[4] = S(cxd(0.0, 0.15)) * sin(x[0]) * cos(x[1]);
        };
        ConnPtr connE = make_connection("fit-product-test", prod, 1, f);
        QuadratureSpec qf;
        qf.nodes_per_axis = static_cast<int>(cfg.int_param("cwf_fiber_nodes", 24));
        ScalarForm cwf = bismut_vertical_char_form(connE, s2->atlas(), b3->atlas(), 2, qf);
        ScalarForm dcwf = exterior_derivative_numeric(cwf, step);
        const Chart bc = b3->atlas().charts[0];
        double worst = 0.0;
        for (int p = 0; p < probes; ++p) {
            VecD b = random_interior_point(bc, cfg.seed, 500 + p);
            // keep the finite-difference stencil inside the cube
            for (int i = 0; i < 3; ++i) b[i] = 0.1 + 0.8 * (b[i] - bc.lo[i]) / bc.range(i);
            std::vector<VecD> vecs(3);
            for (int i = 0; i < 3; ++i) vecs[i] = random_vector(3, cfg.seed, 500 + p, 11 * (i + 1));
            worst = std::max(worst, std::abs(dcwf.eval(0, b, vecs)));
        }
        rep.values["cwf_d_residual"] = worst;
    }
}

const std::vector<ExperimentDef>& experiment_defs() {
    static const std::vector<ExperimentDef> defs = {
        {"gauss-bonnet", "(1/2pi) integral of Pf over S^2 (Euler characteristic 2)",
         {"nodes", "metric"}, run_gauss_bonnet},
        {"monopole-c1", "normalized first Chern number of the charge-n monopole",
         {"n", "nodes"}, run_monopole_c1},
        {"connection-independence", "c1 integrals of two random monopole connections agree",
         {"n", "nodes", "eps"}, run_connection_independence},
        {"transgression", "pointwise d CS_k = c_k(1) - c_k(0) residual",
         {"bundle", "k", "probes", "step"}, run_transgression},
        {"maurer-cartan-su2", "|integral over SU(2) of tr((g^-1 dg)^power)|",
         {"power", "nodes", "group"}, run_maurer_cartan},
        {"symbol-inverse", "compose(power(s), power(-s)) = identity",
         {"s", "depth", "cutoff"}, run_symbol_inverse},
        {"trace-commutators", "res_w and Tr_lo vanish on commutators",
         {"pairs", "depth", "cutoff", "rank"}, run_trace_commutators},
        {"hs-pattern", "H^s curvature order pattern",
         {"algebra", "s", "draws", "depth", "cutoff"}, run_hs_pattern},
        {"alpha-homomorphism", "alpha bracket identity residual",
         {"draws", "depth", "cutoff"}, run_alpha_homomorphism},
        {"wcs", "Wodzicki-Chern-Simons integral over an orbit cycle",
         {"metric", "action", "k", "t", "nodes_per_axis", "theta_nodes", "levels", "quadrature",
          "mc_samples"},
         run_wcs},
        {"fit-check", "fiber-integrated Chern character desk checks",
         {"n", "fiber_nodes", "probes", "step", "cwf_fiber_nodes"}, run_fit_check},
    };
    return defs;
}

}  // namespace

std::vector<std::string> experiment_catalog() {
    std::vector<std::string> out;
    for (const auto& d : experiment_defs()) out.push_back(d.name + "  -  " + d.brief);
    return out;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    const ExperimentDef* def = nullptr;
    for (const auto& d : experiment_defs())
        if (d.name == config.experiment) def = &d;
    if (!def) {
        std::string msg = "unknown experiment '" + config.experiment + "'; catalog:\n";
        for (const auto& line : experiment_catalog()) msg += "  " + line + "\n";
        throw ValidationError(msg);
    }
    for (const auto& [k, v] : config.params)
        if (std::find(def->allowed_params.begin(), def->allowed_params.end(), k) ==
            def->allowed_params.end())
            throw ValidationError("experiment '" + def->name + "': unknown parameter '" + k + "'");

    ExperimentReport rep;
    rep.experiment = config.experiment;
    rep.seed = config.seed;
    rep.engine_version = kEngineVersion;
    rep.resolved = config.params;
    const auto t0 = std::chrono::steady_clock::now();
    def->run(config, rep);
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string emit_plot_data(const std::vector<ExperimentReport>& reports, const std::string& axis) {
    if (reports.empty()) throw ValidationError("emit_plot_data: no reports");
    std::ostringstream os;
    const std::string& name = reports.front().experiment;
    size_t conv_cols = reports.front().convergence.size();
    for (const auto& r : reports) {
        if (r.experiment != name)
            throw ValidationError("emit_plot_data: mixed experiment ids ('" + name + "' vs '" +
                                  r.experiment + "')");
        if (!r.resolved.count(axis))
            throw ValidationError("emit_plot_data: report lacks axis parameter '" + axis + "'");
        auto probe = r.resolved;
        auto base = reports.front().resolved;
        probe.erase(axis);
        base.erase(axis);
        if (probe != base)
            throw ValidationError("emit_plot_data: reports differ in a non-axis parameter");
        conv_cols = std::min(conv_cols, r.convergence.size());
    }
    os << axis << "\tvalue";
    for (size_t i = 0; i < conv_cols; ++i) os << "\tconv" << i;
    os << "\n";
    for (const auto& r : reports) {
        os << r.resolved.at(axis) << "\t" << fmt_double(r.values.at("main"));
        for (size_t i = 0; i < conv_cols; ++i) os << "\t" << fmt_double(r.convergence[i].second);
        os << "\n";
    }
    return os.str();
}

std::vector<GoldenBlock> parse_golden_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open golden file '" + path + "'");
    std::vector<GoldenBlock> blocks;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "experiment") {
            GoldenBlock b;
            std::string id;
            ls >> id;
            std::string cfg_text = "experiment = " + id + "\n";
            std::string kv;
            while (ls >> kv) {
                const size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw ValidationError("golden line " + std::to_string(lineno) +
                                          ": expected key=value, got '" + kv + "'");
                cfg_text += kv.substr(0, eq) + " = " + kv.substr(eq + 1) + "\n";
            }
            b.config = parse_config_text(cfg_text);
            blocks.push_back(std::move(b));
        } else if (tag == "expect") {
            if (blocks.empty())
                throw ValidationError("golden line " + std::to_string(lineno) +
                                      ": 'expect' before any 'experiment'");
            GoldenExpectation e;
            std::string kind;
            ls >> e.field >> e.expected >> kind >> e.tol;
            if (!ls || (kind != "abs" && kind != "rel"))
                throw ValidationError("golden line " + std::to_string(lineno) +
                                      ": expected 'expect <field> <value> abs|rel <tol>'");
            e.relative = kind == "rel";
            blocks.back().expectations.push_back(e);
        } else {
            throw ValidationError("golden line " + std::to_string(lineno) + ": unknown tag '" +
                                  tag + "'");
        }
    }
    return blocks;
}

RegressOutcome run_regression(std::vector<GoldenBlock> blocks, int workers_override,
                              const std::string& out_dir) {
    RegressOutcome out;
    std::ostringstream log;
    for (auto& b : blocks) {
        if (workers_override > 0) b.config.workers = workers_override;
        const ExperimentReport rep = run_experiment(b.config);
        if (!out_dir.empty()) {
            std::string fname = b.config.experiment;
            for (const auto& [k, v] : b.config.params) fname += "_" + k + "-" + v;
            for (char& c : fname)
                if (c == '/' || c == '?' || c == '&' || c == '=' || c == '.') c = '-';
            std::ofstream(out_dir + "/" + fname + ".report") << rep.machine_text();
            std::ofstream(out_dir + "/" + fname + ".txt") << rep.human_text();
        }
        for (const auto& e : b.expectations) {
            ++out.checks;
            double actual = 0.0;
            bool found = true;
            if (e.field.rfind("value.", 0) == 0 && rep.values.count(e.field.substr(6)))
                actual = rep.values.at(e.field.substr(6));
            else
                found = false;
            const double diff = std::abs(actual - e.expected);
            const double bound = e.relative ? e.tol * std::abs(e.expected) : e.tol;
            const bool pass = found && diff <= bound;
            if (!pass) ++out.failures;
            log << (pass ? "[PASS] " : "[FAIL] ") << b.config.experiment << " " << e.field
                << " = " << fmt_double(actual) << " expected " << fmt_double(e.expected)
                << (e.relative ? " rel " : " abs ") << fmt_double(e.tol);
            if (!found) log << " (missing field)";
            log << "\n";
        }
    }
    out.log = log.str();
    return out;
}

}  // namespace cw
