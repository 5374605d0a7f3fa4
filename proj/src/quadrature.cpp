#include "cw/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

namespace cw {

std::string QuadratureSpec::describe() const {
    std::ostringstream os;
    if (scheme == QuadScheme::GaussLegendre)
        os << "gauss-legendre nodes/axis=" << nodes_per_axis;
    else
        os << "monte-carlo samples=" << mc_samples << " seed=" << seed;
    return os.str();
}

namespace {

GaussRule build_gauss_legendre(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    // Newton iteration on Legendre polynomials from the Chebyshev initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw ValidationError("gauss_legendre: need n >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

namespace {

inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

double counter_uniform(uint64_t seed, uint64_t index, uint64_t component) {
    uint64_t z = mix64(mix64(mix64(seed) ^ index) ^ (component * 0xda942042e4dd58b5ULL));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

double tree_sum(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    std::vector<double> level = values;
    while (level.size() > 1) {
        std::vector<double> next((level.size() + 1) / 2);
        for (size_t i = 0; i + 1 < level.size(); i += 2) next[i / 2] = level[i] + level[i + 1];
        if (level.size() % 2 == 1) next.back() = level.back();
        level.swap(next);
    }
    return level[0];
}

}  // namespace cw
