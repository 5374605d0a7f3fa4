#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cw/common.hpp"

namespace cw {

// One coordinate chart: a finite open box. Coordinates flagged periodic wrap
// around instead of ending at a singular boundary (spherical poles are the
// non-periodic case). `margin` is the interior fraction random probes keep
// away from non-periodic boundaries; evaluation itself only requires strict
// interiority.
struct Chart {
    std::string name;
    int dim = 0;
    VecD lo, hi;
    std::vector<uint8_t> periodic;  // per coordinate
    double margin = 1e-3;           // fraction of range, probe placement

    double range(int i) const { return hi[i] - lo[i]; }

    bool strictly_inside(const VecD& x, double guard_frac = 1e-9) const {
        for (int i = 0; i < dim; ++i) {
            if (periodic[i]) continue;
            const double guard = guard_frac * range(i);
            if (!(x[i] > lo[i] + guard && x[i] < hi[i] - guard)) return false;
        }
        return true;
    }

    // Wrap periodic coordinates back into [lo, hi).
    void normalize(VecD& x) const {
        for (int i = 0; i < dim; ++i) {
            if (!periodic[i]) continue;
            const double r = range(i);
            double t = std::fmod(x[i] - lo[i], r);
            if (t < 0) t += r;
            x[i] = lo[i] + t;
        }
    }
};

// Charts tiling a manifold up to measure zero. Orientation is the chart
// coordinate order; every catalog atlas documents its order in `name`.
struct ChartAtlas {
    std::string name;
    std::vector<Chart> charts;

    int dim() const { return charts.empty() ? 0 : charts[0].dim; }

    void validate() const {
        if (charts.empty()) throw ValidationError("atlas '" + name + "' has no charts");
        for (const auto& c : charts) {
            if (c.dim != dim())
                throw ValidationError("atlas '" + name + "': chart dimension mismatch");
            if (c.margin <= 0.0)
                throw ValidationError("atlas '" + name + "': interior margin must be > 0");
            for (int i = 0; i < c.dim; ++i)
                if (!(c.hi[i] - c.lo[i] > 0.0) || !std::isfinite(c.lo[i]) || !std::isfinite(c.hi[i]))
                    throw ValidationError("atlas '" + name + "': coordinate range must be a finite interval of positive length");
        }
    }
};

inline Chart make_chart(std::string name, std::vector<double> lo, std::vector<double> hi,
                        std::vector<uint8_t> periodic = {}) {
    Chart c;
    c.name = std::move(name);
    c.dim = static_cast<int>(lo.size());
    c.lo = VecD(c.dim);
    c.hi = VecD(c.dim);
    for (int i = 0; i < c.dim; ++i) {
        c.lo[i] = lo[i];
        c.hi[i] = hi[i];
    }
    c.periodic = periodic.empty() ? std::vector<uint8_t>(lo.size(), 0) : std::move(periodic);
    return c;
}

// Product Z x B with fiber coordinates first; a 0-dimensional factor is allowed
// (point base for fiber-integration checks).
ChartAtlas product_atlas(const ChartAtlas& fiber, const ChartAtlas& base);

ChartAtlas point_atlas();

}  // namespace cw
