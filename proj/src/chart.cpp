#include "cw/chart.hpp"

namespace cw {

ChartAtlas point_atlas() {
    ChartAtlas a;
    a.name = "point";
    Chart c;
    c.name = "point";
    c.dim = 0;
    c.lo = VecD(0);
    c.hi = VecD(0);
    a.charts.push_back(std::move(c));
    return a;
}

ChartAtlas product_atlas(const ChartAtlas& fiber, const ChartAtlas& base) {
    if (fiber.charts.size() != 1 || base.charts.size() != 1)
        throw ValidationError("product_atlas: factors must be single-chart atlases");
    const Chart& f = fiber.charts[0];
    const Chart& b = base.charts[0];
    Chart c;
    c.name = f.name + " x " + b.name;
    c.dim = f.dim + b.dim;
    c.lo = VecD(c.dim);
    c.hi = VecD(c.dim);
    c.periodic.resize(c.dim);
    c.margin = std::min(f.dim > 0 ? f.margin : 1.0, b.dim > 0 ? b.margin : 1.0);
    for (int i = 0; i < f.dim; ++i) {
        c.lo[i] = f.lo[i];
        c.hi[i] = f.hi[i];
        c.periodic[i] = f.periodic[i];
    }
    for (int i = 0; i < b.dim; ++i) {
        c.lo[f.dim + i] = b.lo[i];
        c.hi[f.dim + i] = b.hi[i];
        c.periodic[f.dim + i] = b.periodic[i];
    }
    ChartAtlas a;
    a.name = fiber.name + " x " + base.name;
    a.charts.push_back(std::move(c));
    return a;
}

}  // namespace cw
