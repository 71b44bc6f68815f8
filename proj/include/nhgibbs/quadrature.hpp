#pragma once

#include "errors.hpp"
#include "geometry.hpp"
#include "region.hpp"

#include <cmath>
#include <vector>

namespace nhg {

// Centered regular grid with about `density` nodes per unit area.
struct QuadratureSpec {
    double density = 400.0;

    void validate() const {
        require(density >= 1.0 && std::isfinite(density), ErrorKind::invalid_argument,
                "quadrature density must be >= 1 point per unit area");
    }
};

// Nodes with equal weights; the integral of g over the region is
// measure * mean(g(node)).
struct Quadrature {
    std::vector<Point> nodes;
    double measure = 0.0;

    template <class F>
    double integrate(F&& g) const {
        if (nodes.empty()) return 0.0;
        double s = 0.0;
        for (Point p : nodes) s += g(p);
        return measure * (s / static_cast<double>(nodes.size()));
    }
};

inline Quadrature make_quadrature(const Region& region, const Window& w, const QuadratureSpec& spec) {
    spec.validate();
    Region box = region.bounding_rect(w);
    double bw = box.upper().x - box.lower().x, bh = box.upper().y - box.lower().y;
    double step = 1.0 / std::sqrt(spec.density);
    long nx = std::max(1L, std::lround(std::ceil(bw / step))), ny = std::max(1L, std::lround(std::ceil(bh / step)));
    double hx = bw / static_cast<double>(nx), hy = bh / static_cast<double>(ny);
    Quadrature q;
    bool filter = region.kind() == Region::Kind::ball;
    for (long j = 0; j < ny; ++j)
        for (long i = 0; i < nx; ++i) {
            Point p{box.lower().x + (static_cast<double>(i) + 0.5) * hx, box.lower().y + (static_cast<double>(j) + 0.5) * hy};
            if (w.is_torus()) p = w.wrap(p);
            if (filter && !region.contains(p, w)) continue;
            q.nodes.push_back(p);
        }
    q.measure = filter ? static_cast<double>(q.nodes.size()) * hx * hy : region.area(w);
    return q;
}

}  // namespace nhg
