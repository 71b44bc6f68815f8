#pragma once

// Random pattern generators shared by the unit and acceptance tests.

#include "nhgibbs/config.hpp"
#include "nhgibbs/rng.hpp"

#include <cmath>
#include <vector>

namespace nhg::testutil {

inline PointConfiguration uniform_pattern(const Window& w, std::size_t n, CounterRng& rng) {
    std::vector<Point> pts;
    while (pts.size() < n) pts.push_back({rng.uniform(0.0, w.side()) * (1 - 1e-12), rng.uniform(0.0, w.side()) * (1 - 1e-12)});
    return PointConfiguration::from_points(w, pts);
}

// Random sequential adsorption: uniform proposals kept when farther than
// min_dist from every accepted point.
inline PointConfiguration rsa_pattern(const Window& w, std::size_t n, double min_dist, CounterRng& rng,
                                      std::size_t max_tries = 100000) {
    std::vector<Point> pts;
    for (std::size_t t = 0; t < max_tries && pts.size() < n; ++t) {
        Point p{rng.uniform(0.0, w.side()) * (1 - 1e-12), rng.uniform(0.0, w.side()) * (1 - 1e-12)};
        bool ok = true;
        for (Point q : pts)
            if (w.distance(p, q) <= min_dist) ok = false;
        if (ok) pts.push_back(p);
    }
    return PointConfiguration::from_points(w, pts);
}

// `clusters` groups of `size` points, each uniform in a disc of `radius`.
inline PointConfiguration cluster_pattern(const Window& w, std::size_t clusters, std::size_t size, double radius,
                                          CounterRng& rng, double margin = 0.0) {
    std::vector<Point> pts;
    for (std::size_t c = 0; c < clusters; ++c) {
        Point u{rng.uniform(margin, w.side() - margin), rng.uniform(margin, w.side() - margin)};
        for (std::size_t j = 0; j < size; ++j) {
            double r = radius * std::sqrt(rng.uniform());
            double a = 2.0 * M_PI * rng.uniform();
            pts.push_back(w.wrap({u.x + r * std::cos(a), u.y + r * std::sin(a)}));
        }
    }
    return PointConfiguration::from_points(w, pts);
}

// Triangular lattice filling the torus (rows rounded to an even count),
// every point jittered uniformly in a square of half-width `jitter`.
inline PointConfiguration jittered_torus_lattice(const Window& w, double spacing, double jitter, CounterRng& rng) {
    double L = w.side();
    int nc = std::max(1, static_cast<int>(std::lround(L / spacing)));
    int nr = std::max(2, static_cast<int>(std::lround(L / (spacing * std::sqrt(3.0) / 2.0))));
    if (nr % 2) ++nr;
    double s = L / nc, h = L / nr;
    std::vector<Point> pts;
    for (int j = 0; j < nr; ++j)
        for (int i = 0; i < nc; ++i) {
            Point p{i * s + (j % 2 ? 0.5 * s : 0.0), j * h};
            p.x += rng.uniform(-jitter, jitter);
            p.y += rng.uniform(-jitter, jitter);
            pts.push_back(w.wrap(p));
        }
    return PointConfiguration::from_points(w, pts);
}

// Jittered rhombic patch of a triangular lattice (plane mode), origin at `at`.
inline PointConfiguration jittered_plane_patch(const Window& w, Point at, int rows, int cols, double spacing,
                                               double jitter, CounterRng& rng) {
    std::vector<Point> pts;
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < cols; ++i) {
            Point p{at.x + i * spacing + 0.5 * j * spacing, at.y + j * spacing * std::sqrt(3.0) / 2.0};
            p.x += rng.uniform(-jitter, jitter);
            p.y += rng.uniform(-jitter, jitter);
            pts.push_back(p);
        }
    return PointConfiguration::from_points(w, pts);
}

inline bool rel_close(double a, double b, double rel) {
    return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + 1e-12;
}

}  // namespace nhg::testutil
