#pragma once

// Brute-force reference implementations. Deliberately naive: exhaustive
// loops, no spatial index, no incremental geometry. They share only the
// arithmetic primitives and the cocircular tie-break with the fast paths.

#include "config.hpp"
#include "delaunay.hpp"
#include "geometry.hpp"
#include "models.hpp"
#include "region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nhg {

namespace oracle_detail {

inline double naive_distance(Point a, Point b, const Window& w) {
    if (!w.is_torus()) return std::hypot(a.x - b.x, a.y - b.y);
    double L = w.side();
    double best = std::numeric_limits<double>::infinity();
    for (int ox = -1; ox <= 1; ++ox)
        for (int oy = -1; oy <= 1; ++oy) best = std::min(best, std::hypot(b.x + ox * L - a.x, b.y + oy * L - a.y));
    return best;
}

struct Labelled {
    Point p;
    PointId id;
};

// Every non-collinear triple whose perturbed open circumdisk holds none of
// the other points. `keep` filters triples by their circumcircle.
template <class Keep>
std::vector<Triangle> empty_circle_triples(const std::vector<Labelled>& pts, Keep&& keep) {
    std::size_t n = pts.size();
    std::vector<std::int64_t> rank(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (lex_less(pts[j].p, pts[i].p)) ++rank[i];
    std::vector<Triangle> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                std::size_t a = i, b = j, c = k;
                int o = orient2d(pts[a].p, pts[b].p, pts[c].p);
                if (o == 0) continue;
                if (o < 0) std::swap(b, c);
                Circle circ = circumcircle(pts[a].p, pts[b].p, pts[c].p);
                if (!keep(circ)) continue;
                bool empty = true;
                for (std::size_t l = 0; l < n && empty; ++l) {
                    if (l == a || l == b || l == c) continue;
                    if (in_conflict(pts[a].p, pts[b].p, pts[c].p, pts[l].p, {rank[a], rank[b], rank[c], rank[l]}))
                        empty = false;
                }
                if (empty) out.push_back(make_triangle({pts[a].id, pts[b].id, pts[c].id}, {pts[a].p, pts[b].p, pts[c].p}));
            }
    return out;
}

inline std::vector<Triangle> brute_torus_triangles(const PointConfiguration& cfg) {
    require(cfg.size() <= 30, ErrorKind::too_large, "periodic brute-force triangulation is limited to 30 points");
    double L = cfg.window().side();
    std::vector<Labelled> pts;
    for (std::size_t i = 0; i < cfg.size(); ++i)
        for (int ox = -1; ox <= 1; ++ox)
            for (int oy = -1; oy <= 1; ++oy) {
                Point q{cfg.point_at(i).x + ox * L, cfg.point_at(i).y + oy * L};
                if (q.x >= -0.5 * L && q.x <= 1.5 * L && q.y >= -0.5 * L && q.y <= 1.5 * L)
                    pts.push_back({q, cfg.id_at(i)});
            }
    auto tris = empty_circle_triples(pts, [&](const Circle& c) {
        return c.center.x >= 0.0 && c.center.x < L && c.center.y >= 0.0 && c.center.y < L;
    });
    for (const Triangle& t : tris)
        require(t.radius < 0.25 * L, ErrorKind::torus_too_sparse, "periodic triangle with R >= L/4");
    require(!tris.empty(), ErrorKind::torus_too_sparse, "no periodic triangles");
    return tris;
}

inline double naive_phi_sum(const KnnSpec& spec, std::vector<std::pair<double, PointId>> dist) {
    std::sort(dist.begin(), dist.end());
    double s = 0.0;
    for (std::size_t i = 0; i < spec.k && i < dist.size(); ++i) s += spec.phi(dist[i].first);
    return s;
}

}  // namespace oracle_detail

// Exhaustive Delaunay triangulation of a plane configuration (<= 50 points).
inline Triangulation brute_delaunay(const PointConfiguration& cfg) {
    require(!cfg.window().is_torus(), ErrorKind::invalid_argument, "brute_delaunay works in plane mode");
    require(cfg.size() <= 50, ErrorKind::too_large, "brute_delaunay is limited to 50 points");
    std::vector<oracle_detail::Labelled> pts;
    for (std::size_t i = 0; i < cfg.size(); ++i) pts.push_back({cfg.point_at(i), cfg.id_at(i)});
    Triangulation t;
    t.triangles = oracle_detail::empty_circle_triples(pts, [](const Circle&) { return true; });
    t.source_fingerprint = cfg.fingerprint();
    return t;
}

inline ExtendedEnergy brute_window_energy(const Model& model, const ModelParams& params, const PointConfiguration& cfg,
                                          const Region& region = Region::whole()) {
    require(cfg.size() <= 200, ErrorKind::too_large, "brute-force energy is limited to 200 points");
    model.validate(params);
    const Window& w = cfg.window();
    std::size_t n = cfg.size();
    double alpha = params.alpha;
    const auto& th = params.theta;

    if (const auto* hs = std::get_if<HardSphereSpec>(&model.spec())) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                Point a = cfg.point_at(i), b = cfg.point_at(j);
                if (!region.contains(a, w) && !region.contains(b, w)) continue;
                double d = oracle_detail::naive_distance(a, b, w);
                if (d <= 1.0 / alpha) return ExtendedEnergy::infinite();
                double lo = 1.0 / alpha;
                for (std::size_t s = 0; s < hs->steps.size(); ++s) {
                    double hi = 1.0 / alpha + hs->steps[s];
                    if (d > lo && d <= hi) e += th[s];
                    lo = hi;
                }
            }
        return ExtendedEnergy::finite(e);
    }

    if (const auto* ds = std::get_if<DelaunaySpec>(&model.spec())) {
        if (n == 0) return ExtendedEnergy::finite(0.0);
        std::vector<Triangle> tris;
        if (w.is_torus()) {
            try {
                tris = oracle_detail::brute_torus_triangles(cfg);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::torus_too_sparse || alpha > 0.25 * w.side()) throw;
                return ExtendedEnergy::infinite();
            }
        } else {
            tris = brute_delaunay(cfg).triangles;
        }
        double e = 0.0;
        for (const Triangle& t : tris) {
            if (!(region.distance(t.center, w) < t.radius)) continue;
            if (t.radius >= alpha || t.min_edge <= ds->min_edge) return ExtendedEnergy::infinite();
            e += th[0] * t.perimeter;
        }
        return ExtendedEnergy::finite(e);
    }

    if (const auto* ks = std::get_if<KnnSpec>(&model.spec())) {
        double e = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Point x = cfg.point_at(i);
            if (!(region.distance(x, w) < alpha)) continue;
            std::size_t ball = 0;
            std::vector<std::pair<double, PointId>> others;
            for (std::size_t j = 0; j < n; ++j) {
                double d = oracle_detail::naive_distance(x, cfg.point_at(j), w);
                if (d <= alpha) ++ball;
                if (j != i) others.push_back({d, cfg.id_at(j)});
            }
            if (ball <= ks->k) return ExtendedEnergy::infinite();
            e += th[0] * oracle_detail::naive_phi_sum(*ks, others);
        }
        return ExtendedEnergy::finite(e);
    }

    return ExtendedEnergy::finite(0.0);
}

inline bool brute_removable(const Model& model, double alpha, PointId id, const PointConfiguration& cfg) {
    require(cfg.size() <= 200, ErrorKind::too_large, "brute-force removability is limited to 200 points");
    require(cfg.contains_id(id), ErrorKind::unknown_id, "no point with id " + std::to_string(id));
    ModelParams params{alpha, std::vector<double>(model.dimension(), 1.0)};
    return brute_window_energy(model, params, cfg.erased(id)).is_finite();
}

inline ExtendedEnergy brute_local_energy(const Model& model, const ModelParams& params, Point x,
                                         const PointConfiguration& cfg) {
    ExtendedEnergy before = brute_window_energy(model, params, cfg);
    require(before.is_finite(), ErrorKind::infeasible_base, "configuration has infinite energy");
    ExtendedEnergy after = brute_window_energy(model, params, cfg.inserted(x));
    if (after.is_infinite()) return after;
    return ExtendedEnergy::finite(after.value() - before.value());
}

// Classical (Besag) log pseudo-likelihood over a square window on the
// torus: grid integral of exp(-h) plus h(x, cfg - x) summed over all points.
// Grid: ceil(L sqrt(density)) cells per side, one node per cell centre.
inline double brute_besag_pll(const Model& model, const ModelParams& params, const PointConfiguration& cfg,
                              double density) {
    const Window& w = cfg.window();
    require(w.is_torus(), ErrorKind::invalid_argument, "brute_besag_pll works on the torus");
    double L = w.side();
    long n = std::max(1L, std::lround(std::ceil(L * std::sqrt(density))));
    double h = L / static_cast<double>(n);
    double integral = 0.0;
    for (long j = 0; j < n; ++j)
        for (long i = 0; i < n; ++i) {
            Point x{(static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h};
            bool occupied = false;
            for (Point p : cfg.points()) occupied = occupied || (p == x);
            if (occupied) continue;
            ExtendedEnergy e = brute_local_energy(model, params, x, cfg);
            if (e.is_finite()) integral += std::exp(-e.value());
        }
    integral *= w.area() / static_cast<double>(n * n);
    double sum = 0.0;
    for (std::size_t k = 0; k < cfg.size(); ++k) {
        PointConfiguration rest = cfg.erased(cfg.id_at(k));
        sum += brute_local_energy(model, params, cfg.point_at(k), rest).value();
    }
    return (integral + sum) / w.area();
}

}  // namespace nhg
