#pragma once

#include "config.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <span>
#include <vector>

namespace nhg {

struct Triangle {
    std::array<PointId, 3> ids{};       // sorted ascending
    std::array<Point, 3> vertices{};    // counter-clockwise, possibly unwrapped images
    Point center;
    double radius = 0.0;
    double min_edge = 0.0;
    double perimeter = 0.0;
};

inline Triangle make_triangle(std::array<PointId, 3> ids, std::array<Point, 3> v) {
    Triangle t;
    Circle c = circumcircle(v[0], v[1], v[2]);
    t.center = c.center;
    t.radius = c.radius;
    double e0 = euclidean_distance(v[1], v[2]);
    double e1 = euclidean_distance(v[2], v[0]);
    double e2 = euclidean_distance(v[0], v[1]);
    t.min_edge = std::min({e0, e1, e2});
    t.perimeter = e0 + e1 + e2;
    t.vertices = v;
    std::sort(ids.begin(), ids.end());
    t.ids = ids;
    return t;
}

struct Triangulation {
    std::vector<Triangle> triangles;
    std::uint64_t source_fingerprint = 0;
};

namespace detail {

// Incremental Bowyer-Watson triangulation with triangle adjacency. Three
// far-away auxiliary vertices enclose the input; triangles touching them are
// dropped from the result. All predicates are exact, and cocircular ties use
// the lexicographic symbolic perturbation of in_conflict().
class BowyerWatson {
public:
    explicit BowyerWatson(std::span<const Point> input) {
        n_ = input.size();
        if (n_ < 3) return;
        pts_.assign(input.begin(), input.end());

        std::vector<int> by_lex(n_);
        std::iota(by_lex.begin(), by_lex.end(), 0);
        std::sort(by_lex.begin(), by_lex.end(),
                  [&](int a, int b) { return lex_less(pts_[a], pts_[b]); });
        rank_.assign(n_ + 3, 0);
        for (std::size_t r = 0; r < n_; ++r) rank_[by_lex[r]] = static_cast<std::int64_t>(r);
        for (std::size_t s = 0; s < 3; ++s) rank_[n_ + s] = static_cast<std::int64_t>(n_ + s);
        for (std::size_t r = 1; r < n_; ++r)
            require(!(pts_[by_lex[r]] == pts_[by_lex[r - 1]]), ErrorKind::duplicate_point,
                    "triangulation input contains duplicate points");

        double x0 = pts_[0].x, x1 = x0, y0 = pts_[0].y, y1 = y0;
        for (Point p : pts_) {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        double extent = std::max({x1 - x0, y1 - y0, 1.0});
        double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        double m = extent * 1e12;
        pts_.push_back({cx - 2.0 * m, cy - m});
        pts_.push_back({cx + 2.0 * m, cy - m});
        pts_.push_back({cx, cy + 2.0 * m});
        int s0 = static_cast<int>(n_);
        tris_.push_back({{s0, s0 + 1, s0 + 2}, {-1, -1, -1}, true});

        std::vector<int> order = insertion_order(x0, y0, x1, y1);
        mark_.assign(pts_.size(), -1);
        for (int p : order) insert(p);
    }

    // Counter-clockwise index triples of the triangles between input points.
    std::vector<std::array<int, 3>> triangles() const {
        std::vector<std::array<int, 3>> out;
        int lim = static_cast<int>(n_);
        for (const Tri& t : tris_)
            if (t.alive && t.v[0] < lim && t.v[1] < lim && t.v[2] < lim) out.push_back(t.v);
        return out;
    }

private:
    struct Tri {
        std::array<int, 3> v;
        std::array<int, 3> nb;  // nb[i] shares the edge opposite v[i]
        bool alive;
    };

    std::vector<int> insertion_order(double x0, double y0, double x1, double y1) const {
        // Row-snake ordering over a coarse grid keeps consecutive insertions close.
        std::size_t cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n_ / 4.0)));
        double w = std::max(x1 - x0, 1e-300), h = std::max(y1 - y0, 1e-300);
        std::vector<std::pair<std::int64_t, int>> keyed(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            auto gx = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>((pts_[i].x - x0) / w * cells));
            auto gy = std::min<std::int64_t>(cells - 1, static_cast<std::int64_t>((pts_[i].y - y0) / h * cells));
            if (gy % 2 == 1) gx = static_cast<std::int64_t>(cells) - 1 - gx;
            keyed[i] = {gy * static_cast<std::int64_t>(cells) + gx, static_cast<int>(i)};
        }
        std::sort(keyed.begin(), keyed.end());
        std::vector<int> order(n_);
        for (std::size_t i = 0; i < n_; ++i) order[i] = keyed[i].second;
        return order;
    }

    bool conflicts(const Tri& t, int p) const {
        const auto& v = t.v;
        return in_conflict(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[p],
                           {rank_[v[0]], rank_[v[1]], rank_[v[2]], rank_[p]});
    }

    bool inside_closed(const Tri& t, Point p) const {
        for (int i = 0; i < 3; ++i)
            if (orient2d(pts_[t.v[(i + 1) % 3]], pts_[t.v[(i + 2) % 3]], p) < 0) return false;
        return true;
    }

    int locate(Point p) {
        int t = last_;
        std::size_t cap = 4 * tris_.size() + 16;
        for (std::size_t step = 0; step < cap; ++step) {
            const Tri& tri = tris_[t];
            bool moved = false;
            for (int e = 0; e < 3; ++e) {
                int i = static_cast<int>((step + e) % 3);
                int a = tri.v[(i + 1) % 3], b = tri.v[(i + 2) % 3];
                if (orient2d(pts_[a], pts_[b], p) < 0) {
                    if (tri.nb[i] < 0) break;
                    t = tri.nb[i];
                    moved = true;
                    break;
                }
            }
            if (!moved) {
                if (inside_closed(tris_[t], p)) return t;
                break;
            }
        }
        for (std::size_t i = 0; i < tris_.size(); ++i)
            if (tris_[i].alive && inside_closed(tris_[i], p)) return static_cast<int>(i);
        throw Error(ErrorKind::internal, "point location failed during triangulation");
    }

    void insert(int p) {
        int start = locate(pts_[p]);
        cavity_.clear();
        cavity_.push_back(start);
        tris_[start].alive = false;
        struct BoundaryEdge {
            int a, b, outside, from;
        };
        std::vector<BoundaryEdge> boundary;
        for (std::size_t k = 0; k < cavity_.size(); ++k) {
            int t = cavity_[k];
            for (int i = 0; i < 3; ++i) {
                int o = tris_[t].nb[i];
                if (o >= 0 && !tris_[o].alive && in_cavity(o)) continue;
                if (o >= 0 && tris_[o].alive && conflicts(tris_[o], p)) {
                    tris_[o].alive = false;
                    cavity_.push_back(o);
                    continue;
                }
                boundary.push_back({tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], o, t});
            }
        }
        std::sort(cavity_.begin(), cavity_.end());

        // New fan around p; link neighbours through the shared boundary vertices.
        std::vector<int> created;
        created.reserve(boundary.size());
        for (const BoundaryEdge& e : boundary) {
            int id = static_cast<int>(tris_.size());
            tris_.push_back({{e.a, e.b, p}, {-1, -1, e.outside}, true});
            if (e.outside >= 0) {
                Tri& o = tris_[e.outside];
                for (int j = 0; j < 3; ++j)
                    if (o.nb[j] == e.from) o.nb[j] = id;
            }
            mark_[e.a] = id;
            created.push_back(id);
        }
        for (int id : created) {
            Tri& t = tris_[id];
            // edge (b, p) is shared with the triangle starting at b
            t.nb[0] = mark_[t.v[1]];
        }
        for (int id : created) {
            Tri& t = tris_[id];
            tris_[t.nb[0]].nb[1] = id;
        }
        for (int id : created) mark_[tris_[id].v[0]] = -1;
        last_ = created.empty() ? last_ : created.front();
    }

    bool in_cavity(int t) const {
        return std::find(cavity_.begin(), cavity_.end(), t) != cavity_.end();
    }

    std::size_t n_ = 0;
    std::vector<Point> pts_;
    std::vector<std::int64_t> rank_;
    std::vector<Tri> tris_;
    std::vector<int> cavity_;
    std::vector<int> mark_;
    int last_ = 0;
};

inline std::vector<Triangle> triangulate_points(std::span<const Point> pts, std::span<const PointId> ids) {
    BowyerWatson bw(pts);
    std::vector<Triangle> out;
    for (const auto& t : bw.triangles())
        out.push_back(make_triangle({ids[t[0]], ids[t[1]], ids[t[2]]}, {pts[t[0]], pts[t[1]], pts[t[2]]}));
    return out;
}

// Periodic Delaunay triangulation of a torus configuration: triangulate the
// points together with their periodic images inside a margin, then keep one
// representative of every periodic triangle. Any triangle with circumradius
// >= L/4 near the window means the construction is not trustworthy.
inline std::vector<Triangle> torus_triangles(const PointConfiguration& cfg) {
    const Window& w = cfg.window();
    double L = w.side();
    require(cfg.size() >= 1, ErrorKind::torus_too_sparse, "empty configuration has no periodic triangulation");
    double margin = 0.3 * L;
    std::vector<Point> ext;
    std::vector<PointId> ext_id;
    std::vector<std::array<int, 2>> ext_off;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        Point p = cfg.point_at(i);
        for (int oy = -1; oy <= 1; ++oy)
            for (int ox = -1; ox <= 1; ++ox) {
                Point q{p.x + ox * L, p.y + oy * L};
                if (q.x < -margin || q.x > L + margin || q.y < -margin || q.y > L + margin) continue;
                ext.push_back(q);
                ext_id.push_back(cfg.id_at(i));
                ext_off.push_back({ox, oy});
            }
    }
    BowyerWatson bw(ext);
    double slack = 1e-9 * L;
    using Key = std::array<std::int64_t, 9>;
    std::map<Key, Triangle> kept;
    for (const auto& t : bw.triangles()) {
        std::array<Point, 3> v{ext[t[0]], ext[t[1]], ext[t[2]]};
        Circle c = circumcircle(v[0], v[1], v[2]);
        double bx0 = std::min({v[0].x, v[1].x, v[2].x}), bx1 = std::max({v[0].x, v[1].x, v[2].x});
        double by0 = std::min({v[0].y, v[1].y, v[2].y}), by1 = std::max({v[0].y, v[1].y, v[2].y});
        bool near = bx1 >= 0.0 && bx0 <= L && by1 >= 0.0 && by0 <= L;
        if (near && c.radius >= 0.25 * L)
            throw Error(ErrorKind::torus_too_sparse, "periodic triangulation has a triangle with R >= L/4");
        if (c.center.x < -slack || c.center.x >= L + slack || c.center.y < -slack || c.center.y >= L + slack)
            continue;
        // Canonical key: vertex ids with offsets relative to the smallest id.
        std::array<int, 3> order{0, 1, 2};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return ext_id[t[a]] < ext_id[t[b]]; });
        auto base = ext_off[t[order[0]]];
        Key key{};
        for (int j = 0; j < 3; ++j) {
            int e = t[order[j]];
            key[3 * j] = static_cast<std::int64_t>(ext_id[e]);
            key[3 * j + 1] = ext_off[e][0] - base[0];
            key[3 * j + 2] = ext_off[e][1] - base[1];
        }
        bool inside = c.center.x >= 0.0 && c.center.x < L && c.center.y >= 0.0 && c.center.y < L;
        auto it = kept.find(key);
        if (it != kept.end() && !inside) continue;
        kept[key] = make_triangle({ext_id[t[0]], ext_id[t[1]], ext_id[t[2]]}, v);
    }
    std::vector<Triangle> out;
    out.reserve(kept.size());
    for (auto& [key, tri] : kept) out.push_back(tri);
    return out;
}

}  // namespace detail

// Delaunay triangulation of cfg (periodic on the torus). Errors: TorusTooSparse.
inline Triangulation delaunay_triangulate(const PointConfiguration& cfg) {
    Triangulation tri;
    tri.source_fingerprint = cfg.fingerprint();
    if (cfg.window().is_torus())
        tri.triangles = detail::torus_triangles(cfg);
    else
        tri.triangles = detail::triangulate_points(cfg.points(), cfg.ids());
    return tri;
}

}  // namespace nhg
