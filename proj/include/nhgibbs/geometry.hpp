#pragma once

#include "errors.hpp"
#include "predicates.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace nhg {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }

inline bool lex_less(Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); }

inline double euclidean_distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class Boundary { torus, plane };

inline std::string to_string(Boundary b) { return b == Boundary::torus ? "torus" : "plane"; }

inline Boundary parse_boundary(const std::string& s) {
    if (s == "torus") return Boundary::torus;
    if (s == "plane") return Boundary::plane;
    throw Error(ErrorKind::parse_error, "unknown boundary '" + s + "' (expected torus or plane)");
}

// The observation window [0, L)^2, either with periodic identification of
// opposite sides (torus) or as a plain square (plane).
class Window {
public:
    explicit Window(double side = 1.0, Boundary boundary = Boundary::torus)
        : side_(side), boundary_(boundary) {
        require(std::isfinite(side) && side > 0.0, ErrorKind::invalid_argument,
                "window side must be positive and finite");
    }

    double side() const { return side_; }
    double area() const { return side_ * side_; }
    Boundary boundary() const { return boundary_; }
    bool is_torus() const { return boundary_ == Boundary::torus; }

    bool contains(Point p) const {
        return p.x >= 0.0 && p.x < side_ && p.y >= 0.0 && p.y < side_;
    }

    double wrap_coordinate(double v) const {
        double r = std::fmod(v, side_);
        if (r < 0.0) r += side_;
        if (r >= side_) r = 0.0;
        return r;
    }

    Point wrap(Point p) const {
        if (!is_torus()) return p;
        return {wrap_coordinate(p.x), wrap_coordinate(p.y)};
    }

    double axis_delta(double from, double to) const {
        double d = to - from;
        if (is_torus()) {
            double half = 0.5 * side_;
            if (d > half)
                d -= side_;
            else if (d < -half)
                d += side_;
        }
        return d;
    }

    // Shortest displacement from `from` to `to` (minimal periodic image on the torus).
    Point displacement(Point from, Point to) const {
        return {axis_delta(from.x, to.x), axis_delta(from.y, to.y)};
    }

    double distance(Point a, Point b) const {
        Point d = displacement(a, b);
        return std::hypot(d.x, d.y);
    }

    // The image of p closest to `reference`.
    Point unwrap_near(Point p, Point reference) const { return reference + displacement(reference, p); }

    // Largest distance two points of the window can be apart.
    double diameter() const { return is_torus() ? side_ * std::sqrt(0.5) : side_ * std::sqrt(2.0); }

    friend bool operator==(const Window&, const Window&) = default;

private:
    double side_;
    Boundary boundary_;
};

inline double torus_distance(Point a, Point b, const Window& w) { return w.distance(a, b); }

inline int orient2d(Point a, Point b, Point c) { return orient2d(a.x, a.y, b.x, b.y, c.x, c.y); }

inline int incircle(Point a, Point b, Point c, Point d) {
    return incircle(a.x, a.y, b.x, b.y, c.x, c.y, d.x, d.y);
}

struct Circle {
    Point center;
    double radius = 0.0;
};

inline Circle circumcircle(Point a, Point b, Point c) {
    require(orient2d(a, b, c) != 0, ErrorKind::collinear, "circumcircle of collinear points");
    double bx = b.x - a.x, by = b.y - a.y;
    double cx = c.x - a.x, cy = c.y - a.y;
    double b2 = bx * bx + by * by;
    double c2 = cx * cx + cy * cy;
    double d = 2.0 * (bx * cy - by * cx);
    double ux = (cy * b2 - by * c2) / d;
    double uy = (bx * c2 - cx * b2) / d;
    return {{a.x + ux, a.y + uy}, std::hypot(ux, uy)};
}

// Empty-circle test with a symbolic tie-break. Each point carries a priority
// (smaller value = higher priority; callers rank by lexicographic (x, y)).
// Exactly cocircular configurations are resolved as if every point were
// lifted by an infinitesimal amount ordered by priority, which makes the
// Delaunay triangulation unique for any input without duplicates.
//
// Requires (a, b, c) counter-clockwise. Returns true iff d is in conflict
// with (lies inside the perturbed circumcircle of) the triangle.
inline bool in_conflict(Point a, Point b, Point c, Point d, std::array<std::int64_t, 4> priority) {
    int s = incircle(a, b, c, d);
    if (s != 0) return s > 0;
    std::array<int, 4> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return priority[i] < priority[j]; });
    for (int v : order) {
        if (v == 3) return false;
        std::array<Point, 3> tri{a, b, c};
        tri[v] = d;
        int o = orient2d(tri[0], tri[1], tri[2]);
        if (o != 0) return o > 0;
    }
    return false;
}

}  // namespace nhg
