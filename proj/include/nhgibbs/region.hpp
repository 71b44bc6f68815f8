#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <vector>

namespace nhg {

// Bounded evaluation region inside the window. Distances are measured with
// the window metric, so on the torus a rectangle may straddle the seam.
class Region {
public:
    enum class Kind { whole, rect, ball, union_of };

    static Region whole() { return Region(Kind::whole); }

    static Region rect(double x0, double y0, double x1, double y1) {
        require(x1 >= x0 && y1 >= y0, ErrorKind::invalid_argument, "rectangle corners out of order");
        Region r(Kind::rect);
        r.lo_ = {x0, y0};
        r.hi_ = {x1, y1};
        return r;
    }

    static Region ball(Point center, double radius) {
        require(radius >= 0.0, ErrorKind::invalid_argument, "ball radius must be non-negative");
        Region r(Kind::ball);
        r.lo_ = center;
        r.radius_ = radius;
        return r;
    }

    static Region union_of(std::vector<Region> parts) {
        Region r(Kind::union_of);
        r.parts_ = std::make_shared<std::vector<Region>>(std::move(parts));
        return r;
    }

    Kind kind() const { return kind_; }
    Point lower() const { return lo_; }
    Point upper() const { return hi_; }
    Point center() const { return lo_; }
    double radius() const { return radius_; }

    // Window distance from p to the region (0 inside).
    double distance(Point p, const Window& w) const {
        switch (kind_) {
            case Kind::whole:
                return 0.0;
            case Kind::rect: {
                double dx = axis_gap(p.x, lo_.x, hi_.x, w);
                double dy = axis_gap(p.y, lo_.y, hi_.y, w);
                return std::hypot(dx, dy);
            }
            case Kind::ball:
                return std::max(0.0, w.distance(p, lo_) - radius_);
            case Kind::union_of: {
                double best = std::numeric_limits<double>::infinity();
                for (const Region& r : *parts_) best = std::min(best, r.distance(p, w));
                return best;
            }
        }
        return 0.0;
    }

    bool contains(Point p, const Window& w) const { return distance(p, w) <= 0.0; }

    double area(const Window& w) const {
        switch (kind_) {
            case Kind::whole: return w.area();
            case Kind::rect: return (hi_.x - lo_.x) * (hi_.y - lo_.y);
            case Kind::ball: return M_PI * radius_ * radius_;
            case Kind::union_of: break;
        }
        throw Error(ErrorKind::invalid_argument, "area of a region union is not supported");
    }

    // Axis-aligned box (possibly extending past the window on the torus).
    Region bounding_rect(const Window& w) const {
        switch (kind_) {
            case Kind::whole: return rect(0.0, 0.0, w.side(), w.side());
            case Kind::rect: return *this;
            case Kind::ball:
                return rect(lo_.x - radius_, lo_.y - radius_, lo_.x + radius_, lo_.y + radius_);
            case Kind::union_of: break;
        }
        throw Error(ErrorKind::invalid_argument, "bounding box of a region union is not supported");
    }

    // The region shrunk by `margin` (rectangles and the whole window only).
    Region eroded(double margin, const Window& w) const {
        Region box = bounding_rect(w);
        require(kind_ == Kind::whole || kind_ == Kind::rect, ErrorKind::invalid_argument,
                "only rectangular regions can be eroded");
        double x0 = box.lo_.x + margin, y0 = box.lo_.y + margin;
        double x1 = box.hi_.x - margin, y1 = box.hi_.y - margin;
        require(x1 > x0 && y1 > y0, ErrorKind::invalid_argument,
                "region is empty after erosion by the interaction range");
        return rect(x0, y0, x1, y1);
    }

private:
    explicit Region(Kind k) : kind_(k) {}

    static double interval_gap(double v, double a, double b) {
        if (v < a) return a - v;
        if (v > b) return v - b;
        return 0.0;
    }

    static double axis_gap(double v, double a, double b, const Window& w) {
        if (!w.is_torus()) return interval_gap(v, a, b);
        double L = w.side();
        if (b - a >= L) return 0.0;
        double best = std::numeric_limits<double>::infinity();
        for (int k = -2; k <= 2; ++k) best = std::min(best, interval_gap(v + k * L, a, b));
        return best;
    }

    Kind kind_;
    Point lo_{};
    Point hi_{};
    double radius_ = 0.0;
    std::shared_ptr<const std::vector<Region>> parts_;
};

}  // namespace nhg
