#pragma once

#include "geometry.hpp"
#include "region.hpp"
#include "spatial_index.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

namespace nhg {

using PointId = std::uint64_t;

struct Insert {
    Point point;
};
struct Erase {
    PointId id;
};
using Edit = std::variant<Insert, Erase>;

// Finite set of labelled points in a window. Values are immutable; edits
// return a new configuration and share nothing mutable with the original.
class PointConfiguration {
public:
    explicit PointConfiguration(Window window = Window{}) : data_(std::make_shared<Data>(window)) {}

    static PointConfiguration from_points(Window window, std::span<const Point> points) {
        auto data = std::make_shared<Data>(window);
        data->points.reserve(points.size());
        data->ids.reserve(points.size());
        for (Point p : points) {
            require(window.contains(p), ErrorKind::outside_window, "point lies outside the window");
            data->points.push_back(p);
            data->ids.push_back(data->next_id++);
        }
        PointConfiguration cfg(std::move(data));
        cfg.check_no_duplicates();
        return cfg;
    }

    const Window& window() const { return data_->window; }
    std::size_t size() const { return data_->points.size(); }
    bool empty() const { return data_->points.empty(); }
    std::span<const Point> points() const { return data_->points; }
    std::span<const PointId> ids() const { return data_->ids; }
    Point point_at(std::size_t index) const { return data_->points[index]; }
    PointId id_at(std::size_t index) const { return data_->ids[index]; }
    PointId next_id() const { return data_->next_id; }

    // Ids are kept in increasing order, so lookup is a binary search.
    std::optional<std::size_t> index_of(PointId id) const {
        auto it = std::lower_bound(data_->ids.begin(), data_->ids.end(), id);
        if (it == data_->ids.end() || *it != id) return std::nullopt;
        return static_cast<std::size_t>(it - data_->ids.begin());
    }

    bool contains_id(PointId id) const { return index_of(id).has_value(); }

    Point point(PointId id) const {
        auto i = index_of(id);
        require(i.has_value(), ErrorKind::unknown_id, "no point with id " + std::to_string(id));
        return data_->points[*i];
    }

    const GridIndex& index() const {
        std::call_once(data_->index_once, [this] {
            data_->index = std::make_unique<GridIndex>(data_->window, data_->points);
        });
        return *data_->index;
    }

    PointConfiguration edit(const Edit& e) const {
        if (const auto* ins = std::get_if<Insert>(&e)) return inserted(ins->point);
        return erased(std::get<Erase>(e).id);
    }

    PointConfiguration inserted(Point p) const {
        Point q = window().wrap(p);
        require(window().contains(q), ErrorKind::outside_window, "inserted point lies outside the window");
        bool dup = false;
        index().for_each_within(q, 0.0, [&](std::size_t, double) { dup = true; });
        require(!dup, ErrorKind::duplicate_point, "a point already exists at this location");
        auto data = std::make_shared<Data>(window());
        data->points = data_->points;
        data->ids = data_->ids;
        data->points.push_back(q);
        data->ids.push_back(data_->next_id);
        data->next_id = data_->next_id + 1;
        return PointConfiguration(std::move(data));
    }

    PointConfiguration erased(PointId id) const { return erased(std::span<const PointId>(&id, 1)); }

    // Removes every listed id and then appends `added` (in order, with fresh ids).
    PointConfiguration replaced(std::span<const PointId> removed, std::span<const Point> added) const {
        PointConfiguration out = removed.empty() ? *this : erased(removed);
        if (added.empty()) return out;
        auto data = std::make_shared<Data>(window());
        data->points = out.data_->points;
        data->ids = out.data_->ids;
        data->next_id = data_->next_id;
        for (Point p : added) {
            Point q = window().wrap(p);
            require(window().contains(q), ErrorKind::outside_window, "inserted point lies outside the window");
            data->points.push_back(q);
            data->ids.push_back(data->next_id++);
        }
        PointConfiguration cfg(std::move(data));
        cfg.check_no_duplicates();
        return cfg;
    }

    PointConfiguration erased(std::span<const PointId> removed) const {
        std::vector<PointId> drop(removed.begin(), removed.end());
        std::sort(drop.begin(), drop.end());
        for (PointId id : drop)
            require(contains_id(id), ErrorKind::unknown_id, "no point with id " + std::to_string(id));
        auto data = std::make_shared<Data>(window());
        data->next_id = data_->next_id;
        data->points.reserve(size());
        data->ids.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) {
            if (std::binary_search(drop.begin(), drop.end(), data_->ids[i])) continue;
            data->points.push_back(data_->points[i]);
            data->ids.push_back(data_->ids[i]);
        }
        return PointConfiguration(std::move(data));
    }

    // Same points and ids, viewed in another window (used to reinterpret a
    // pattern with a different boundary convention).
    PointConfiguration with_window(Window w) const {
        auto data = std::make_shared<Data>(w);
        data->points = data_->points;
        data->ids = data_->ids;
        data->next_id = data_->next_id;
        for (Point p : data->points)
            require(w.contains(p), ErrorKind::outside_window, "point lies outside the window");
        return PointConfiguration(std::move(data));
    }

    // Deterministic 64-bit FNV-1a digest of window, ids and coordinate bits.
    std::uint64_t fingerprint() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int b = 0; b < 8; ++b) {
                h ^= (v >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        auto bits = [](double d) {
            std::uint64_t u;
            std::memcpy(&u, &d, sizeof u);
            return u;
        };
        mix(bits(window().side()));
        mix(window().is_torus() ? 1u : 0u);
        for (std::size_t i = 0; i < size(); ++i) {
            mix(data_->ids[i]);
            mix(bits(data_->points[i].x));
            mix(bits(data_->points[i].y));
        }
        return h;
    }

    // Equality of labelled point sets (window, ids and coordinates).
    friend bool operator==(const PointConfiguration& a, const PointConfiguration& b) {
        return a.window() == b.window() && a.data_->ids == b.data_->ids &&
               a.data_->points == b.data_->points;
    }

private:
    struct Data {
        explicit Data(Window w) : window(w) {}
        Window window;
        std::vector<Point> points;
        std::vector<PointId> ids;
        PointId next_id = 0;
        std::once_flag index_once;
        std::unique_ptr<GridIndex> index;
    };

    explicit PointConfiguration(std::shared_ptr<Data> data) : data_(std::move(data)) {}

    void check_no_duplicates() const {
        std::vector<Point> sorted(data_->points.begin(), data_->points.end());
        std::sort(sorted.begin(), sorted.end(), lex_less);
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
                ErrorKind::duplicate_point, "configuration contains two points at the same location");
    }

    std::shared_ptr<Data> data_;
};

// Number of points in the closed ball B(center, radius), window metric.
inline std::size_t count_in_ball(const PointConfiguration& cfg, Point center, double radius) {
    std::size_t n = 0;
    cfg.index().for_each_within(center, radius, [&](std::size_t, double) { ++n; });
    return n;
}

inline PointConfiguration restrict_to(const PointConfiguration& cfg, const Region& region, bool inside = true) {
    std::vector<PointId> drop;
    for (std::size_t i = 0; i < cfg.size(); ++i)
        if (region.contains(cfg.point_at(i), cfg.window()) != inside) drop.push_back(cfg.id_at(i));
    return cfg.erased(drop);
}

// gamma_Lambda: the points of cfg lying in the region.
inline PointConfiguration restrict(const PointConfiguration& cfg, const Region& region) {
    return restrict_to(cfg, region, true);
}

// The complementary part, so restrict(c, r) and restrict_outside(c, r) partition c.
inline PointConfiguration restrict_outside(const PointConfiguration& cfg, const Region& region) {
    return restrict_to(cfg, region, false);
}

struct Neighbor {
    PointId id;
    Point point;
    double distance;
};
using NeighborList = std::vector<Neighbor>;

// A configuration seen through a pending change: `removed` ids are hidden and
// `added` points (with provisional ids next_id, next_id+1, ...) are visible.
class ConfigView {
public:
    ConfigView(const PointConfiguration& base, std::span<const PointId> removed = {},
               std::span<const Point> added = {})
        : base_(&base), removed_(removed.begin(), removed.end()), added_(added.begin(), added.end()) {
        std::sort(removed_.begin(), removed_.end());
    }

    const PointConfiguration& base() const { return *base_; }
    const Window& window() const { return base_->window(); }
    std::span<const Point> added() const { return added_; }
    PointId added_id(std::size_t j) const { return base_->next_id() + j; }
    bool is_removed(PointId id) const { return std::binary_search(removed_.begin(), removed_.end(), id); }
    std::size_t size() const { return base_->size() - removed_.size() + added_.size(); }

    // Calls f(id, point, distance) for visible points within the closed ball.
    template <class F>
    void for_each_within(Point c, double radius, F&& f) const {
        const Window& w = window();
        base_->index().for_each_within(c, radius, [&](std::size_t i, double d) {
            PointId id = base_->id_at(i);
            if (!is_removed(id)) f(id, base_->point_at(i), d);
        });
        for (std::size_t j = 0; j < added_.size(); ++j) {
            double d = w.distance(c, added_[j]);
            if (d <= radius) f(added_id(j), added_[j], d);
        }
    }

    std::size_t count_in_ball(Point c, double radius) const {
        std::size_t n = 0;
        for_each_within(c, radius, [&](PointId, Point, double) { ++n; });
        return n;
    }

    // k nearest visible points to x, excluding `self` and anything located
    // exactly at x; ties are broken by id. Returns fewer than k when the view
    // is too small.
    NeighborList k_nearest(Point x, std::size_t k, std::optional<PointId> self = std::nullopt) const {
        NeighborList out;
        if (k == 0) return out;
        const Window& w = window();
        double n = std::max<double>(1.0, static_cast<double>(size()));
        double radius = std::sqrt(w.area() * static_cast<double>(k + 1) / n);
        double limit = w.diameter();
        auto by_distance = [](const Neighbor& a, const Neighbor& b) {
            return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
        };
        for (;;) {
            out.clear();
            bool last = radius >= limit;
            double r = last ? limit : radius;
            for_each_within(x, r, [&](PointId id, Point p, double d) {
                if ((self && id == *self) || d == 0.0) return;
                out.push_back({id, p, d});
            });
            if (out.size() >= k || last) break;
            radius *= 2.0;
        }
        std::size_t keep = std::min(k, out.size());
        std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(keep), out.end(), by_distance);
        out.resize(keep);
        return out;
    }

private:
    const PointConfiguration* base_;
    std::vector<PointId> removed_;
    std::vector<Point> added_;
};

// The k nearest points of cfg to x (x itself is never its own neighbour).
inline NeighborList k_nearest(Point x, const PointConfiguration& cfg, std::size_t k) {
    NeighborList out = ConfigView(cfg).k_nearest(x, k);
    require(out.size() == k, ErrorKind::not_enough_points,
            "configuration has fewer than " + std::to_string(k) + " other points");
    return out;
}

}  // namespace nhg
