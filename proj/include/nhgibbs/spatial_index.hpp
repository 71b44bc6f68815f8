#pragma once

#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace nhg {

// Uniform bucket grid over the window. Indices refer to positions in the
// point span the grid was built from.
class GridIndex {
public:
    GridIndex(const Window& window, std::span<const Point> points, double cell_hint = 0.0)
        : window_(window), points_(points) {
        double side = window.side();
        if (!(cell_hint > 0.0)) {
            double n = std::max<double>(1.0, static_cast<double>(points.size()));
            cell_hint = side / std::sqrt(n);
        }
        double cells = std::floor(side / cell_hint);
        cells_ = static_cast<int>(std::clamp(cells, 1.0, 512.0));
        cell_ = side / cells_;
        std::vector<int> counts(static_cast<std::size_t>(cells_) * cells_ + 1, 0);
        std::vector<int> owner(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) {
            owner[i] = cell_of(points[i]);
            ++counts[owner[i] + 1];
        }
        for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
        start_ = counts;
        slots_.resize(points.size());
        for (std::size_t i = 0; i < points.size(); ++i) slots_[counts[owner[i]]++] = static_cast<int>(i);
    }

    std::size_t size() const { return points_.size(); }

    // Calls f(index, distance) for every indexed point at window distance <= radius from c.
    template <class F>
    void for_each_within(Point c, double radius, F&& f) const {
        if (points_.empty()) return;
        int reach = static_cast<int>(std::ceil(radius / cell_));
        int cx = axis_cell(c.x), cy = axis_cell(c.y);
        if (window_.is_torus()) {
            if (2 * reach + 1 >= cells_) {
                visit_all(c, radius, f);
                return;
            }
            for (int dy = -reach; dy <= reach; ++dy) {
                int yy = ((cy + dy) % cells_ + cells_) % cells_;
                for (int dx = -reach; dx <= reach; ++dx) {
                    int xx = ((cx + dx) % cells_ + cells_) % cells_;
                    visit_cell(xx + yy * cells_, c, radius, f);
                }
            }
        } else {
            int x0 = std::max(0, cx - reach), x1 = std::min(cells_ - 1, cx + reach);
            int y0 = std::max(0, cy - reach), y1 = std::min(cells_ - 1, cy + reach);
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) visit_cell(xx + yy * cells_, c, radius, f);
        }
    }

private:
    int axis_cell(double v) const {
        int i = static_cast<int>(std::floor(v / cell_));
        return std::clamp(i, 0, cells_ - 1);
    }

    int cell_of(Point p) const { return axis_cell(p.x) + axis_cell(p.y) * cells_; }

    template <class F>
    void visit_cell(int cell, Point c, double radius, F& f) const {
        for (int s = start_[cell]; s < start_[cell + 1]; ++s) {
            int i = slots_[s];
            double d = window_.distance(c, points_[i]);
            if (d <= radius) f(static_cast<std::size_t>(i), d);
        }
    }

    template <class F>
    void visit_all(Point c, double radius, F& f) const {
        for (std::size_t i = 0; i < points_.size(); ++i) {
            double d = window_.distance(c, points_[i]);
            if (d <= radius) f(i, d);
        }
    }

    Window window_;
    std::span<const Point> points_;
    int cells_ = 1;
    double cell_ = 1.0;
    std::vector<int> start_;
    std::vector<int> slots_;
};

}  // namespace nhg
