#pragma once

#include "config.hpp"
#include "delaunay.hpp"
#include "geometry.hpp"
#include "region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace nhg {

struct ModelParams {
    double alpha = 1.0;
    std::vector<double> theta;
};

// Value in R ∪ {+inf}.
class ExtendedEnergy {
public:
    static ExtendedEnergy finite(double v) { return ExtendedEnergy(v); }
    static ExtendedEnergy infinite() { return ExtendedEnergy(std::numeric_limits<double>::infinity()); }

    bool is_finite() const { return std::isfinite(value_); }
    bool is_infinite() const { return !is_finite(); }
    double value() const { return value_; }

    friend bool operator==(const ExtendedEnergy&, const ExtendedEnergy&) = default;

private:
    explicit ExtendedEnergy(double v) : value_(v) {}
    double value_;
};

// Sufficient statistics of an energy (or energy difference): the energy is
// theta . t when feasible, +inf otherwise.
struct LocalStatistics {
    std::optional<std::vector<double>> t;

    bool feasible() const { return t.has_value(); }
    static LocalStatistics infeasible() { return {}; }

    ExtendedEnergy energy(const std::vector<double>& theta) const {
        if (!t) return ExtendedEnergy::infinite();
        double e = 0.0;
        for (std::size_t i = 0; i < t->size(); ++i) e += theta[i] * (*t)[i];
        return ExtendedEnergy::finite(e);
    }
};

// A pending modification of a configuration: remove some ids, then add points.
struct Change {
    std::vector<PointId> removed;
    std::vector<Point> added;
};

struct HardcoreStatistic {
    double value = 0.0;
    bool attained = false;
};

struct HardSphereSpec {
    std::vector<double> steps;  // r_1 < ... < r_p
};

struct DelaunaySpec {
    double min_edge = 0.5;  // r
};

// Built-in pair potentials for the kNN model.
struct Phi {
    enum class Family { constant, trunclin, step };
    Family family = Family::constant;
    // constant: {value}; trunclin: {c} for max(0, 1 - u/c); step: {radius, value}
    std::vector<double> params{1.0};

    double operator()(double u) const {
        switch (family) {
            case Family::constant: return params[0];
            case Family::trunclin: return std::max(0.0, 1.0 - u / params[0]);
            case Family::step: return u <= params[0] ? params[1] : 0.0;
        }
        return 0.0;
    }

    double bound() const {
        switch (family) {
            case Family::constant: return std::fabs(params[0]);
            case Family::trunclin: return 1.0;
            case Family::step: return std::fabs(params[1]);
        }
        return 0.0;
    }

    void validate() const {
        switch (family) {
            case Family::constant:
                require(params.size() == 1 && std::isfinite(params[0]) && params[0] != 0.0,
                        ErrorKind::invalid_argument, "constant phi needs one non-zero value");
                break;
            case Family::trunclin:
                require(params.size() == 1 && params[0] > 0.0 && std::isfinite(params[0]),
                        ErrorKind::invalid_argument, "trunclin phi needs a positive cut-off c");
                break;
            case Family::step:
                require(params.size() == 2 && params[0] > 0.0 && std::isfinite(params[1]) && params[1] != 0.0,
                        ErrorKind::invalid_argument, "step phi needs a positive radius and a non-zero value");
                break;
        }
    }

    std::string name() const {
        switch (family) {
            case Family::constant: return "const";
            case Family::trunclin: return "trunclin";
            case Family::step: return "step";
        }
        return "";
    }
};

struct KnnSpec {
    std::size_t k = 2;
    Phi phi;
};

struct PoissonSpec {};

namespace detail {

inline std::vector<double> zeros(std::size_t p) { return std::vector<double>(p, 0.0); }

// ---------------------------------------------------------------- hard sphere

struct HardSphere {
    const HardSphereSpec& spec;
    double alpha;

    double hardcore() const { return 1.0 / alpha; }
    double range() const { return hardcore() + spec.steps.back(); }

    // -1: hardcore overlap, p: no interaction, otherwise the step index.
    int classify(double d) const {
        double h = hardcore();
        if (d <= h) return -1;
        for (std::size_t i = 0; i < spec.steps.size(); ++i)
            if (d <= h + spec.steps[i]) return static_cast<int>(i);
        return static_cast<int>(spec.steps.size());
    }

    LocalStatistics window(const PointConfiguration& cfg, const Region& region) const {
        std::vector<double> t = zeros(spec.steps.size());
        const Window& w = cfg.window();
        bool ok = true;
        for (std::size_t i = 0; i < cfg.size() && ok; ++i) {
            Point pi = cfg.point_at(i);
            PointId idi = cfg.id_at(i);
            bool in_i = region.contains(pi, w);
            cfg.index().for_each_within(pi, range(), [&](std::size_t j, double d) {
                if (cfg.id_at(j) <= idi) return;
                if (!in_i && !region.contains(cfg.point_at(j), w)) return;
                int c = classify(d);
                if (c < 0)
                    ok = false;
                else if (c < static_cast<int>(t.size()))
                    t[c] += 1.0;
            });
        }
        if (!ok) return LocalStatistics::infeasible();
        return {std::move(t)};
    }

    LocalStatistics change(const PointConfiguration& cfg, const Change& ch) const {
        std::vector<double> t = zeros(spec.steps.size());
        ConfigView after(cfg, ch.removed, ch.added);
        bool ok = true;
        for (std::size_t j = 0; j < ch.added.size() && ok; ++j) {
            PointId self = after.added_id(j);
            after.for_each_within(ch.added[j], range(), [&](PointId id, Point, double d) {
                if (id >= self && id >= cfg.next_id()) return;  // added-added pairs counted once
                int c = classify(d);
                if (c < 0)
                    ok = false;
                else if (c < static_cast<int>(t.size()))
                    t[c] += 1.0;
            });
        }
        if (!ok) return LocalStatistics::infeasible();
        std::vector<PointId> removed(ch.removed.begin(), ch.removed.end());
        std::sort(removed.begin(), removed.end());
        for (PointId r : removed) {
            Point pr = cfg.point(r);
            cfg.index().for_each_within(pr, range(), [&](std::size_t i, double d) {
                PointId id = cfg.id_at(i);
                if (id == r) return;
                if (id < r && std::binary_search(removed.begin(), removed.end(), id)) return;
                int c = classify(d);
                if (c >= 0 && c < static_cast<int>(t.size())) t[c] -= 1.0;
            });
        }
        return {std::move(t)};
    }

    static std::optional<HardcoreStatistic> statistic(const PointConfiguration& cfg, const Region& region) {
        double best = std::numeric_limits<double>::infinity();
        ConfigView view(cfg);
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            if (!region.contains(cfg.point_at(i), cfg.window())) continue;
            NeighborList nn = view.k_nearest(cfg.point_at(i), 1, cfg.id_at(i));
            if (!nn.empty()) best = std::min(best, nn[0].distance);
        }
        if (!std::isfinite(best)) return std::nullopt;
        return HardcoreStatistic{1.0 / best, false};
    }
};

// ------------------------------------------------------------------ Delaunay

struct DelaunayModel {
    const DelaunaySpec& spec;
    double alpha;

    bool admissible(const Triangle& t) const { return t.radius < alpha && t.min_edge > spec.min_edge; }

    std::optional<std::vector<Triangle>> triangles(const PointConfiguration& cfg) const {
        try {
            return delaunay_triangulate(cfg).triangles;
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::torus_too_sparse) throw;
            require(alpha <= 0.25 * cfg.window().side(), ErrorKind::torus_too_sparse,
                    "window too small relative to alpha for a periodic triangulation");
            return std::nullopt;
        }
    }

    LocalStatistics window(const PointConfiguration& cfg, const Region& region) const {
        if (cfg.window().is_torus() && cfg.empty()) return {zeros(1)};
        auto tris = triangles(cfg);
        if (!tris) return LocalStatistics::infeasible();
        double per = 0.0;
        for (const Triangle& t : *tris) {
            if (!(region.distance(t.center, cfg.window()) < t.radius)) continue;
            if (!admissible(t)) return LocalStatistics::infeasible();
            per += t.perimeter;
        }
        return {std::vector<double>{per}};
    }

    // Triangles of `after` not in `before` must all be admissible; the
    // statistic is the perimeter they add minus the perimeter they replace.
    LocalStatistics diff(std::vector<Triangle> before, std::vector<Triangle> after) const {
        auto by_ids = [](const Triangle& a, const Triangle& b) { return a.ids < b.ids; };
        std::sort(before.begin(), before.end(), by_ids);
        std::sort(after.begin(), after.end(), by_ids);
        double per = 0.0;
        std::size_t i = 0, j = 0;
        while (i < before.size() || j < after.size()) {
            if (j == after.size() || (i < before.size() && before[i].ids < after[j].ids)) {
                per -= before[i++].perimeter;
            } else if (i == before.size() || after[j].ids < before[i].ids) {
                if (!admissible(after[j])) return LocalStatistics::infeasible();
                per += after[j++].perimeter;
            } else {
                ++i;
                ++j;
            }
        }
        return {std::vector<double>{per}};
    }

    LocalStatistics change(const PointConfiguration& cfg, const Change& ch) const {
        const Window& w = cfg.window();
        if (!w.is_torus()) {
            PointConfiguration next = cfg.replaced(ch.removed, ch.added);
            return diff(triangulate_all(cfg), triangulate_all(next));
        }
        std::vector<Point> centers;
        for (PointId r : ch.removed) centers.push_back(cfg.point(r));
        for (Point a : ch.added) centers.push_back(w.wrap(a));
        if (centers.empty()) return {zeros(1)};
        Point ref = centers.front();
        double spread = 0.0;
        for (Point c : centers) spread = std::max(spread, w.distance(ref, c));
        double reach = 2.1 * alpha;
        if (cfg.empty() || reach + spread >= 0.45 * w.side()) return full_change(cfg, ch);

        // Local retriangulation. On a feasible torus configuration every
        // location lies within alpha of a point, so triangles affected by the
        // change are decided by the points within 2 alpha of it.
        std::set<PointId> removed(ch.removed.begin(), ch.removed.end());
        std::vector<PointId> near_ids;
        for (Point c : centers)
            cfg.index().for_each_within(c, reach, [&](std::size_t i, double) { near_ids.push_back(cfg.id_at(i)); });
        std::sort(near_ids.begin(), near_ids.end());
        near_ids.erase(std::unique(near_ids.begin(), near_ids.end()), near_ids.end());

        std::vector<Point> before_pts, after_pts;
        std::vector<PointId> before_ids, after_ids;
        for (PointId id : near_ids) {
            Point p = w.unwrap_near(cfg.point(id), ref);
            before_pts.push_back(p);
            before_ids.push_back(id);
            if (!removed.count(id)) {
                after_pts.push_back(p);
                after_ids.push_back(id);
            }
        }
        for (std::size_t j = 0; j < ch.added.size(); ++j) {
            after_pts.push_back(w.unwrap_near(w.wrap(ch.added[j]), ref));
            after_ids.push_back(cfg.next_id() + j);
        }
        return diff(detail::triangulate_points(before_pts, before_ids),
                    detail::triangulate_points(after_pts, after_ids));
    }

    LocalStatistics full_change(const PointConfiguration& cfg, const Change& ch) const {
        PointConfiguration next = cfg.replaced(ch.removed, ch.added);
        LocalStatistics a = window(next, Region::whole());
        if (!a.feasible()) return a;
        LocalStatistics b = window(cfg, Region::whole());
        if (!b.feasible()) return b;
        return {std::vector<double>{(*a.t)[0] - (*b.t)[0]}};
    }

    static std::vector<Triangle> triangulate_all(const PointConfiguration& cfg) {
        return detail::triangulate_points(cfg.points(), cfg.ids());
    }

    std::optional<HardcoreStatistic> statistic(const PointConfiguration& cfg, const Region& region) const {
        std::vector<Triangle> tris;
        try {
            tris = delaunay_triangulate(cfg).triangles;
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::torus_too_sparse) return std::nullopt;
            throw;
        }
        double best = -1.0;
        for (const Triangle& t : tris) {
            if (!(region.distance(t.center, cfg.window()) < t.radius)) continue;
            if (t.min_edge <= spec.min_edge) return std::nullopt;
            best = std::max(best, t.radius);
        }
        if (best < 0.0) return std::nullopt;
        return HardcoreStatistic{best, false};
    }
};

// ----------------------------------------------------------------------- kNN

struct Knn {
    const KnnSpec& spec;
    double alpha;

    // Energy term of a point x of the view: +inf (nullopt) unless the closed
    // alpha-ball around x holds at least k+1 points counting x itself.
    std::optional<double> term(const ConfigView& view, Point x, PointId self) const {
        if (view.count_in_ball(x, alpha) <= spec.k) return std::nullopt;
        double s = 0.0;
        for (const Neighbor& nb : view.k_nearest(x, spec.k, self)) s += spec.phi(nb.distance);
        return s;
    }

    LocalStatistics window(const PointConfiguration& cfg, const Region& region) const {
        ConfigView view(cfg);
        double s = 0.0;
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            Point x = cfg.point_at(i);
            if (!(region.distance(x, cfg.window()) < alpha)) continue;
            auto v = term(view, x, cfg.id_at(i));
            if (!v) return LocalStatistics::infeasible();
            s += *v;
        }
        return {std::vector<double>{s}};
    }

    LocalStatistics change(const PointConfiguration& cfg, const Change& ch) const {
        ConfigView before(cfg);
        ConfigView after(cfg, ch.removed, ch.added);
        std::vector<Point> centers;
        for (PointId r : ch.removed) centers.push_back(cfg.point(r));
        for (Point a : ch.added) centers.push_back(cfg.window().wrap(a));

        std::vector<std::pair<PointId, Point>> hit_after, hit_before;
        for (Point c : centers) {
            after.for_each_within(c, alpha, [&](PointId id, Point p, double) { hit_after.push_back({id, p}); });
            before.for_each_within(c, alpha, [&](PointId id, Point p, double) { hit_before.push_back({id, p}); });
        }
        for (std::size_t j = 0; j < ch.added.size(); ++j)
            hit_after.push_back({after.added_id(j), cfg.window().wrap(ch.added[j])});
        for (PointId r : ch.removed) hit_before.push_back({r, cfg.point(r)});
        auto dedupe = [](std::vector<std::pair<PointId, Point>>& v) {
            std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
            v.erase(std::unique(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
                    v.end());
        };
        dedupe(hit_after);
        dedupe(hit_before);

        double s = 0.0;
        for (const auto& [id, p] : hit_after) {
            auto v = term(after, p, id);
            if (!v) return LocalStatistics::infeasible();
            s += *v;
        }
        for (const auto& [id, p] : hit_before) {
            auto v = term(before, p, id);
            if (v) s -= *v;
        }
        return {std::vector<double>{s}};
    }

    // inf{alpha : energy finite}. The energy is infinite exactly when alpha
    // falls in some open interval (dist(x, region), d_k(x)); the threshold is
    // the right end of the union of those intervals that starts at 0.
    std::optional<HardcoreStatistic> statistic(const PointConfiguration& cfg, const Region& region) const {
        if (cfg.size() <= spec.k) return std::nullopt;
        ConfigView view(cfg);
        std::vector<std::pair<double, double>> bad;
        for (std::size_t i = 0; i < cfg.size(); ++i) {
            Point x = cfg.point_at(i);
            NeighborList nn = view.k_nearest(x, spec.k, cfg.id_at(i));
            double a = region.distance(x, cfg.window());
            double b = nn.back().distance;
            if (b > a) bad.push_back({a, b});
        }
        std::sort(bad.begin(), bad.end());
        if (bad.empty() || bad.front().first > 0.0) return std::nullopt;
        double cur = 0.0;
        for (const auto& [a, b] : bad) {
            if (a > 0.0 && a >= cur) break;
            cur = std::max(cur, b);
        }
        return HardcoreStatistic{cur, true};
    }
};

}  // namespace detail

// The energy family: one of the four built-in models.
class Model {
public:
    using Spec = std::variant<HardSphereSpec, DelaunaySpec, KnnSpec, PoissonSpec>;

    Model(Spec spec) : spec_(std::move(spec)) { validate_spec(); }  // NOLINT implicit

    static Model hard_sphere(std::vector<double> steps) { return Model(HardSphereSpec{std::move(steps)}); }
    static Model delaunay(double min_edge) { return Model(DelaunaySpec{min_edge}); }
    static Model knn(std::size_t k, Phi phi) { return Model(KnnSpec{k, std::move(phi)}); }
    static Model poisson() { return Model(PoissonSpec{}); }

    const Spec& spec() const { return spec_; }
    bool is_hard_sphere() const { return std::holds_alternative<HardSphereSpec>(spec_); }
    bool is_delaunay() const { return std::holds_alternative<DelaunaySpec>(spec_); }
    bool is_knn() const { return std::holds_alternative<KnnSpec>(spec_); }
    bool is_poisson() const { return std::holds_alternative<PoissonSpec>(spec_); }

    std::string name() const {
        static const char* names[] = {"hardsphere", "delaunay", "knn", "poisson"};
        return names[spec_.index()];
    }

    // Number of interaction parameters p.
    std::size_t dimension() const {
        if (const auto* hs = std::get_if<HardSphereSpec>(&spec_)) return hs->steps.size();
        return is_poisson() ? 0 : 1;
    }

    double interaction_range(double alpha) const {
        if (const auto* hs = std::get_if<HardSphereSpec>(&spec_)) return 1.0 / alpha + hs->steps.back();
        if (is_poisson()) return 0.0;
        return 2.0 * alpha;
    }

    void validate(const ModelParams& params) const {
        require(std::isfinite(params.alpha) && params.alpha > 0.0, ErrorKind::invalid_argument,
                "alpha must be positive");
        require(params.theta.size() == dimension(), ErrorKind::invalid_argument,
                "theta must have " + std::to_string(dimension()) + " components for model " + name());
        for (double th : params.theta)
            require(std::isfinite(th), ErrorKind::invalid_argument, "theta components must be finite");
        if (const auto* d = std::get_if<DelaunaySpec>(&spec_))
            require(params.alpha > d->min_edge, ErrorKind::invalid_argument,
                    "Delaunay model requires alpha > min_edge");
    }

    // Statistics of H restricted to the region (sum of the terms meeting it).
    LocalStatistics window_statistics(const PointConfiguration& cfg, double alpha, const Region& region) const {
        check_window(cfg.window(), alpha);
        return std::visit(
            [&](const auto& s) -> LocalStatistics {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, HardSphereSpec>)
                    return detail::HardSphere{s, alpha}.window(cfg, region);
                else if constexpr (std::is_same_v<S, DelaunaySpec>)
                    return detail::DelaunayModel{s, alpha}.window(cfg, region);
                else if constexpr (std::is_same_v<S, KnnSpec>)
                    return detail::Knn{s, alpha}.window(cfg, region);
                else
                    return {std::vector<double>{}};
            },
            spec_);
    }

    // Statistics of H(cfg after change) - H(cfg), computed locally around the
    // changed points. Precondition (unchecked): cfg has finite energy.
    LocalStatistics change_statistics(const PointConfiguration& cfg, double alpha, const Change& ch) const {
        return std::visit(
            [&](const auto& s) -> LocalStatistics {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, HardSphereSpec>)
                    return detail::HardSphere{s, alpha}.change(cfg, ch);
                else if constexpr (std::is_same_v<S, DelaunaySpec>)
                    return detail::DelaunayModel{s, alpha}.change(cfg, ch);
                else if constexpr (std::is_same_v<S, KnnSpec>)
                    return detail::Knn{s, alpha}.change(cfg, ch);
                else
                    return {std::vector<double>{}};
            },
            spec_);
    }

    std::optional<HardcoreStatistic> hardcore_statistic(const PointConfiguration& cfg, const Region& region) const {
        return std::visit(
            [&](const auto& s) -> std::optional<HardcoreStatistic> {
                using S = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<S, HardSphereSpec>)
                    return detail::HardSphere::statistic(cfg, region);
                else if constexpr (std::is_same_v<S, DelaunaySpec>)
                    return detail::DelaunayModel{s, 1.0}.statistic(cfg, region);
                else if constexpr (std::is_same_v<S, KnnSpec>)
                    return detail::Knn{s, 1.0}.statistic(cfg, region);
                else
                    return std::nullopt;
            },
            spec_);
    }

    // Periodic evaluation needs every interaction to be seen through one image.
    void check_window(const Window& w, double alpha) const {
        if (!w.is_torus()) return;
        require(interaction_range(alpha) < 0.5 * w.side(), ErrorKind::invalid_argument,
                "torus side must exceed twice the interaction range");
    }

private:
    void validate_spec() const {
        if (const auto* hs = std::get_if<HardSphereSpec>(&spec_)) {
            require(!hs->steps.empty(), ErrorKind::invalid_argument, "hard-sphere model needs at least one step");
            for (std::size_t i = 0; i < hs->steps.size(); ++i)
                require(hs->steps[i] > (i ? hs->steps[i - 1] : 0.0) && std::isfinite(hs->steps[i]),
                        ErrorKind::invalid_argument, "step radii must satisfy 0 < r_1 < ... < r_p");
        } else if (const auto* d = std::get_if<DelaunaySpec>(&spec_)) {
            require(d->min_edge > 0.0 && std::isfinite(d->min_edge), ErrorKind::invalid_argument,
                    "min_edge must be positive");
        } else if (const auto* k = std::get_if<KnnSpec>(&spec_)) {
            require(k->k >= 1, ErrorKind::invalid_argument, "kNN model needs k >= 1");
            k->phi.validate();
        }
    }

    Spec spec_;
};

inline double interaction_range(const Model& model, double alpha) { return model.interaction_range(alpha); }

inline ExtendedEnergy window_energy(const Model& model, const ModelParams& params, const PointConfiguration& cfg,
                                    const Region& region = Region::whole()) {
    model.validate(params);
    return model.window_statistics(cfg, params.alpha, region).energy(params.theta);
}

inline bool is_feasible(const Model& model, double alpha, const PointConfiguration& cfg,
                        const Region& region = Region::whole()) {
    return model.window_statistics(cfg, alpha, region).feasible();
}

inline void require_feasible(const Model& model, double alpha, const PointConfiguration& cfg) {
    require(is_feasible(model, alpha, cfg), ErrorKind::infeasible_base,
            "configuration has infinite energy under this alpha");
}

// Statistics t of h(x, cfg) = H(cfg + x) - H(cfg); absent when the insertion is infeasible.
inline LocalStatistics sufficient_statistics(const Model& model, double alpha, Point x, const PointConfiguration& cfg) {
    require_feasible(model, alpha, cfg);
    return model.change_statistics(cfg, alpha, Change{{}, {x}});
}

inline ExtendedEnergy local_energy(const Model& model, const ModelParams& params, Point x,
                                   const PointConfiguration& cfg) {
    model.validate(params);
    return sufficient_statistics(model, params.alpha, x, cfg).energy(params.theta);
}

inline bool is_removable(const Model& model, double alpha, PointId id, const PointConfiguration& cfg) {
    require(cfg.contains_id(id), ErrorKind::unknown_id, "no point with id " + std::to_string(id));
    return model.change_statistics(cfg, alpha, Change{{id}, {}}).feasible();
}

inline std::vector<PointId> removable_set(const Model& model, double alpha, const PointConfiguration& cfg,
                                          const Region& region = Region::whole()) {
    std::vector<PointId> out;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (!region.contains(cfg.point_at(i), cfg.window())) continue;
        if (model.change_statistics(cfg, alpha, Change{{cfg.id_at(i)}, {}}).feasible()) out.push_back(cfg.id_at(i));
    }
    return out;
}

// inf{alpha > 0 : H finite on the region} with its attainment flag.
inline HardcoreStatistic hardcore_statistic(const Model& model, const PointConfiguration& cfg,
                                            const Region& region = Region::whole()) {
    auto s = model.hardcore_statistic(cfg, region);
    require(s.has_value(), ErrorKind::undefined, "hardcore statistic is undefined for this pattern and model");
    return *s;
}

}  // namespace nhg
