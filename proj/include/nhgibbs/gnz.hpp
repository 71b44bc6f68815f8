#pragma once

#include "io.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace nhg {

struct TestFunctional {
    enum class Kind { constant_one, statistic_component, empty_ball_indicator };
    Kind kind = Kind::constant_one;
    std::size_t index = 0;  // 0-based statistic component
    double radius = 0.0;

    static TestFunctional constant_one() { return {}; }
    static TestFunctional statistic_component(std::size_t i) { return {Kind::statistic_component, i, 0.0}; }
    static TestFunctional empty_ball_indicator(double r) {
        require(r > 0.0 && std::isfinite(r), ErrorKind::invalid_argument, "empty-ball radius must be positive");
        return {Kind::empty_ball_indicator, 0, r};
    }

    std::string name() const {
        switch (kind) {
            case Kind::constant_one: return "constant_one";
            case Kind::statistic_component: return "statistic_component(" + std::to_string(index + 1) + ")";
            case Kind::empty_ball_indicator: return "empty_ball_indicator(" + format_double(radius) + ")";
        }
        return "";
    }

    // f(x, cfg) given the insertion statistics t(x, cfg) (feasible) and the
    // configuration seen without x.
    double value(Point x, const std::vector<double>& t, const ConfigView& view) const {
        switch (kind) {
            case Kind::constant_one: return 1.0;
            case Kind::statistic_component: return t[index];
            case Kind::empty_ball_indicator: {
                bool empty = true;
                view.for_each_within(x, radius, [&](PointId, Point, double d) { empty = empty && d >= radius; });
                return empty ? 1.0 : 0.0;
            }
        }
        return 0.0;
    }
};

// Comma separated list; statistic components are 1-based, `statistics`
// expands to every component of a model with p interaction parameters.
inline std::vector<TestFunctional> parse_functionals(const std::string& text, std::size_t p) {
    std::vector<TestFunctional> out;
    for (const std::string& raw : split(text, ',')) {
        std::string s = trim(raw);
        if (s.empty()) continue;
        if (s == "constant_one") {
            out.push_back(TestFunctional::constant_one());
        } else if (s == "statistics") {
            for (std::size_t i = 0; i < p; ++i) out.push_back(TestFunctional::statistic_component(i));
        } else if (s.rfind("statistic_component(", 0) == 0 && s.back() == ')') {
            long long i = parse_integer(s.substr(20, s.size() - 21), s);
            require(i >= 1 && static_cast<std::size_t>(i) <= p, ErrorKind::invalid_argument,
                    s + ": component must be in 1.." + std::to_string(p));
            out.push_back(TestFunctional::statistic_component(static_cast<std::size_t>(i - 1)));
        } else if (s.rfind("empty_ball_indicator(", 0) == 0 && s.back() == ')') {
            out.push_back(TestFunctional::empty_ball_indicator(parse_double(s.substr(21, s.size() - 22), s)));
        } else {
            throw Error(ErrorKind::parse_error, "unknown functional '" + s +
                                                    "' (constant_one|statistics|statistic_component(i)|"
                                                    "empty_ball_indicator(r))");
        }
    }
    require(!out.empty(), ErrorKind::invalid_argument, "no test functionals given");
    return out;
}

namespace detail {

inline std::vector<double> negated(std::vector<double> v) {
    for (double& x : v) x = -x;
    return v;
}

}  // namespace detail

// Sum over removable points x in the region of f(x, cfg - x), one value per functional.
inline std::vector<double> gnz_lhs(const std::vector<TestFunctional>& fs, const PointConfiguration& cfg,
                                   const Model& model, double alpha, const Region& region) {
    std::vector<double> out(fs.size(), 0.0);
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        Point x = cfg.point_at(i);
        if (!region.contains(x, cfg.window())) continue;
        PointId id = cfg.id_at(i);
        LocalStatistics st = model.change_statistics(cfg, alpha, Change{{id}, {}});
        if (!st.feasible()) continue;  // not removable: h(x, cfg - x) is undefined
        std::vector<double> t = detail::negated(*st.t);
        std::vector<PointId> self{id};
        ConfigView without(cfg, self);
        for (std::size_t f = 0; f < fs.size(); ++f) out[f] += fs[f].value(x, t, without);
    }
    return out;
}

inline double gnz_lhs(const TestFunctional& f, const PointConfiguration& cfg, const Model& model, double alpha,
                      const Region& region) {
    return gnz_lhs(std::vector<TestFunctional>{f}, cfg, model, alpha, region)[0];
}

// Quadrature of f(x, cfg) exp(-h(x, cfg)) over the region, with exp(-inf) = 0.
inline std::vector<double> gnz_rhs(const std::vector<TestFunctional>& fs, const PointConfiguration& cfg,
                                   const Model& model, const ModelParams& params, const Quadrature& quad) {
    std::vector<double> sums(fs.size(), 0.0);
    ConfigView view(cfg);
    for (Point x : quad.nodes) {
        LocalStatistics st = model.change_statistics(cfg, params.alpha, Change{{}, {x}});
        if (!st.feasible()) continue;
        double w = std::exp(-st.energy(params.theta).value());
        for (std::size_t f = 0; f < fs.size(); ++f) sums[f] += fs[f].value(x, *st.t, view) * w;
    }
    std::vector<double> out(fs.size(), 0.0);
    if (quad.nodes.empty()) return out;
    for (std::size_t f = 0; f < fs.size(); ++f) out[f] = quad.measure * (sums[f] / static_cast<double>(quad.nodes.size()));
    return out;
}

inline double gnz_rhs(const TestFunctional& f, const PointConfiguration& cfg, const Model& model,
                      const ModelParams& params, const Region& region, const QuadratureSpec& spec) {
    return gnz_rhs(std::vector<TestFunctional>{f}, cfg, model, params, make_quadrature(region, cfg.window(), spec))[0];
}

// Effective sample size of a stationary series by Geyer's initial positive
// sequence estimator, clamped to [1, n].
inline double effective_sample_size(const std::vector<double>& x) {
    std::size_t n = x.size();
    if (n < 4) return static_cast<double>(n);
    double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    auto autocov = [&](std::size_t lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) s += (x[i] - mean) * (x[i + lag] - mean);
        return s / static_cast<double>(n);
    };
    double c0 = autocov(0);
    if (c0 <= 0.0) return static_cast<double>(n);
    double tau = -1.0;
    for (std::size_t m = 0; 2 * m + 1 < n; ++m) {
        double gamma = (autocov(2 * m) + autocov(2 * m + 1)) / c0;
        if (gamma <= 0.0) break;
        tau += 2.0 * gamma;
    }
    tau = std::max(tau, 1.0 / static_cast<double>(n));
    return std::clamp(static_cast<double>(n) / tau, 1.0, static_cast<double>(n));
}

struct GnzRow {
    std::string functional;
    double lhs_mean = 0.0;
    double rhs_mean = 0.0;
    double lhs_se = 0.0;
    double rhs_se = 0.0;
    double z = 0.0;
    std::size_t n_samples = 0;
    double ess = 0.0;
};

struct GnzReport {
    std::vector<GnzRow> rows;

    double max_abs_z() const {
        double m = 0.0;
        for (const auto& r : rows) m = std::max(m, std::fabs(r.z));
        return m;
    }

    std::string csv() const {
        std::string out = "functional,lhs_mean,rhs_mean,lhs_se,rhs_se,z,n_samples,ess\n";
        for (const auto& r : rows)
            out += r.functional + "," + format_double(r.lhs_mean) + "," + format_double(r.rhs_mean) + "," +
                   format_double(r.lhs_se) + "," + format_double(r.rhs_se) + "," + format_double(r.z) + "," +
                   std::to_string(r.n_samples) + "," + format_double(r.ess) + "\n";
        return out;
    }
};

namespace detail {

inline double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double se_of(const std::vector<double>& v, double ess) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v), ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1) / ess);
}

}  // namespace detail

// Both sides of the equilibrium equation averaged over the samples. The z
// score uses the per-sample differences lhs - rhs, whose standard error is
// corrected for autocorrelation through the effective sample size.
inline GnzReport gnz_report(const std::vector<PointConfiguration>& samples, const Model& model,
                            const ModelParams& params, const std::vector<TestFunctional>& fs, const Region& region,
                            const QuadratureSpec& spec, unsigned threads = 1) {
    require(!samples.empty(), ErrorKind::empty_sample_set, "no samples to check");
    model.validate(params);
    for (const auto& f : fs)
        require(f.kind != TestFunctional::Kind::statistic_component || f.index < model.dimension(),
                ErrorKind::invalid_argument, "statistic component out of range for model " + model.name());
    Quadrature quad = make_quadrature(region, samples.front().window(), spec);
    std::size_t n = samples.size();
    std::vector<std::vector<double>> lhs(n), rhs(n);
    parallel_for(n, threads, [&](std::size_t i) {
        lhs[i] = gnz_lhs(fs, samples[i], model, params.alpha, region);
        rhs[i] = gnz_rhs(fs, samples[i], model, params, quad);
    });
    GnzReport rep;
    for (std::size_t f = 0; f < fs.size(); ++f) {
        std::vector<double> l(n), r(n), d(n);
        for (std::size_t i = 0; i < n; ++i) {
            l[i] = lhs[i][f];
            r[i] = rhs[i][f];
            d[i] = l[i] - r[i];
        }
        GnzRow row;
        row.functional = fs[f].name();
        row.n_samples = n;
        row.ess = effective_sample_size(d);
        row.lhs_mean = detail::mean_of(l);
        row.rhs_mean = detail::mean_of(r);
        row.lhs_se = detail::se_of(l, effective_sample_size(l));
        row.rhs_se = detail::se_of(r, effective_sample_size(r));
        double se = detail::se_of(d, row.ess);
        double diff = row.lhs_mean - row.rhs_mean;
        row.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace nhg
