#pragma once

#include "io.hpp"
#include "models.hpp"
#include "quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <vector>

namespace nhg {

struct AlphaEstimate {
    double alpha_hat = 0.0;
    double epsilon = 0.0;
    bool attained = false;
    double value() const { return alpha_hat + epsilon; }
};

// Hardcore estimator: the smallest feasible alpha on the region, nudged up by
// epsilon when the infimum is not attained. Feasibility at alpha_hat + epsilon
// is verified, doubling epsilon at most 10 times.
inline AlphaEstimate estimate_alpha(const Model& model, const PointConfiguration& cfg,
                                    const Region& region = Region::whole()) {
    HardcoreStatistic s = hardcore_statistic(model, cfg, region);
    AlphaEstimate a{s.value, 0.0, s.attained};
    auto feasible = [&](double alpha) {
        try {
            return is_feasible(model, alpha, cfg, region);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::torus_too_sparse) return false;
            throw;
        }
    };
    if (s.attained && feasible(a.alpha_hat)) return a;
    a.epsilon = a.alpha_hat > 0.0 ? 1e-9 * a.alpha_hat : 1e-9;
    for (int i = 0; i <= 10; ++i) {
        if (feasible(a.value())) return a;
        a.epsilon *= 2.0;
    }
    throw Error(ErrorKind::infeasible_alpha, "no feasible alpha found just above the hardcore statistic " +
                                                 format_double(a.alpha_hat));
}

// Everything the pseudo-likelihood needs at a fixed alpha: the statistics
// t(x, cfg) at the feasible quadrature nodes and t(x, cfg - x) at the
// removable points of the region. PLL, gradient and Hessian are then cheap
// functions of theta.
struct PllData {
    std::size_t p = 0;
    double region_area = 0.0;
    double measure = 0.0;  // quadrature measure of the region
    std::size_t node_count = 0;
    std::vector<std::vector<double>> node_t;
    std::vector<std::vector<double>> removable_t;
    std::size_t n_points = 0;

    double value(const std::vector<double>& theta) const {
        double integral = 0.0, sum = 0.0;
        for (const auto& t : node_t) integral += std::exp(-dot(theta, t));
        for (const auto& t : removable_t) sum += dot(theta, t);
        return (mean_over_nodes(integral) + sum) / region_area;
    }

    Eigen::VectorXd gradient(const std::vector<double>& theta) const {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
        for (const auto& t : node_t) {
            double w = std::exp(-dot(theta, t));
            for (std::size_t i = 0; i < p; ++i) g[static_cast<Eigen::Index>(i)] -= w * t[i];
        }
        g = mean_over_nodes(1.0) * g;
        for (const auto& t : removable_t)
            for (std::size_t i = 0; i < p; ++i) g[static_cast<Eigen::Index>(i)] += t[i];
        return g / region_area;
    }

    Eigen::MatrixXd hessian(const std::vector<double>& theta) const {
        auto n = static_cast<Eigen::Index>(p);
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
        for (const auto& t : node_t) {
            double w = mean_over_nodes(1.0) * std::exp(-dot(theta, t));
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) h(i, j) += w * t[static_cast<std::size_t>(i)] * t[static_cast<std::size_t>(j)];
        }
        return h / region_area;
    }

    // Quadrature of a node sum: measure * (sum / node count).
    double mean_over_nodes(double sum) const {
        return node_count ? measure * (sum / static_cast<double>(node_count)) : 0.0;
    }

    static double dot(const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }
};

inline PllData make_pll_data(const Model& model, const PointConfiguration& cfg, const Region& region, double alpha,
                             const QuadratureSpec& spec) {
    bool ok = false;
    try {
        ok = is_feasible(model, alpha, cfg, region);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::torus_too_sparse) throw;
    }
    require(ok, ErrorKind::infeasible_alpha, "pattern has infinite energy at alpha = " + format_double(alpha));
    Quadrature quad = make_quadrature(region, cfg.window(), spec);
    PllData d;
    d.p = model.dimension();
    d.region_area = region.area(cfg.window());
    d.node_count = quad.nodes.size();
    d.measure = quad.measure;
    for (Point x : quad.nodes) {
        LocalStatistics st = model.change_statistics(cfg, alpha, Change{{}, {x}});
        if (st.feasible()) d.node_t.push_back(std::move(*st.t));
    }
    for (std::size_t i = 0; i < cfg.size(); ++i) {
        if (!region.contains(cfg.point_at(i), cfg.window())) continue;
        ++d.n_points;
        LocalStatistics st = model.change_statistics(cfg, alpha, Change{{cfg.id_at(i)}, {}});
        if (!st.feasible()) continue;
        for (double& v : *st.t) v = -v;
        d.removable_t.push_back(std::move(*st.t));
    }
    return d;
}

inline double pll(const Model& model, const PointConfiguration& cfg, const Region& region, double alpha,
                  const std::vector<double>& theta, const QuadratureSpec& spec) {
    return make_pll_data(model, cfg, region, alpha, spec).value(theta);
}

// K_n(theta, theta_star): PLL difference at a common alpha.
inline double contrast_kn(const PllData& d, const std::vector<double>& theta, const std::vector<double>& theta_star) {
    return d.value(theta) - d.value(theta_star);
}

inline double contrast_kn(const Model& model, const PointConfiguration& cfg, const Region& region, double alpha,
                          const std::vector<double>& theta, const std::vector<double>& theta_star,
                          const QuadratureSpec& spec) {
    return contrast_kn(make_pll_data(model, cfg, region, alpha, spec), theta, theta_star);
}

struct ThetaBox {
    std::vector<double> lower;
    std::vector<double> upper;

    std::vector<double> center() const {
        std::vector<double> c(lower.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = 0.5 * (lower[i] + upper[i]);
        return c;
    }
};

struct EstimationResult {
    double alpha_hat = 0.0;
    bool attained = false;
    double epsilon = 0.0;
    std::vector<double> theta_hat;
    double pll_value = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    std::vector<bool> at_boundary;
    std::size_t removable_count = 0;
    std::size_t n_points = 0;
    bool degenerate = false;
    double side = 0.0;

    bool any_at_boundary() const {
        for (bool b : at_boundary)
            if (b) return true;
        return false;
    }
};

// Damped Newton on the precomputed PLL, with iterates clamped to the closed
// box. Components held at a bound by an outward-pointing gradient are frozen
// and reported in at_boundary.
inline EstimationResult minimize_pll(const PllData& d, const ThetaBox& box, double tol = 1e-8, int max_iter = 100) {
    const std::size_t p = d.p;
    require(box.lower.size() == p && box.upper.size() == p, ErrorKind::invalid_argument,
            "theta box does not match the model dimension");
    EstimationResult r;
    r.removable_count = d.removable_t.size();
    r.n_points = d.n_points;
    std::vector<double> theta = box.center();
    auto clamp = [&](std::vector<double> v) {
        for (std::size_t i = 0; i < p; ++i) v[i] = std::clamp(v[i], box.lower[i], box.upper[i]);
        return v;
    };
    // A coordinate is blocked when it sits on a bound and the gradient pushes it outward.
    auto blocked = [&](const std::vector<double>& th, const Eigen::VectorXd& g) {
        std::vector<bool> b(p, false);
        for (std::size_t i = 0; i < p; ++i) {
            double gi = g[static_cast<Eigen::Index>(i)];
            b[i] = (th[i] <= box.lower[i] && gi > 0.0) || (th[i] >= box.upper[i] && gi < 0.0);
        }
        return b;
    };
    auto projected_norm = [&](const Eigen::VectorXd& g, const std::vector<bool>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            if (!b[i]) s += g[static_cast<Eigen::Index>(i)] * g[static_cast<Eigen::Index>(i)];
        return std::sqrt(s);
    };

    double f = d.value(theta);
    Eigen::VectorXd g = d.gradient(theta);
    Eigen::MatrixXd h = d.hessian(theta);
    bool all_zero = true;
    for (const auto& t : d.node_t)
        for (double v : t) all_zero = all_zero && v == 0.0;
    for (const auto& t : d.removable_t)
        for (double v : t) all_zero = all_zero && v == 0.0;
    r.degenerate = all_zero;

    int it = 0;
    for (; it < max_iter && p > 0; ++it) {
        std::vector<bool> b = blocked(theta, g);
        if (projected_norm(g, b) <= tol) break;
        std::vector<Eigen::Index> free;
        for (std::size_t i = 0; i < p; ++i)
            if (!b[i]) free.push_back(static_cast<Eigen::Index>(i));
        auto nf = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd hf(nf, nf);
        Eigen::VectorXd gf(nf);
        for (Eigen::Index a = 0; a < nf; ++a) {
            gf[a] = g[free[static_cast<std::size_t>(a)]];
            for (Eigen::Index c = 0; c < nf; ++c) hf(a, c) = h(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(c)]);
        }
        Eigen::VectorXd step;
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hf);
        bool newton = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                      ldlt.vectorD().minCoeff() > 1e-14 * std::max(1.0, hf.diagonal().cwiseAbs().maxCoeff());
        if (newton)
            step = -ldlt.solve(gf);
        else
            step = -gf;
        std::vector<double> dir(p, 0.0);
        for (Eigen::Index a = 0; a < nf; ++a) dir[static_cast<std::size_t>(free[static_cast<std::size_t>(a)])] = step[a];
        double scale = 1.0;
        bool moved = false;
        for (int k = 0; k < 60; ++k, scale *= 0.5) {
            std::vector<double> cand = theta;
            for (std::size_t i = 0; i < p; ++i) cand[i] += scale * dir[i];
            cand = clamp(cand);
            double fc = d.value(cand);
            // Near the optimum the decrease is below rounding noise in f.
            if (fc <= f + 1e-13 * std::max(1.0, std::fabs(f))) {
                moved = cand != theta;
                theta = cand;
                f = fc;
                break;
            }
        }
        g = d.gradient(theta);
        h = d.hessian(theta);
        if (!moved) break;
    }
    r.iterations = it;
    r.theta_hat = theta;
    r.pll_value = f;
    r.gradient_norm = g.norm();
    r.at_boundary = blocked(theta, g);
    if (d.removable_t.empty()) {
        // With no removable points the PLL is monotone in every component
        // whose statistics never change sign, so its minimiser is on the box.
        for (std::size_t i = 0; i < p; ++i) {
            bool nonneg = true, nonpos = true;
            for (const auto& t : d.node_t) {
                nonneg = nonneg && t[i] >= 0.0;
                nonpos = nonpos && t[i] <= 0.0;
            }
            if (nonneg || nonpos) r.degenerate = true;
        }
    }
    return r;
}

inline EstimationResult estimate_theta(const Model& model, const PointConfiguration& cfg, const Region& region,
                                       double alpha, const ThetaBox& box, const QuadratureSpec& spec) {
    EstimationResult r = minimize_pll(make_pll_data(model, cfg, region, alpha, spec), box);
    r.alpha_hat = alpha;
    r.side = cfg.window().side();
    return r;
}

// Region used for the PLL: unchanged on the torus, eroded by the interaction
// range in plane mode (minus-sampling).
inline Region pll_region(const Model& model, const PointConfiguration& cfg, const Region& region, double alpha) {
    if (cfg.window().is_torus()) return region;
    return region.eroded(model.interaction_range(alpha), cfg.window());
}

inline EstimationResult two_step(const Model& model, const PointConfiguration& cfg, const Region& region,
                                 const ThetaBox& box, const QuadratureSpec& spec) {
    AlphaEstimate a = estimate_alpha(model, cfg, region);
    EstimationResult r = estimate_theta(model, cfg, pll_region(model, cfg, region, a.value()), a.value(), box, spec);
    r.alpha_hat = a.alpha_hat;
    r.epsilon = a.epsilon;
    r.attained = a.attained;
    return r;
}

inline std::string estimate_csv_header(std::size_t p) {
    std::string h = "alpha_hat,epsilon,attained";
    for (std::size_t i = 0; i < p; ++i) h += ",theta_hat_" + std::to_string(i + 1);
    return h + ",pll,grad_norm,iters,at_boundary,removable_count,n_points,L\n";
}

inline std::string estimate_csv_row(const EstimationResult& r) {
    std::string s = format_double(r.alpha_hat) + "," + format_double(r.epsilon) + "," + (r.attained ? "1" : "0");
    for (double t : r.theta_hat) s += "," + format_double(t);
    s += "," + format_double(r.pll_value) + "," + format_double(r.gradient_norm) + "," + std::to_string(r.iterations) +
         "," + (r.any_at_boundary() ? "1" : "0") + "," + std::to_string(r.removable_count) + "," +
         std::to_string(r.n_points) + "," + format_double(r.side);
    return s + "\n";
}

}  // namespace nhg
