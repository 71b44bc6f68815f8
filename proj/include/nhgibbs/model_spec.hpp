#pragma once

#include "io.hpp"
#include "models.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace nhg {

// A model together with its true/working parameters and the admissible
// sets: alpha in [alpha_min, alpha_max], theta in the open box (theta_min, theta_max).
struct ModelDefinition {
    Model model = Model::poisson();
    ModelParams params;
    double alpha_min = 0.0;
    double alpha_max = 0.0;
    std::vector<double> theta_min;
    std::vector<double> theta_max;

    void validate() const {
        model.validate(params);
        require(alpha_min > 0.0 && alpha_min <= params.alpha && params.alpha <= alpha_max,
                ErrorKind::invalid_argument, "alpha must lie in [alpha_min, alpha_max] with alpha_min > 0");
        if (const auto* d = std::get_if<DelaunaySpec>(&model.spec()))
            require(alpha_min > d->min_edge, ErrorKind::invalid_argument,
                    "every admissible alpha must exceed min_edge (alpha_min > min_edge)");
        require(theta_min.size() == model.dimension() && theta_max.size() == model.dimension(),
                ErrorKind::invalid_argument, "theta bounds must match the model dimension");
        for (std::size_t i = 0; i < model.dimension(); ++i) {
            require(theta_min[i] < theta_max[i], ErrorKind::invalid_argument, "theta_min must be below theta_max");
            require(params.theta[i] > theta_min[i] && params.theta[i] < theta_max[i], ErrorKind::invalid_argument,
                    "theta must lie inside the open box (theta_min, theta_max)");
        }
    }
};

namespace detail {

inline std::vector<double> bound_list(const KeyValues& kv, const std::string& key, std::size_t p, double fallback) {
    if (!kv.has(key)) return std::vector<double>(p, fallback);
    std::vector<double> v = kv.get_doubles(key);
    if (v.size() == 1 && p > 1) v.assign(p, v[0]);
    require(v.size() == p, ErrorKind::parse_error, key + " must have 1 or " + std::to_string(p) + " values");
    return v;
}

inline Phi parse_phi(const KeyValues& kv) {
    Phi phi;
    std::string fam = kv.get_or("phi", "const");
    if (fam == "const")
        phi.family = Phi::Family::constant;
    else if (fam == "trunclin")
        phi.family = Phi::Family::trunclin;
    else if (fam == "step")
        phi.family = Phi::Family::step;
    else
        throw Error(ErrorKind::parse_error, "unknown phi family '" + fam + "' (const|trunclin|step)");
    if (kv.has("phi_params"))
        phi.params = kv.get_doubles("phi_params");
    else
        phi.params = phi.family == Phi::Family::step ? std::vector<double>{1.0, 1.0} : std::vector<double>{1.0};
    phi.validate();
    return phi;
}

}  // namespace detail

inline ModelDefinition parse_model_definition(const KeyValues& kv) {
    std::string name = kv.get("model");
    Model model = Model::poisson();
    if (name == "hardsphere") {
        model = Model::hard_sphere(kv.get_doubles("steps"));
    } else if (name == "delaunay") {
        model = Model::delaunay(kv.get_double("min_edge"));
    } else if (name == "knn") {
        long long k = kv.get_integer("k");
        require(k >= 1, ErrorKind::invalid_argument, "k must be >= 1");
        model = Model::knn(static_cast<std::size_t>(k), detail::parse_phi(kv));
    } else if (name == "poisson") {
        model = Model::poisson();
    } else {
        throw Error(ErrorKind::parse_error, "unknown model '" + name + "' (hardsphere|delaunay|knn|poisson)");
    }
    ModelDefinition def;
    def.model = model;
    def.params.alpha = kv.get_double_or("alpha", 1.0);
    def.params.theta = kv.has("theta") ? kv.get_doubles("theta") : std::vector<double>{};
    double lower = 0.5 * def.params.alpha;
    if (const auto* d = std::get_if<DelaunaySpec>(&model.spec()))
        lower = std::max(lower, 0.5 * (d->min_edge + def.params.alpha));
    def.alpha_min = kv.get_double_or("alpha_min", lower);
    def.alpha_max = kv.get_double_or("alpha_max", 2.0 * def.params.alpha);
    std::size_t p = model.dimension();
    def.theta_min = detail::bound_list(kv, "theta_min", p, -5.0);
    def.theta_max = detail::bound_list(kv, "theta_max", p, 5.0);
    def.validate();
    return def;
}

inline ModelDefinition load_model_definition(const std::filesystem::path& path) {
    return parse_model_definition(KeyValues::load(path));
}

inline KeyValues to_key_values(const ModelDefinition& def) {
    KeyValues kv;
    kv.set("model", def.model.name());
    std::visit(
        [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, HardSphereSpec>) {
                kv.set("steps", join_doubles(s.steps));
            } else if constexpr (std::is_same_v<S, DelaunaySpec>) {
                kv.set("min_edge", format_double(s.min_edge));
            } else if constexpr (std::is_same_v<S, KnnSpec>) {
                kv.set("k", std::to_string(s.k));
                kv.set("phi", s.phi.name());
                kv.set("phi_params", join_doubles(s.phi.params));
            }
        },
        def.model.spec());
    kv.set("alpha", format_double(def.params.alpha));
    if (!def.params.theta.empty()) kv.set("theta", join_doubles(def.params.theta));
    kv.set("alpha_min", format_double(def.alpha_min));
    kv.set("alpha_max", format_double(def.alpha_max));
    if (!def.theta_min.empty()) {
        kv.set("theta_min", join_doubles(def.theta_min));
        kv.set("theta_max", join_doubles(def.theta_max));
    }
    return kv;
}

}  // namespace nhg
