#pragma once

#include "io.hpp"
#include "model_spec.hpp"
#include "models.hpp"
#include "rng.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

namespace nhg {

// Area of the intersection of equal disks B(c_i, r) in the plane. The
// boundary of the intersection is a union of arcs, one per disk (each disk
// contributes at most one arc because every constraining arc is at most a
// half circle); the area follows from Green's theorem along those arcs.
inline double disk_intersection_area(std::span<const Point> centers, double r) {
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Point> c;
    for (Point p : centers)
        if (std::find(c.begin(), c.end(), p) == c.end()) c.push_back(p);
    if (c.empty()) return 0.0;
    if (c.size() == 1) return std::numbers::pi * r * r;
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j)
            if (euclidean_distance(c[i], c[j]) >= 2.0 * r) return 0.0;

    double twice_area = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        // Arc of circle i kept so far: [start, start + len].
        double start = 0.0, len = two_pi;
        bool first = true, empty = false;
        for (std::size_t j = 0; j < c.size() && !empty; ++j) {
            if (j == i) continue;
            Point d = c[j] - c[i];
            double dist = std::hypot(d.x, d.y);
            double half = std::acos(std::clamp(dist / (2.0 * r), -1.0, 1.0));
            double s = std::atan2(d.y, d.x) - half;
            if (first) {
                start = s;
                len = 2.0 * half;
                first = false;
                continue;
            }
            double off = std::fmod(s - start, two_pi);
            if (off < 0) off += two_pi;
            // Candidate overlaps of [off, off + 2 half] with [0, len], both
            // shorter than a full turn, checked at shifts 0 and -2pi.
            double best_lo = 0.0, best_len = -1.0;
            for (double shift : {0.0, -two_pi}) {
                double lo = std::max(0.0, off + shift);
                double hi = std::min(len, off + shift + 2.0 * half);
                if (hi - lo > best_len) {
                    best_len = hi - lo;
                    best_lo = lo;
                }
            }
            if (best_len <= 0.0) {
                empty = true;
            } else {
                start += best_lo;
                len = best_len;
            }
        }
        if (empty) continue;
        double a = start, b = start + len;
        twice_area += r * r * (b - a) + r * (c[i].x * (std::sin(b) - std::sin(a)) - c[i].y * (std::cos(b) - std::cos(a)));
    }
    return std::max(0.0, 0.5 * twice_area);
}

enum class Proposal { birth, death, move, cluster_birth, cluster_death };
inline constexpr std::array<const char*, 5> kProposalNames{"birth", "death", "move", "cluster_birth", "cluster_death"};

struct SamplerConfig {
    double p_birth = 0.3;
    double p_death = 0.3;
    double p_move = 0.4;
    double p_cluster_birth = 0.0;
    double p_cluster_death = 0.0;
    double sigma = 0.1;
    double cluster_radius = 0.5;
    std::uint64_t burn_in = 0;
    std::uint64_t keep = 0;
    std::uint64_t thin = 1;
    std::uint64_t seed = 0;
    std::uint64_t check_every = 10000;
    // Mutation switch for testing the diagnostics: every feasible proposal is
    // accepted, i.e. the Metropolis-Hastings test is skipped.
    bool accept_all = false;

    std::array<double, 5> probabilities() const {
        return {p_birth, p_death, p_move, p_cluster_birth, p_cluster_death};
    }

    void validate(const Model& model) const {
        double sum = 0.0;
        for (double p : probabilities()) {
            require(p >= 0.0 && std::isfinite(p), ErrorKind::invalid_argument, "proposal probabilities must be >= 0");
            sum += p;
        }
        require(std::fabs(sum - 1.0) <= 1e-12, ErrorKind::invalid_argument, "proposal probabilities must sum to 1");
        require((p_birth > 0) == (p_death > 0), ErrorKind::invalid_argument,
                "birth and death proposals must be enabled together");
        require((p_cluster_birth > 0) == (p_cluster_death > 0), ErrorKind::invalid_argument,
                "cluster birth and cluster death proposals must be enabled together");
        require(sigma > 0.0 && std::isfinite(sigma), ErrorKind::invalid_argument, "sigma must be positive");
        require(cluster_radius > 0.0 && std::isfinite(cluster_radius), ErrorKind::invalid_argument,
                "cluster_radius must be positive");
        require(thin >= 1, ErrorKind::invalid_argument, "thin must be >= 1");
        if (model.is_knn())
            require(p_cluster_birth > 0.0 && p_cluster_death > 0.0, ErrorKind::invalid_argument,
                    "kNN model needs cluster proposals (p_cluster_birth, p_cluster_death > 0): a lone point is "
                    "never feasible, so single births from the empty pattern always fail and the chain is reducible");
    }
};

// Points per cluster proposal: k+1 for kNN (the smallest feasible pattern), 2 otherwise.
inline std::size_t cluster_size(const Model& model) {
    if (const auto* k = std::get_if<KnnSpec>(&model.spec())) return k->k + 1;
    return 2;
}

inline SamplerConfig default_sampler_config(const Model& model, const ModelParams& params) {
    SamplerConfig sc;
    if (model.is_knn()) {
        sc.p_birth = sc.p_death = 0.1;
        sc.p_cluster_birth = sc.p_cluster_death = 0.2;
    }
    double range = model.interaction_range(params.alpha);
    sc.sigma = range > 0.0 ? range / 10.0 : 0.1;
    sc.cluster_radius = params.alpha / 2.0;
    return sc;
}

struct ProposalTally {
    std::uint64_t proposed = 0;
    std::uint64_t accepted = 0;
    double rate() const { return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0; }
};

struct ChainState {
    PointConfiguration cfg;
    double energy = 0.0;
    std::uint64_t step = 0;
    std::array<ProposalTally, 5> tally{};
    CounterRng rng;
};

struct SampleSet {
    std::vector<PointConfiguration> samples;
    ModelParams params;
    SamplerConfig config;
    std::array<ProposalTally, 5> tally{};
    std::vector<double> energy_trace;
};

// Starting state with finite energy: the empty pattern, except for the
// Delaunay model which starts from a triangular lattice with spacing in
// (min_edge, alpha*sqrt(3)).
inline PointConfiguration feasible_initial(const Model& model, const ModelParams& params, const Window& window) {
    model.validate(params);
    model.check_window(window, params.alpha);
    const auto* d = std::get_if<DelaunaySpec>(&model.spec());
    if (!d) return PointConfiguration(window);
    require(window.is_torus(), ErrorKind::invalid_argument, "simulation runs on the torus only");
    double r = d->min_edge, a = params.alpha, L = window.side();
    double s0 = 0.5 * (r + a * std::sqrt(3.0));
    long nc = std::max(1L, std::lround(L / s0));
    double s = L / static_cast<double>(nc);
    long nr = std::max(2L, std::lround(L / (s * std::sqrt(3.0) / 2.0)));
    if (nr % 2) ++nr;
    double h = L / static_cast<double>(nr);
    require(s > r && s < a * std::sqrt(3.0), ErrorKind::no_feasible_lattice,
            "lattice spacing " + format_double(s) + " leaves (min_edge, alpha*sqrt(3))");
    std::vector<Point> pts;
    for (long j = 0; j < nr; ++j)
        for (long i = 0; i < nc; ++i)
            pts.push_back({(static_cast<double>(i) + (j % 2 ? 0.5 : 0.0)) * s, static_cast<double>(j) * h});
    PointConfiguration cfg = PointConfiguration::from_points(window, pts);
    bool ok = false;
    try {
        ok = is_feasible(model, a, cfg);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::torus_too_sparse) throw;
    }
    require(ok, ErrorKind::no_feasible_lattice, "triangular start lattice has infinite energy");
    return cfg;
}

namespace detail {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Ids (sorted) of x together with its m-1 nearest neighbours in the view.
inline std::vector<PointId> nn_cluster(const ConfigView& view, PointId id, Point p, std::size_t m) {
    std::vector<PointId> c{id};
    for (const Neighbor& nb : view.k_nearest(p, m - 1, id)) c.push_back(nb.id);
    std::sort(c.begin(), c.end());
    return c;
}

// Number of members x of the cluster whose nearest-neighbour cluster is the cluster itself.
inline std::size_t self_selecting(const ConfigView& view, const std::vector<PointId>& ids,
                                  const std::vector<Point>& pts) {
    std::vector<PointId> sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    std::size_t n = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) n += nn_cluster(view, ids[i], pts[i], ids.size()) == sorted;
    return n;
}

// log of the cluster-birth density of an ordered tuple: a centre uniform on
// the window, then each point uniform in B(centre, rho).
inline double log_tuple_density(const Window& w, std::vector<Point> pts, double rho) {
    for (Point& p : pts) p = w.unwrap_near(p, pts.front());
    double area = disk_intersection_area(pts, rho);
    if (area <= 0.0) return -std::numeric_limits<double>::infinity();
    double m = static_cast<double>(pts.size());
    return std::log(area) - std::log(w.area()) - m * std::log(std::numbers::pi * rho * rho);
}

}  // namespace detail

inline ChainState initial_state(const Model& model, const ModelParams& params, const Window& window,
                                const SamplerConfig& sc) {
    ChainState s;
    s.cfg = feasible_initial(model, params, window);
    ExtendedEnergy e = window_energy(model, params, s.cfg);
    require(e.is_finite(), ErrorKind::internal, "initial state has infinite energy");
    s.energy = e.value();
    s.rng = CounterRng(sc.seed).split("chain");
    return s;
}

// One Metropolis-Hastings step against the density exp(-H) with respect to
// the unit-rate Poisson process on the torus.
inline void mcmc_step(ChainState& s, const Model& model, const ModelParams& params, const SamplerConfig& sc) {
    const Window& w = s.cfg.window();
    const double A = w.area();
    const auto probs = sc.probabilities();
    double u = s.rng.uniform(), cum = 0.0;
    std::size_t kind = 4;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        cum += probs[i];
        if (probs[i] > 0.0 && u <= cum) {
            kind = i;
            break;
        }
    }
    while (probs[kind] == 0.0) --kind;
    ++s.step;
    ++s.tally[kind].proposed;

    const double n = static_cast<double>(s.cfg.size());
    Change ch;
    double log_q = 0.0;  // log of the proposal ratio q(reverse) / q(forward)
    std::size_t m = cluster_size(model);
    switch (static_cast<Proposal>(kind)) {
        case Proposal::birth: {
            ch.added.push_back({s.rng.uniform(0.0, w.side()), s.rng.uniform(0.0, w.side())});
            ch.added.back() = w.wrap(ch.added.back());
            log_q = std::log(A / (n + 1.0)) + std::log(sc.p_death / sc.p_birth);
            break;
        }
        case Proposal::death: {
            if (s.cfg.empty()) return;
            ch.removed.push_back(s.cfg.id_at(s.rng.index(s.cfg.size())));
            log_q = std::log(n / A) + std::log(sc.p_birth / sc.p_death);
            break;
        }
        case Proposal::move: {
            if (s.cfg.empty()) return;
            std::size_t i = s.rng.index(s.cfg.size());
            Point p = s.cfg.point_at(i);
            double dx = sc.sigma * s.rng.normal(), dy = sc.sigma * s.rng.normal();
            ch.removed.push_back(s.cfg.id_at(i));
            ch.added.push_back(w.wrap({p.x + dx, p.y + dy}));
            break;
        }
        case Proposal::cluster_birth: {
            Point c{s.rng.uniform(0.0, w.side()), s.rng.uniform(0.0, w.side())};
            for (std::size_t j = 0; j < m; ++j) {
                double rad = sc.cluster_radius * std::sqrt(s.rng.uniform());
                double ang = 2.0 * std::numbers::pi * s.rng.uniform();
                ch.added.push_back(w.wrap({c.x + rad * std::cos(ang), c.y + rad * std::sin(ang)}));
            }
            break;
        }
        case Proposal::cluster_death: {
            if (s.cfg.size() < m) return;
            std::size_t i = s.rng.index(s.cfg.size());
            ConfigView view(s.cfg);
            ch.removed = detail::nn_cluster(view, s.cfg.id_at(i), s.cfg.point_at(i), m);
            break;
        }
    }

    LocalStatistics st = model.change_statistics(s.cfg, params.alpha, ch);
    if (!st.feasible()) return;
    double delta = detail::dot(*st.t, params.theta);

    if (kind == static_cast<std::size_t>(Proposal::cluster_birth)) {
        ConfigView after(s.cfg, {}, ch.added);
        std::vector<PointId> ids;
        for (std::size_t j = 0; j < m; ++j) ids.push_back(after.added_id(j));
        std::size_t back = detail::self_selecting(after, ids, ch.added);
        if (back == 0 && !sc.accept_all) return;
        double log_fwd = detail::log_tuple_density(w, ch.added, sc.cluster_radius);
        log_q = std::log(sc.p_cluster_death * static_cast<double>(back) / (n + static_cast<double>(m))) -
                std::log(sc.p_cluster_birth) - std::lgamma(static_cast<double>(m) + 1.0) - log_fwd;
    } else if (kind == static_cast<std::size_t>(Proposal::cluster_death)) {
        ConfigView view(s.cfg);
        std::vector<Point> pts;
        for (PointId id : ch.removed) pts.push_back(s.cfg.point(id));
        std::size_t fwd = detail::self_selecting(view, ch.removed, pts);
        double log_rev = detail::log_tuple_density(w, pts, sc.cluster_radius);
        if (!std::isfinite(log_rev) && !sc.accept_all) return;
        log_q = std::log(sc.p_cluster_birth) + std::lgamma(static_cast<double>(m) + 1.0) + log_rev -
                std::log(sc.p_cluster_death * static_cast<double>(fwd) / n);
    }

    if (!sc.accept_all) {
        double log_ratio = -delta + log_q;
        if (!(log_ratio >= 0.0) && !(std::log(s.rng.uniform()) < log_ratio)) return;
    }
    s.cfg = s.cfg.replaced(ch.removed, ch.added);
    s.energy += delta;
    ++s.tally[kind].accepted;

    if (sc.check_every && s.step % sc.check_every == 0) {
        ExtendedEnergy fresh = window_energy(model, params, s.cfg);
        require(fresh.is_finite(), ErrorKind::internal, "chain reached a state with infinite energy");
        require(std::fabs(fresh.value() - s.energy) <= 1e-7 * std::max(1.0, std::fabs(fresh.value())),
                ErrorKind::internal, "cached chain energy drifted from the recomputed window energy");
        s.energy = fresh.value();
    }
}

inline SampleSet run_chain(const Model& model, const ModelParams& params, const Window& window,
                           const SamplerConfig& sc) {
    sc.validate(model);
    require(window.is_torus(), ErrorKind::invalid_argument, "simulation runs on the torus only");
    ChainState s = initial_state(model, params, window, sc);
    for (std::uint64_t i = 0; i < sc.burn_in; ++i) mcmc_step(s, model, params, sc);
    SampleSet out;
    out.params = params;
    out.config = sc;
    out.samples.reserve(sc.keep);
    for (std::uint64_t k = 0; k < sc.keep; ++k) {
        for (std::uint64_t i = 0; i < sc.thin; ++i) mcmc_step(s, model, params, sc);
        out.samples.push_back(s.cfg);
        out.energy_trace.push_back(s.energy);
    }
    out.tally = s.tally;
    return out;
}

inline std::string sample_file_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%05zu.csv", i);
    return buf;
}

inline KeyValues sampler_key_values(const SamplerConfig& sc) {
    KeyValues kv;
    kv.set("p_birth", format_double(sc.p_birth));
    kv.set("p_death", format_double(sc.p_death));
    kv.set("p_move", format_double(sc.p_move));
    kv.set("p_cluster_birth", format_double(sc.p_cluster_birth));
    kv.set("p_cluster_death", format_double(sc.p_cluster_death));
    kv.set("sigma", format_double(sc.sigma));
    kv.set("cluster_radius", format_double(sc.cluster_radius));
    kv.set("burn_in", std::to_string(sc.burn_in));
    kv.set("keep", std::to_string(sc.keep));
    kv.set("thin", std::to_string(sc.thin));
    kv.set("seed", std::to_string(sc.seed));
    return kv;
}

// Overrides the sampler settings present in kv.
inline SamplerConfig apply_sampler_keys(SamplerConfig sc, const KeyValues& kv) {
    sc.p_birth = kv.get_double_or("p_birth", sc.p_birth);
    sc.p_death = kv.get_double_or("p_death", sc.p_death);
    sc.p_move = kv.get_double_or("p_move", sc.p_move);
    sc.p_cluster_birth = kv.get_double_or("p_cluster_birth", sc.p_cluster_birth);
    sc.p_cluster_death = kv.get_double_or("p_cluster_death", sc.p_cluster_death);
    sc.sigma = kv.get_double_or("sigma", sc.sigma);
    sc.cluster_radius = kv.get_double_or("cluster_radius", sc.cluster_radius);
    return sc;
}

// Directory with sample_%05d.csv per kept pattern and chain.meta.
inline void write_archive(const SampleSet& set, const ModelDefinition& def, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    KeyValues meta = to_key_values(def);
    meta.set("alpha", format_double(set.params.alpha));
    if (!set.params.theta.empty()) meta.set("theta", join_doubles(set.params.theta));
    Window w = set.samples.empty() ? Window{} : set.samples.front().window();
    meta.set("L", format_double(w.side()));
    meta.set("boundary", to_string(w.boundary()));
    KeyValues sampler = sampler_key_values(set.config);
    for (const auto& [k, v] : sampler.entries()) meta.set(k, v);
    meta.set("n_samples", std::to_string(set.samples.size()));
    for (std::size_t i = 0; i < kProposalNames.size(); ++i) {
        meta.set(std::string("proposed_") + kProposalNames[i], std::to_string(set.tally[i].proposed));
        meta.set(std::string("accepted_") + kProposalNames[i], std::to_string(set.tally[i].accepted));
    }
    for (std::size_t i = 0; i < set.samples.size(); ++i)
        KeyValues::write_text(dir / sample_file_name(i), pattern_csv(set.samples[i]));
    meta.save(dir / "chain.meta");
}

struct Archive {
    KeyValues meta;
    std::vector<std::filesystem::path> files;
    std::vector<PointConfiguration> samples;
};

inline Archive read_archive(const std::filesystem::path& dir) {
    Archive a;
    a.meta = KeyValues::load(dir / "chain.meta");
    Window w(a.meta.get_double("L"), parse_boundary(a.meta.get_or("boundary", "torus")));
    require(std::filesystem::is_directory(dir), ErrorKind::io_error, dir.string() + " is not a directory");
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        std::string name = e.path().filename().string();
        if (name.rfind("sample_", 0) == 0 && e.path().extension() == ".csv") a.files.push_back(e.path());
    }
    std::sort(a.files.begin(), a.files.end());
    for (const auto& f : a.files) a.samples.push_back(read_pattern(f, w));
    return a;
}

}  // namespace nhg
