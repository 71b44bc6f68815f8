#pragma once

#include "estimate.hpp"
#include "model_spec.hpp"
#include "parallel.hpp"
#include "sampler.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

namespace nhg {

// Replicated fits along a ladder of torus windows, all chains seeded from one
// root seed.
struct StudyConfig {
    ModelDefinition def;
    std::vector<double> windows{5.0, 10.0, 20.0};
    std::size_t replicates = 20;
    std::uint64_t seed = 1;
    double burn_per_area = 500.0;  // burn-in steps per unit area
    QuadratureSpec quad{100.0};
    KeyValues sampler_keys;        // optional overrides of the default proposal mix

    void validate() const {
        def.validate();
        require(!windows.empty(), ErrorKind::invalid_argument, "study needs at least one window size");
        for (double L : windows) require(L > 0.0 && std::isfinite(L), ErrorKind::invalid_argument, "window sizes must be positive");
        require(replicates >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
        require(burn_per_area >= 0.0, ErrorKind::invalid_argument, "burn_per_area must be >= 0");
        quad.validate();
    }

    SamplerConfig sampler(std::size_t li, std::size_t rep) const {
        SamplerConfig sc = apply_sampler_keys(default_sampler_config(def.model, def.params), sampler_keys);
        double L = windows[li];
        sc.burn_in = static_cast<std::uint64_t>(std::ceil(burn_per_area * L * L));
        sc.keep = 1;
        sc.thin = 1;
        CounterRng r = CounterRng(seed).split("study").split(li).split(rep);
        sc.seed = r();
        return sc;
    }
};

inline StudyConfig parse_study_config(const KeyValues& kv, const std::filesystem::path& base_dir) {
    StudyConfig c;
    if (kv.has("model_spec")) {
        std::filesystem::path spec = kv.get("model_spec");
        if (spec.is_relative()) spec = base_dir / spec;
        c.def = load_model_definition(spec);
    } else {
        c.def = parse_model_definition(kv);
    }
    if (kv.has("windows")) c.windows = kv.get_doubles("windows");
    long long reps = kv.get_integer_or("replicates", static_cast<long long>(c.replicates));
    require(reps >= 1, ErrorKind::invalid_argument, "replicates must be >= 1");
    c.replicates = static_cast<std::size_t>(reps);
    long long seed = kv.get_integer_or("seed", static_cast<long long>(c.seed));
    require(seed >= 0, ErrorKind::invalid_argument, "seed must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.burn_per_area = kv.get_double_or("burn_per_area", c.burn_per_area);
    c.quad.density = kv.get_double_or("quad", c.quad.density);
    for (const char* k : {"p_birth", "p_death", "p_move", "p_cluster_birth", "p_cluster_death", "sigma", "cluster_radius"})
        if (kv.has(k)) c.sampler_keys.set(k, kv.get(k));
    c.validate();
    return c;
}

struct StudyRow {
    double L = 0.0;
    std::size_t replicate = 0;
    std::size_t n_points = 0;
    bool defined = true;       // false when the hardcore statistic does not exist (e.g. too few points)
    EstimationResult plug_in;  // alpha estimated, then theta
    EstimationResult known;    // theta at the true alpha
    double abs_err_alpha = 0.0;
    double abs_err_theta = 0.0;
    double abs_err_theta_known = 0.0;
};

struct StudySummaryRow {
    double L = 0.0;
    std::size_t n = 0;
    std::size_t n_defined = 0;
    double median_abs_err_alpha = 0.0;
    double median_abs_err_theta = 0.0;
    double median_abs_err_theta_known = 0.0;
    double frac_alpha_le_truth = 0.0;
};

struct StudyResult {
    std::vector<StudyRow> rows;
    std::vector<StudySummaryRow> summary;
    std::vector<PointConfiguration> patterns;  // filled only on request, same order as rows
};

inline double median_of(std::vector<double> v) {
    require(!v.empty(), ErrorKind::invalid_argument, "median of an empty set");
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double theta_error(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

inline PointConfiguration study_pattern(const StudyConfig& c, std::size_t li, std::size_t rep) {
    return run_chain(c.def.model, c.def.params, Window(c.windows[li]), c.sampler(li, rep)).samples.back();
}

inline StudyResult run_study(const StudyConfig& c, unsigned threads = 1, bool keep_patterns = false) {
    c.validate();
    const std::size_t cells = c.windows.size() * c.replicates;
    ThetaBox box{c.def.theta_min, c.def.theta_max};
    StudyResult res;
    res.rows.resize(cells);
    if (keep_patterns) res.patterns.resize(cells);
    parallel_for(cells, threads, [&](std::size_t i) {
        std::size_t li = i / c.replicates, rep = i % c.replicates;
        PointConfiguration cfg = study_pattern(c, li, rep);
        StudyRow& row = res.rows[i];
        row.L = c.windows[li];
        row.replicate = rep;
        row.n_points = cfg.size();
        row.known = estimate_theta(c.def.model, cfg, Region::whole(), c.def.params.alpha, box, c.quad);
        try {
            row.plug_in = two_step(c.def.model, cfg, Region::whole(), box, c.quad);
            row.abs_err_alpha = std::fabs(row.plug_in.alpha_hat - c.def.params.alpha);
            row.abs_err_theta = theta_error(row.plug_in.theta_hat, c.def.params.theta);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::undefined) throw;
            // No estimate at all counts as an infinite error in the medians.
            row.defined = false;
            row.plug_in.alpha_hat = NAN;
            row.plug_in.theta_hat.assign(c.def.model.dimension(), NAN);
            row.abs_err_alpha = row.abs_err_theta = INFINITY;
        }
        row.abs_err_theta_known = theta_error(row.known.theta_hat, c.def.params.theta);
        if (keep_patterns) res.patterns[i] = std::move(cfg);
    });
    for (std::size_t li = 0; li < c.windows.size(); ++li) {
        std::vector<double> ea, et, ek;
        std::size_t below = 0, defined = 0;
        for (std::size_t rep = 0; rep < c.replicates; ++rep) {
            const StudyRow& r = res.rows[li * c.replicates + rep];
            ea.push_back(r.abs_err_alpha);
            et.push_back(r.abs_err_theta);
            ek.push_back(r.abs_err_theta_known);
            below += r.defined && r.plug_in.alpha_hat <= c.def.params.alpha;
            defined += r.defined;
        }
        res.summary.push_back({c.windows[li], c.replicates, defined, median_of(ea), median_of(et), median_of(ek),
                               defined ? static_cast<double>(below) / static_cast<double>(defined) : 0.0});
    }
    return res;
}

inline std::string study_csv(const StudyResult& res, std::size_t p) {
    std::string out = "L,replicate,n_points,alpha_hat,epsilon";
    for (std::size_t i = 0; i < p; ++i) out += ",theta_hat_" + std::to_string(i + 1);
    for (std::size_t i = 0; i < p; ++i) out += ",theta_hat_known_alpha_" + std::to_string(i + 1);
    out += ",abs_err_alpha,abs_err_theta,abs_err_theta_known_alpha,defined,at_boundary\n";
    for (const StudyRow& r : res.rows) {
        out += format_double(r.L) + "," + std::to_string(r.replicate) + "," + std::to_string(r.n_points) + "," +
               format_double(r.plug_in.alpha_hat) + "," + format_double(r.plug_in.epsilon);
        for (double t : r.plug_in.theta_hat) out += "," + format_double(t);
        for (double t : r.known.theta_hat) out += "," + format_double(t);
        out += "," + format_double(r.abs_err_alpha) + "," + format_double(r.abs_err_theta) + "," +
               format_double(r.abs_err_theta_known) + "," + (r.defined ? "1," : "0,") +
               (r.plug_in.any_at_boundary() || r.known.any_at_boundary() ? "1" : "0") + "\n";
    }
    return out;
}

// Per-L medians (fraction of alpha_hat <= alpha* is over defined fits); with more than one window a trend line states whether each
// median decreases strictly along the ladder.
inline std::string study_summary_csv(const StudyResult& res) {
    std::string out = "L,n,n_defined,median_abs_err_alpha,median_abs_err_theta,median_abs_err_theta_known_alpha,frac_alpha_le_truth\n";
    for (const auto& s : res.summary)
        out += format_double(s.L) + "," + std::to_string(s.n) + "," + std::to_string(s.n_defined) + "," +
               format_double(s.median_abs_err_alpha) + "," +
               format_double(s.median_abs_err_theta) + "," + format_double(s.median_abs_err_theta_known) + "," +
               format_double(s.frac_alpha_le_truth) + "\n";
    if (res.summary.size() > 1) {
        auto decreasing = [&](auto field) {
            for (std::size_t i = 1; i < res.summary.size(); ++i)
                if (!(field(res.summary[i]) < field(res.summary[i - 1]))) return false;
            return true;
        };
        out += "# trend alpha_decreasing=" +
               std::to_string(decreasing([](const StudySummaryRow& s) { return s.median_abs_err_alpha; })) +
               " theta_decreasing=" +
               std::to_string(decreasing([](const StudySummaryRow& s) { return s.median_abs_err_theta; })) +
               " theta_known_alpha_decreasing=" +
               std::to_string(decreasing([](const StudySummaryRow& s) { return s.median_abs_err_theta_known; })) + "\n";
    }
    return out;
}

}  // namespace nhg
