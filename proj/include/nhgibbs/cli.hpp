#pragma once

#include "estimate.hpp"
#include "gnz.hpp"
#include "model_spec.hpp"
#include "oracle.hpp"
#include "sampler.hpp"
#include "study.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace nhg {

// Exit status contract of the command-line tool.
enum ExitCode : int { exit_ok = 0, exit_diagnostic = 1, exit_invalid = 2, exit_internal = 3 };

inline const char* kConfigHelp = R"(Configuration files hold one `key = value` per line; `#` starts a comment.

Model spec (--model-spec):
  model            hardsphere | delaunay | knn | poisson
  steps            hardsphere: comma separated annulus widths s_1 <= ... <= s_p
  min_edge         delaunay: minimal edge length r
  k                knn: number of neighbours
  phi              knn: const | linear | trunclin | step     (default const)
  phi_params       knn: parameters of phi                     (default 1)
  alpha            hardcore parameter                         (default 1)
  theta            comma separated interaction parameters
  alpha_min, alpha_max   admissible alpha range (default alpha/2 .. 2 alpha)
  theta_min, theta_max   estimation box, scalar or per component (default -5, 5)
  p_birth, p_death, p_move, p_cluster_birth, p_cluster_death
                   proposal probabilities (defaults depend on the model;
                   knn needs cluster moves to be irreducible)
  sigma            move proposal standard deviation
  cluster_radius   radius of the disc holding a cluster birth

Study config (study --config):
  model_spec       path to a model spec (relative to the config file), or the
                   model keys above inline
  windows          comma separated torus side lengths   (default 5,10,20)
  replicates       fits per window size                  (default 20)
  seed             root seed of all chains               (default 1)
  burn_per_area    burn-in steps per unit area           (default 500)
  quad             quadrature nodes per unit area        (default 100)
  p_*, sigma, cluster_radius   sampler overrides as above

Exit status: 0 success, 1 GNZ check breached, 2 invalid input, 3 internal error.
)";

namespace cli_detail {

struct LoadedSpec {
    KeyValues kv;
    ModelDefinition def;
};

inline LoadedSpec load_spec(const std::string& path) {
    LoadedSpec s;
    s.kv = KeyValues::load(path);
    s.def = parse_model_definition(s.kv);
    return s;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("NHGIBBS_SEED")) {
        long long v = parse_integer(env, "NHGIBBS_SEED");
        require(v >= 0, ErrorKind::invalid_argument, "NHGIBBS_SEED must be >= 0");
        return static_cast<std::uint64_t>(v);
    }
    return 1;
}

// Every 10th kept sample is recomputed by the brute-force energy.
inline void oracle_check(const SampleSet& set, const Model& model, const ModelParams& params) {
    for (std::size_t i = 0; i < set.samples.size(); i += 10) {
        ExtendedEnergy brute = brute_window_energy(model, params, set.samples[i]);
        double fast = set.energy_trace[i];
        bool ok = brute.is_finite() && std::fabs(brute.value() - fast) <= 1e-9 * std::max(1.0, std::fabs(fast));
        require(ok, ErrorKind::internal,
                "oracle mismatch at " + sample_file_name(i) + ": chain energy " + format_double(fast) +
                    ", brute force " + format_double(brute.value()));
    }
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Simulation and two-step fitting of Gibbs point processes with a non-hereditary hardcore"};
    app.footer(kConfigHelp);
    app.require_subcommand(1);
    unsigned threads = default_threads();
    app.add_option("--threads", threads, "worker threads (default: hardware concurrency)")->check(CLI::PositiveNumber);

    std::string spec_path, out_path;
    std::optional<std::uint64_t> seed;

    auto* sim = app.add_subcommand("simulate", "run the sampler and write a sample archive");
    double window = 0.0;
    std::uint64_t burn = 0, keep = 0, thin = 1;
    bool oracle = false;
    sim->add_option("--model-spec", spec_path, "model spec file")->required()->check(CLI::ExistingFile);
    sim->add_option("--window", window, "torus side length L")->required()->check(CLI::PositiveNumber);
    sim->add_option("--burn", burn, "burn-in steps")->required();
    sim->add_option("--keep", keep, "number of kept samples")->required();
    sim->add_option("--thin", thin, "steps between kept samples")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", seed, "seed (overrides NHGIBBS_SEED)");
    sim->add_option("--out", out_path, "archive directory")->required();
    sim->add_flag("--oracle", oracle, "cross-check every 10th sample against the brute-force energy");

    auto* est = app.add_subcommand("estimate", "two-step estimate of (alpha, theta) from one pattern");
    std::string pattern_path, boundary;
    std::optional<double> est_window;
    double quad = 400.0;
    est->add_option("--model-spec", spec_path, "model spec file")->required()->check(CLI::ExistingFile);
    est->add_option("--pattern", pattern_path, "pattern CSV (x,y); L is read from the .meta sidecar")
        ->required()
        ->check(CLI::ExistingFile);
    est->add_option("--window", est_window, "side length L when the pattern has no sidecar")
        ->check(CLI::PositiveNumber);
    est->add_option("--boundary", boundary, "torus | plane (plane uses minus-sampling)")
        ->check(CLI::IsMember({"torus", "plane"}));
    est->add_option("--quad", quad, "quadrature nodes per unit area")->check(CLI::PositiveNumber);
    est->add_option("--out", out_path, "output CSV")->required();

    auto* gnz = app.add_subcommand("gnz-check", "Monte Carlo check of the equilibrium equation on a sample archive");
    std::string samples_dir, functionals = "constant_one,statistics";
    double z_max = 4.0, gnz_quad = 400.0;
    gnz->add_option("--model-spec", spec_path, "model spec file")->required()->check(CLI::ExistingFile);
    gnz->add_option("--samples", samples_dir, "archive directory")->required()->check(CLI::ExistingDirectory);
    gnz->add_option("--functionals", functionals,
                    "comma list of constant_one, statistics, statistic_component(i), empty_ball_indicator(r)");
    gnz->add_option("--quad", gnz_quad, "quadrature nodes per unit area")->check(CLI::PositiveNumber);
    gnz->add_option("--out", out_path, "output CSV")->required();
    gnz->add_option("--z-max", z_max, "largest admissible |z|")->check(CLI::PositiveNumber);

    auto* study = app.add_subcommand("study", "replicated fits along a ladder of window sizes");
    std::string config_path;
    study->add_option("--config", config_path, "study config file")->required()->check(CLI::ExistingFile);
    study->add_option("--out", out_path, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_invalid;
    }

    try {
        if (*sim) {
            cli_detail::LoadedSpec spec = cli_detail::load_spec(spec_path);
            SamplerConfig sc = apply_sampler_keys(default_sampler_config(spec.def.model, spec.def.params), spec.kv);
            sc.burn_in = burn;
            sc.keep = keep;
            sc.thin = thin;
            sc.seed = cli_detail::resolve_seed(seed);
            SampleSet set = run_chain(spec.def.model, spec.def.params, Window(window), sc);
            if (oracle) cli_detail::oracle_check(set, spec.def.model, spec.def.params);
            write_archive(set, spec.def, out_path);
            out << "wrote " << set.samples.size() << " samples to " << out_path << "\n";
        } else if (*est) {
            cli_detail::LoadedSpec spec = cli_detail::load_spec(spec_path);
            std::filesystem::path csv = pattern_path;
            std::optional<Window> w;
            if (std::filesystem::exists(meta_path_for(csv))) {
                KeyValues meta = KeyValues::load(meta_path_for(csv));
                double L = est_window ? *est_window : meta.get_double("L");
                w = Window(L, parse_boundary(boundary.empty() ? meta.get_or("boundary", "torus") : boundary));
            } else {
                require(est_window.has_value(), ErrorKind::invalid_argument,
                        csv.string() + " has no .meta sidecar; pass --window");
                w = Window(*est_window, parse_boundary(boundary.empty() ? "torus" : boundary));
            }
            PointConfiguration cfg = read_pattern(csv, w);
            EstimationResult r = two_step(spec.def.model, cfg, Region::whole(),
                                          {spec.def.theta_min, spec.def.theta_max}, {quad});
            KeyValues::write_text(out_path, estimate_csv_header(spec.def.model.dimension()) + estimate_csv_row(r));
            if (r.degenerate) err << "warning: degenerate data, estimate rests on the box\n";
            out << estimate_csv_row(r);
        } else if (*gnz) {
            cli_detail::LoadedSpec spec = cli_detail::load_spec(spec_path);
            Archive a = read_archive(samples_dir);
            require(!a.samples.empty(), ErrorKind::empty_sample_set, samples_dir + " holds no samples");
            for (std::size_t i = 0; i < a.samples.size(); ++i)
                require(window_energy(spec.def.model, spec.def.params, a.samples[i]).is_finite(),
                        ErrorKind::invalid_argument, a.files[i].string() + ": sample is infeasible under the model");
            auto fs = parse_functionals(functionals, spec.def.model.dimension());
            GnzReport rep = gnz_report(a.samples, spec.def.model, spec.def.params, fs, Region::whole(), {gnz_quad},
                                       threads);
            KeyValues::write_text(out_path, rep.csv());
            out << rep.csv();
            if (rep.max_abs_z() > z_max) {
                err << "GNZ check failed: max |z| = " << format_double(rep.max_abs_z()) << " > "
                    << format_double(z_max) << "\n";
                return exit_diagnostic;
            }
        } else if (*study) {
            std::filesystem::path cfg_path = config_path;
            StudyConfig c = parse_study_config(KeyValues::load(cfg_path), cfg_path.parent_path());
            StudyResult res = run_study(c, threads);
            std::filesystem::create_directories(out_path);
            std::filesystem::path dir = out_path;
            KeyValues::write_text(dir / "study.csv", study_csv(res, c.def.model.dimension()));
            std::string summary = study_summary_csv(res);
            KeyValues::write_text(dir / "summary.csv", summary);
            out << summary;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::internal ? exit_internal : exit_invalid;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
    return exit_ok;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<const char*> argv{"nhgibbs"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nhg
