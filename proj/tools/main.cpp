#include <CLI11.hpp>
#include <iostream>

#include "cli_common.hpp"
#include "experiments.hpp"
#include "qaoaprep/core.hpp"
#include "verify.hpp"

// Experiment runner and verification harness. Subcommands:
//   verify          cross-validate the simulators, closed forms and trainers
//   optimal-angles  single-layer optima vs the large-n expansion
//   lastlayer       globally trained circuits and the last-layer angle relation
//   saturation      layerwise training traces, saturation depths, noise variants

using namespace qaoaprep;

int main(int argc, char** argv) {
    CLI::App app{"projector-target circuit simulation, analysis and training"};
    app.require_subcommand(1);

    cli::VerifyOptions verify_options;
    CLI::App* verify = app.add_subcommand("verify", "run the cross-validation suite");
    verify->add_option("--n-max", verify_options.n_max, "largest qubit count probed");
    verify->add_option("--probes", verify_options.probes, "random probes per property");
    verify->add_option("--seed", verify_options.seed, "probe rng seed");
    verify->add_flag("--quick", verify_options.quick, "reduced ranges for smoke runs");
    verify->add_flag("--corrupt", verify_options.corrupt,
                     "inject a fake discrepancy (harness self-test)");
    verify->add_option("--out", verify_options.out, "write per-property rows to this path");
    verify->add_option("--format", verify_options.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    cli::OptimalAnglesOptions angles_options;
    std::string angles_range = "1:24";
    int angles_n = 0;
    CLI::App* angles = app.add_subcommand("optimal-angles",
                                          "single-layer optima, expansions and residuals");
    angles->add_option("--n-range", angles_range, "qubit range A:B");
    angles->add_option("--n", angles_n, "single qubit count (overrides --n-range)");
    angles->add_option("--out", angles_options.out, "output path (stdout if absent)");
    angles->add_option("--format", angles_options.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    cli::LastLayerOptions lastlayer_options;
    std::string lastlayer_range = "6:12";
    int lastlayer_n = 0;
    CLI::App* lastlayer = app.add_subcommand("lastlayer",
                                             "trained circuits and the final-layer relation");
    lastlayer->add_option("--n-range", lastlayer_range, "qubit range A:B");
    lastlayer->add_option("--n", lastlayer_n, "single qubit count (overrides --n-range)");
    lastlayer->add_option("--p", lastlayer_options.p, "circuit depth (<= 5)");
    lastlayer->add_option("--strategy", lastlayer_options.strategy, "global or layerwise")
        ->check(CLI::IsMember({"global", "layerwise"}));
    lastlayer->add_option("--restarts", lastlayer_options.restarts, "optimizer restarts");
    lastlayer->add_option("--seed", lastlayer_options.seed, "optimizer rng seed");
    lastlayer->add_option("--out", lastlayer_options.out, "output path (stdout if absent)");
    lastlayer->add_option("--format", lastlayer_options.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    cli::SaturationOptions saturation_options;
    std::string saturation_range = "4:6";
    int saturation_n = 0;
    CLI::App* saturation = app.add_subcommand("saturation",
                                              "layerwise training depth scans");
    saturation->add_option("--n-range", saturation_range, "qubit range A:B");
    saturation->add_option("--n", saturation_n, "single qubit count (overrides --n-range)");
    saturation->add_option("--p-max", saturation_options.p_max,
                           "layer budget (default 2n+2 per n)");
    saturation->add_option("--noise", saturation_options.noise, "none, phase or undertrain")
        ->check(CLI::IsMember({"none", "phase", "undertrain"}));
    saturation->add_option("--sigma", saturation_options.sigma,
                           "phase-noise std-dev in radians");
    saturation->add_option("--undertrain-iters", saturation_options.undertrain_iters,
                           "gradient steps per layer when undertraining");
    saturation->add_option("--seeds", saturation_options.seeds, "number of seeds per n");
    saturation->add_option("--seed", saturation_options.seed, "base rng seed");
    saturation->add_option("--epsilon", saturation_options.epsilon,
                           "improvement threshold for saturation detection");
    saturation->add_option("--restarts", saturation_options.restarts, "optimizer restarts");
    saturation->add_option("--out", saturation_options.out, "output path (stdout if absent)");
    saturation->add_option("--format", saturation_options.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? cli::exit_ok : cli::exit_config_error;
    }

    try {
        if (verify->parsed()) return cli::run_verify(verify_options);
        if (angles->parsed()) {
            auto [lo, hi] = cli::parse_range(angles_range);
            if (angles_n > 0) lo = hi = angles_n;
            angles_options.n_lo = lo;
            angles_options.n_hi = hi;
            return cli::run_optimal_angles(angles_options);
        }
        if (lastlayer->parsed()) {
            auto [lo, hi] = cli::parse_range(lastlayer_range);
            if (lastlayer_n > 0) lo = hi = lastlayer_n;
            lastlayer_options.n_lo = lo;
            lastlayer_options.n_hi = hi;
            return cli::run_lastlayer(lastlayer_options);
        }
        if (saturation->parsed()) {
            auto [lo, hi] = cli::parse_range(saturation_range);
            if (saturation_n > 0) lo = hi = saturation_n;
            saturation_options.n_lo = lo;
            saturation_options.n_hi = hi;
            return cli::run_saturation(saturation_options);
        }
    } catch (const resource_limit_error& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return cli::exit_solver_or_resource;
    } catch (const solver_failure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return cli::exit_solver_or_resource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return cli::exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::exit_solver_or_resource;
    }
    return cli::exit_config_error;
}
