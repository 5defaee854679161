#include "experiments.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "qaoaprep/qaoaprep.hpp"

namespace qaoaprep::cli {

namespace {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    LineFit fit;
    const double m = double(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = m * sxx - sx * sx;
    if (std::abs(denom) < 1e-300) return fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / m;
    double rss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
        rss += r * r;
    }
    fit.rms = std::sqrt(rss / m);
    return fit;
}

}  // namespace

int run_optimal_angles(const OptimalAnglesOptions& options) {
    if (options.n_lo < 1 || options.n_hi < options.n_lo)
        throw std::invalid_argument("optimal-angles: bad n range");
    std::vector<ResultRow> rows;
    for (int n = options.n_lo; n <= options.n_hi; ++n) {
        Stopwatch watch;
        try {
            const auto sol = analytic::solve_optimal_p1(n);
            rows.push_back({"optimal-angles", n, 1, 1, sol.gamma, sol.beta, sol.magnitude_sq,
                            analytic::beta_equation_residual(n, sol.beta), watch.seconds()});
            if (n >= 5) {
                const auto asym = analytic::asymptotic_angles(n);
                rows.push_back({"optimal-angles-asymptotic", n, 1, 1, asym.gamma, asym.beta,
                                analytic::overlap_sq_on_line(n, asym.beta),
                                std::abs(sol.beta - asym.beta), watch.seconds()});
            }
        } catch (const solver_failure&) {
            rows.push_back({"optimal-angles-failed", n, 1, 1, 0.0, 0.0, 0.0,
                            std::numeric_limits<double>::quiet_NaN(), watch.seconds()});
        }
    }
    emit_rows(rows, options.out, options.format);
    return exit_ok;
}

int run_lastlayer(const LastLayerOptions& options) {
    if (options.n_lo < 1 || options.n_hi < options.n_lo)
        throw std::invalid_argument("lastlayer: bad n range");
    if (options.p < 1 || options.p > 5)
        throw std::invalid_argument("lastlayer: p must be in [1, 5]");
    if (options.strategy != "global" && options.strategy != "layerwise")
        throw std::invalid_argument("lastlayer: strategy must be global or layerwise");

    std::vector<ResultRow> rows;
    const int p = options.p;
    std::map<int, std::vector<std::pair<double, double>>> per_layer_points;  // layer -> (beta, gamma)

    for (int n = options.n_lo; n <= options.n_hi; ++n) {
        Stopwatch watch;
        train::OptimizerConfig config;
        config.restarts = options.restarts;
        config.rng_seed = options.seed;

        AngleSchedule schedule;
        double magnitude_sq = 0.0;
        bool converged = false;
        if (options.strategy == "global") {
            const auto result = train::optimize_global(n, p, config);
            schedule = train::reduce_to_fundamental(result.schedule);
            magnitude_sq = result.overlap.magnitude_sq;
            converged = result.converged;
        } else {
            const auto trace = train::optimize_layerwise(n, p, config);
            schedule = train::reduce_to_fundamental(trace.records.back().schedule);
            magnitude_sq = trace.records.back().magnitude_sq;
            converged = trace.converged;
        }
        const double elapsed = watch.seconds();
        const std::string tag = converged ? "lastlayer" : "lastlayer-nonconverged";
        for (int k = 1; k <= p; ++k) {
            const double gamma = schedule.gammas[std::size_t(k) - 1];
            const double beta = schedule.betas[std::size_t(k) - 1];
            rows.push_back({tag, n, p, k, gamma, beta, magnitude_sq,
                            std::abs(wrap_pm_pi(gamma + 2.0 * beta - pi)), elapsed});
            per_layer_points[k].push_back({beta, gamma});
        }
    }

    // Per-layer linear fits of gamma against beta across the n range
    // (reported, not asserted). Encoded as gamma=slope, beta=intercept,
    // residual=rms.
    for (const auto& [layer, points] : per_layer_points) {
        std::vector<double> xs, ys;
        for (const auto& [beta, gamma] : points) {
            xs.push_back(beta);
            ys.push_back(gamma);
        }
        const LineFit fit = fit_line(xs, ys);
        rows.push_back({"lastlayer-fit", 0, p, layer, fit.slope, fit.intercept, 0.0, fit.rms, 0.0});
    }

    emit_rows(rows, options.out, options.format);
    return exit_ok;
}

int run_saturation(const SaturationOptions& options) {
    if (options.n_lo < 1 || options.n_hi < options.n_lo)
        throw std::invalid_argument("saturation: bad n range");
    if (options.seeds < 1) throw std::invalid_argument("saturation: seeds >= 1 required");

    train::NoiseModel noise;
    std::string noise_tag;
    if (options.noise == "none") {
        noise.kind = train::NoiseKind::none;
        noise_tag = "noise=none";
    } else if (options.noise == "phase") {
        noise.kind = train::NoiseKind::phase_noise;
        noise.sigma = options.sigma;
        noise_tag = "noise=phase,sigma=" + format_double(options.sigma);
    } else if (options.noise == "undertrain") {
        noise.kind = train::NoiseKind::undertrain;
        noise.undertrain_iterations = options.undertrain_iters;
        noise_tag = "noise=undertrain,iters=" + std::to_string(options.undertrain_iters);
    } else {
        throw std::invalid_argument("saturation: noise must be none, phase or undertrain");
    }
    noise.validate();

    std::vector<ResultRow> rows;
    for (int n = options.n_lo; n <= options.n_hi; ++n) {
        const int p_max = options.p_max > 0 ? options.p_max : 2 * n + 2;
        std::map<int, int> pstar_counts;  // -1 encodes "none"
        for (int s = 0; s < options.seeds; ++s) {
            Stopwatch watch;
            train::OptimizerConfig config;
            config.restarts = options.restarts;
            config.rng_seed = options.seed + std::uint64_t(s);
            const auto trace = train::optimize_layerwise(n, p_max, config, noise);
            const auto pstar = train::detect_saturation(trace, options.epsilon);
            const double elapsed = watch.seconds();

            const std::string tag = "saturation[" + noise_tag + ",seed=" + std::to_string(s) + "]";
            for (const auto& rec : trace.records)
                rows.push_back({tag, n, rec.depth, rec.depth, rec.schedule.gammas.back(),
                                rec.schedule.betas.back(), rec.magnitude_sq, rec.improvement,
                                elapsed});
            rows.push_back({tag + "/pstar", n, pstar.value_or(-1), 0, 0.0, 0.0,
                            trace.records.back().magnitude_sq, options.epsilon, elapsed});
            pstar_counts[pstar.value_or(-1)] += 1;
        }
        int modal = -1, modal_count = -1;
        for (const auto& [value, count] : pstar_counts)
            if (count > modal_count) {
                modal = value;
                modal_count = count;
            }
        rows.push_back({"saturation-modal[" + noise_tag + "]", n, modal, 0, 0.0, 0.0,
                        double(modal_count) / options.seeds, options.epsilon, 0.0});
    }

    emit_rows(rows, options.out, options.format);
    return exit_ok;
}

}  // namespace qaoaprep::cli
