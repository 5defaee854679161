#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "core.hpp"

// Closed forms for the single-layer overlap, the stationarity conditions at
// its optimum, the transcendental equation for the optimal mixer angle, the
// large-n angle expansions, and the depth recursion for g_p.

namespace qaoaprep::analytic {

// Signed cos^n(beta) evaluated in log space so the magnitude stays meaningful
// (or underflows cleanly to zero) for n in the hundreds.
inline double cos_pow(double beta, int n) {
    if (n == 0) return 1.0;
    const double c = std::cos(beta);
    if (c == 0.0) return 0.0;
    const double sign = (c < 0.0 && (n & 1)) ? -1.0 : 1.0;
    const double logmag = n * std::log(std::abs(c));
    if (logmag < -745.0) return 0.0;
    return sign * std::exp(logmag);
}

// |g_1|^2 = 2^-n [1 + 2 cos^n(b) (cos(g - n b) - cos(n b)) + 2 cos^2n(b) (1 - cos g)]
inline double overlap_sq_p1(int n, double gamma, double beta) {
    const double cn = cos_pow(beta, n);
    const double bracket = 1.0 +
        2.0 * cn * (std::cos(gamma - n * beta) - std::cos(n * beta)) +
        2.0 * cn * cn * (1.0 - std::cos(gamma));
    return std::exp(-n * std::log(2.0)) * bracket;
}

// g_1 = 2^{-n/2} [e^{-i g} cos^n(b) + (e^{-i n b} - cos^n(b))]
inline cx overlap_complex_p1(int n, double gamma, double beta) {
    const double cn = cos_pow(beta, n);
    const cx bracket = std::polar(1.0, -gamma) * cn +
                       (std::polar(1.0, -n * beta) - cx(cn, 0.0));
    return std::exp(-0.5 * n * std::log(2.0)) * bracket;
}

// |g_1|^2 restricted to the stationarity line gamma = pi - 2 beta:
// 2^-n [1 + 4 cos^{n+1}(b) (cos^{n+1}(b) - cos((n+1) b))]
inline double overlap_sq_on_line(int n, double beta) {
    const double cn1 = cos_pow(beta, n + 1);
    const double bracket = 1.0 + 4.0 * cn1 * (cn1 - std::cos((n + 1) * beta));
    return std::exp(-n * std::log(2.0)) * bracket;
}

// Optimal-beta equation on the line: sin((n+2) b) - sin(2 b) cos^n(b).
// Roots (other than the excluded b = 0) locate the stationary mixer angles.
inline double beta_equation_residual(int n, double beta) {
    return std::sin((n + 2) * beta) - std::sin(2.0 * beta) * cos_pow(beta, n);
}

namespace detail {

// Bisection for beta_equation_residual on [lo, hi] down to width 1e-14.
inline double bisect_beta_equation(int n, double lo, double hi, const char* context) {
    double flo = beta_equation_residual(n, lo);
    const double fhi = beta_equation_residual(n, hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw solver_failure(std::string(context) + ": no sign change in bracket [" +
                             std::to_string(lo) + ", " + std::to_string(hi) +
                             "] for n = " + std::to_string(n));
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = beta_equation_residual(n, mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

// Root of the optimal-beta equation in the bracket around k pi/(n+2), the
// branch the leading-order analysis predicts for odd k.
inline double solve_branch_root(int n, int k) {
    if (n < 1 || k < 1)
        throw std::invalid_argument("solve_branch_root: n >= 1 and k >= 1 required");
    const double center = pi / (n + 2);
    return detail::bisect_beta_equation(n, (k - 0.5) * center, (k + 0.5) * center,
                                        "solve_branch_root");
}

// Single-layer optimum: beta from the k = 1 branch, gamma on the line.
struct P1Solution {
    int n = 0;
    double beta = 0.0;
    double gamma = 0.0;
    double magnitude_sq = 0.0;
    int branch_k = 1;
};

inline P1Solution solve_optimal_p1(int n) {
    if (n < 1) throw std::invalid_argument("solve_optimal_p1: n >= 1 required");
    const double beta = detail::bisect_beta_equation(
        n, 0.5 * pi / (n + 2), 1.5 * pi / (n + 2), "solve_optimal_p1");
    P1Solution sol;
    sol.n = n;
    sol.beta = beta;
    sol.gamma = pi - 2.0 * beta;
    sol.magnitude_sq = overlap_sq_on_line(n, beta);
    sol.branch_k = 1;
    return sol;
}

// Large-n expansions beta = pi/n - 4 pi/n^2, gamma = pi - 2 pi/n + 8 pi/n^2.
struct AsymptoticAngles {
    int n = 0;
    double beta = 0.0;
    double gamma = 0.0;
};

inline AsymptoticAngles asymptotic_angles(int n) {
    if (n < 5)
        throw std::invalid_argument("asymptotic_angles: expansion needs n >= 5");
    const double inv = 1.0 / n;
    return {n, pi * inv - 4.0 * pi * inv * inv, pi - 2.0 * pi * inv + 8.0 * pi * inv * inv};
}

// Residuals of the two stationarity conditions at (gamma, beta):
//   r_gamma = wrap(arg g_1 + gamma)            (phase condition on g)
//   r_beta  = wrap((pi - beta) - (gamma+pi)/2) (phase condition on the
//                                               commutator amplitude A)
// Both vanish at an interior optimum. The three degenerate configurations
// sin(gamma/2) = 0, cos(beta) = 0 and g = 0 are flagged instead of evaluated.
struct StationarityResiduals {
    double r_gamma = 0.0;
    double r_beta = 0.0;
    bool pathological = false;
};

inline StationarityResiduals stationarity_residuals(int n, double gamma, double beta) {
    constexpr double eps = 1e-13;
    const cx g = overlap_complex_p1(n, gamma, beta);
    if (std::abs(std::sin(0.5 * gamma)) < eps || std::abs(std::cos(beta)) < eps ||
        std::abs(g) < eps) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {nan, nan, true};
    }
    StationarityResiduals res;
    res.r_gamma = wrap_pm_pi(std::arg(g) + gamma);
    res.r_beta = wrap_pm_pi((pi - beta) - 0.5 * (gamma + pi));
    res.pathological = false;
    return res;
}

// One step of the depth recursion. Appending a layer (gamma_new, beta_new) to
// a depth-p circuit gives
//   g_{p+1} = g_p(gammas, betas with the last entry shifted by beta_new)
//           + g_p(gammas, betas) cos^n(beta_new) (e^{-i gamma_new} - 1),
// because the appended mixer merges with the adjacent one while the appended
// phase contributes through the projector. For p = 0 the shifted term falls
// back to the closed base case 2^{-n/2} e^{-i beta_new n}, the accumulated
// mixer acting on the |+>^n eigenstate.
template <class GEval>
cx recursion_step(int n, GEval&& g_eval, std::span<const double> gammas,
                  std::span<const double> betas, double gamma_new, double beta_new) {
    if (gammas.size() != betas.size())
        throw std::invalid_argument("recursion_step: gamma/beta length mismatch");
    cx shifted_term;
    if (betas.empty()) {
        shifted_term = std::exp(-0.5 * n * std::log(2.0)) * std::polar(1.0, -beta_new * n);
    } else {
        std::vector<double> shifted(betas.begin(), betas.end());
        shifted.back() += beta_new;
        shifted_term = g_eval(gammas, std::span<const double>(shifted));
    }
    const cx unshifted = g_eval(gammas, betas);
    return shifted_term +
           unshifted * cos_pow(beta_new, n) * (std::polar(1.0, -gamma_new) - cx(1.0, 0.0));
}

namespace detail {

// Recursive evaluation with an accumulated trailing mixer angle. The base
// case is <0..0| e^{-i shift H} |+>^n = 2^{-n/2} e^{-i shift n}.
inline cx recursion_eval(int n, std::span<const double> gammas,
                         std::span<const double> betas, double shift) {
    if (gammas.empty())
        return std::exp(-0.5 * n * std::log(2.0)) * std::polar(1.0, -shift * n);
    const std::size_t p = gammas.size();
    const double merged_beta = betas[p - 1] + shift;
    const auto head_g = gammas.first(p - 1);
    const auto head_b = betas.first(p - 1);
    const cx shifted = recursion_eval(n, head_g, head_b, merged_beta);
    const cx unshifted = recursion_eval(n, head_g, head_b, 0.0);
    return shifted + unshifted * cos_pow(merged_beta, n) *
                         (std::polar(1.0, -gammas[p - 1]) - cx(1.0, 0.0));
}

}  // namespace detail

// g_p built purely from the recursion and its closed base case; exponential in
// p (2^p leaf evaluations) but independent of the subspace simulator, which is
// what makes it useful as a cross-check.
inline cx recursion_overlap(int n, const AngleSchedule& schedule) {
    return detail::recursion_eval(n, schedule.gammas, schedule.betas, 0.0);
}

}  // namespace qaoaprep::analytic
