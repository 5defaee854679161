#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qaoaprep {

using cx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// A bracketing root finder found no sign change, or an optimizer could not
// produce a usable result.
class solver_failure : public std::runtime_error {
public:
    explicit solver_failure(const std::string& what) : std::runtime_error(what) {}
};

// A request exceeded a configured size cap (statevector qubit limit etc.).
class resource_limit_error : public std::runtime_error {
public:
    explicit resource_limit_error(const std::string& what) : std::runtime_error(what) {}
};

// Wrap an angle into (-pi, pi].
inline double wrap_pm_pi(double x) {
    double r = std::remainder(x, two_pi);
    if (r <= -pi) r += two_pi;
    return r;
}

// Wrap a value into [0, period).
inline double wrap_into(double x, double period) {
    double r = std::fmod(x, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
}

// Circuit parameters: one (gamma_k, beta_k) pair per layer, k = 1..p.
// Raw values may be arbitrary reals; canonicalized() is the explicit, opt-in
// reduction to gamma in [0, 2pi), beta in [0, pi).
struct AngleSchedule {
    std::vector<double> gammas;
    std::vector<double> betas;

    AngleSchedule() = default;
    AngleSchedule(std::vector<double> g, std::vector<double> b)
        : gammas(std::move(g)), betas(std::move(b)) {
        if (gammas.size() != betas.size())
            throw std::invalid_argument("AngleSchedule: gamma/beta length mismatch");
    }

    int depth() const { return static_cast<int>(gammas.size()); }

    bool operator==(const AngleSchedule&) const = default;
};

// Reducing beta mod pi multiplies the prepared state by a global phase
// (-1)^n per wrap, so |g| is unchanged but the sign of g may flip for odd n.
inline AngleSchedule canonicalized(AngleSchedule s) {
    for (double& g : s.gammas) g = wrap_into(g, two_pi);
    for (double& b : s.betas) b = wrap_into(b, pi);
    return s;
}

inline double schedule_norm(const AngleSchedule& s) {
    double acc = 0.0;
    for (double g : s.gammas) acc += g * g;
    for (double b : s.betas) acc += b * b;
    return std::sqrt(acc);
}

// Complex overlap g = <t|psi> together with the derived success probability
// |g|^2 and the energy 1 - |g|^2 of the complement projector.
struct OverlapResult {
    cx g;
    double magnitude_sq = 0.0;
    double energy_pperp = 1.0;

    static OverlapResult from_overlap(cx overlap) {
        const double m = std::norm(overlap);
        return {overlap, m, 1.0 - m};
    }
};

inline double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace qaoaprep
