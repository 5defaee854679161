#pragma once

#include <bit>
#include <string>
#include <vector>

#include "core.hpp"
#include "symsim.hpp"

// Brute-force 2^n statevector simulator. Ground truth for the symmetric
// subspace path, and the only backend that can exercise targets other than
// |0..0>.

namespace qaoaprep::oracle {

inline constexpr int default_max_qubits = 12;

// Computational basis target |t>. bits[j] is qubit j; the basis index uses
// bit j of the label, so index = sum_j bits[j] << j.
struct TargetSpec {
    std::string bits;

    TargetSpec() = default;
    explicit TargetSpec(std::string b) : bits(std::move(b)) {
        for (char c : bits)
            if (c != '0' && c != '1')
                throw std::invalid_argument("TargetSpec: bits must be '0'/'1'");
    }

    static TargetSpec all_zeros(int n) { return TargetSpec(std::string(std::size_t(n), '0')); }

    int qubit_count() const { return static_cast<int>(bits.size()); }

    std::size_t index() const {
        std::size_t idx = 0;
        for (std::size_t j = 0; j < bits.size(); ++j)
            if (bits[j] == '1') idx |= std::size_t(1) << j;
        return idx;
    }
};

struct StateVector {
    int n = 0;
    std::vector<cx> amps;  // size 2^n

    double norm_sq() const {
        double s = 0.0;
        for (const cx& a : amps) s += std::norm(a);
        return s;
    }
};

inline StateVector plus_state(int n, int max_qubits = default_max_qubits) {
    if (n < 1) throw std::invalid_argument("plus_state: n >= 1 required");
    if (n > max_qubits)
        throw resource_limit_error("plus_state: n = " + std::to_string(n) +
                                   " exceeds the statevector cap " + std::to_string(max_qubits));
    StateVector state{n, std::vector<cx>(std::size_t(1) << n,
                                         cx(std::exp(-0.5 * n * std::log(2.0)), 0.0))};
    return state;
}

inline void apply_target_phase(StateVector& state, const TargetSpec& target, double gamma) {
    if (target.qubit_count() != state.n)
        throw std::invalid_argument("apply_target_phase: target length mismatch");
    state.amps[target.index()] *= std::polar(1.0, -gamma);
}

// exp(-i beta sum_j X_j) as n sequential in-place single-qubit rotations
// (stride-2^j sweeps); never materializes a 2^n x 2^n matrix.
inline void apply_mixer_sweeps(StateVector& state, double beta) {
    const double c = std::cos(beta);
    const cx mis(0.0, -std::sin(beta));
    const std::size_t size = state.amps.size();
    for (int j = 0; j < state.n; ++j) {
        const std::size_t stride = std::size_t(1) << j;
        for (std::size_t base = 0; base < size; base += 2 * stride)
            for (std::size_t i = base; i < base + stride; ++i) {
                const cx a = state.amps[i];
                const cx b = state.amps[i + stride];
                state.amps[i] = c * a + mis * b;
                state.amps[i + stride] = mis * a + c * b;
            }
    }
}

inline OverlapResult statevector_overlap(int n, const AngleSchedule& schedule,
                                         const TargetSpec& target,
                                         int max_qubits = default_max_qubits) {
    if (target.qubit_count() != n)
        throw std::invalid_argument("statevector_overlap: target length mismatch");
    StateVector state = plus_state(n, max_qubits);
    const std::size_t t = target.index();
    for (int k = 0; k < schedule.depth(); ++k) {
        state.amps[t] *= std::polar(1.0, -schedule.gammas[k]);
        apply_mixer_sweeps(state, schedule.betas[k]);
    }
    return OverlapResult::from_overlap(state.amps[t]);
}

// Symmetric-subspace component of a statevector plus the norm of the
// orthogonal remainder. The component is returned as stored coefficients
// <D_k|psi>; it is not renormalized.
struct DickeProjection {
    symsim::DickeState component;
    double residual_norm = 0.0;
};

inline DickeProjection project_to_dicke(const StateVector& state) {
    const int n = state.n;
    std::vector<cx> sums(std::size_t(n) + 1, cx{});
    for (std::size_t x = 0; x < state.amps.size(); ++x)
        sums[std::popcount(x)] += state.amps[x];
    DickeProjection proj{symsim::DickeState{n, std::vector<cx>(std::size_t(n) + 1)}, 0.0};
    std::vector<double> inv_sqrt_binom(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) {
        inv_sqrt_binom[k] = std::exp(-0.5 * log_binomial(n, k));
        proj.component.amps[k] = sums[k] * inv_sqrt_binom[k];
    }
    // Residual accumulated componentwise in the full space; the alternative
    // norm difference cancels catastrophically for near-symmetric states.
    double residual_sq = 0.0;
    for (std::size_t x = 0; x < state.amps.size(); ++x) {
        const int k = std::popcount(x);
        residual_sq += std::norm(state.amps[x] - proj.component.amps[k] * inv_sqrt_binom[k]);
    }
    proj.residual_norm = std::sqrt(residual_sq);
    return proj;
}

}  // namespace qaoaprep::oracle
