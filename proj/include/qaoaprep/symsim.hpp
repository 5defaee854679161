#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "core.hpp"

// Exact simulation of the projector-target circuit inside the permutation
// symmetric subspace. The initial state |+>^n, the mixer sum_j X_j and the
// projector onto |0..0> are all permutation invariant, so the full dynamics
// lives in the (n+1)-dimensional span of the Dicke states and every operation
// here is polynomial in n instead of 2^n.

namespace qaoaprep::symsim {

inline constexpr int default_max_qubits = 30;

// amps[k] multiplies the unit-norm Dicke state of Hamming weight k.
struct DickeState {
    int n = 0;
    std::vector<cx> amps;

    double norm_sq() const {
        double s = 0.0;
        for (const cx& a : amps) s += std::norm(a);
        return s;
    }
};

// |+>^n in the Dicke basis: amps[k] = sqrt(C(n,k)) * 2^{-n/2}, evaluated in
// log space so the binomials stay exact in double up to the n cap.
inline DickeState dicke_init(int n, int max_qubits = default_max_qubits) {
    if (n < 1 || n > max_qubits)
        throw std::invalid_argument("dicke_init: n must be in [1, " +
                                    std::to_string(max_qubits) + "], got " + std::to_string(n));
    DickeState state{n, std::vector<cx>(n + 1)};
    const double ln2 = std::log(2.0);
    for (int k = 0; k <= n; ++k)
        state.amps[k] = std::exp(0.5 * (log_binomial(n, k) - n * ln2));
    return state;
}

// exp(-i gamma |0..0><0..0|): phases the weight-0 amplitude, nothing else.
inline DickeState apply_projector_phase(DickeState state, double gamma) {
    if (state.amps.empty())
        throw std::invalid_argument("apply_projector_phase: empty state");
    state.amps[0] *= std::polar(1.0, -gamma);
    return state;
}

// Spectral data of the mixer restricted to the symmetric subspace: the real
// symmetric tridiagonal matrix with zero diagonal and off-diagonal entries
// sqrt((k+1)(n-k)). Eigenvalues are the integers n-2k; we keep the numeric
// decomposition so the propagator for any beta is a phase reweighting.
struct MixerBasis {
    int n = 0;
    std::vector<double> eigenvalues;  // length n+1
    std::vector<double> vectors;      // row-major, vectors[i*(n+1)+j] = <D_i|v_j>
    std::vector<double> offdiag;      // offdiag[k] = sqrt((k+1)(n-k))

    int dim() const { return n + 1; }
};

// Cached per n; safe for concurrent lookups (entries are immutable once built).
inline const MixerBasis& mixer_basis(int n) {
    if (n < 1) throw std::invalid_argument("mixer_basis: n >= 1 required");
    static std::mutex guard;
    static std::map<int, std::unique_ptr<const MixerBasis>> cache;
    std::lock_guard<std::mutex> lock(guard);
    auto& slot = cache[n];
    if (!slot) {
        const int dim = n + 1;
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd sub(dim - 1);
        for (int k = 0; k < n; ++k)
            sub[k] = std::sqrt(double(k + 1) * double(n - k));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
        solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (solver.info() != Eigen::Success)
            throw solver_failure("mixer_basis: eigendecomposition failed for n = " + std::to_string(n));
        auto basis = std::make_unique<MixerBasis>();
        basis->n = n;
        basis->eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
        basis->vectors.resize(std::size_t(dim) * dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                basis->vectors[std::size_t(i) * dim + j] = solver.eigenvectors()(i, j);
        basis->offdiag.assign(sub.data(), sub.data() + dim - 1);
        slot = std::move(basis);
    }
    return *slot;
}

// amps <- V diag(e^{-+i beta w}) V^T amps. The adjoint flag flips the phase sign.
inline void apply_mixer_in_basis(const MixerBasis& basis, double beta,
                                 std::vector<cx>& amps, bool adjoint = false) {
    const int dim = basis.dim();
    if (static_cast<int>(amps.size()) != dim)
        throw std::invalid_argument("apply_mixer_in_basis: dimension mismatch");
    std::vector<cx> t(dim);
    for (int j = 0; j < dim; ++j) {
        cx acc{};
        for (int i = 0; i < dim; ++i)
            acc += basis.vectors[std::size_t(i) * dim + j] * amps[i];
        t[j] = acc;
    }
    const double sign = adjoint ? 1.0 : -1.0;
    for (int j = 0; j < dim; ++j)
        t[j] *= std::polar(1.0, sign * beta * basis.eigenvalues[j]);
    for (int i = 0; i < dim; ++i) {
        cx acc{};
        for (int j = 0; j < dim; ++j)
            acc += basis.vectors[std::size_t(i) * dim + j] * t[j];
        amps[i] = acc;
    }
}

// out <- H_sym in, with H_sym the tridiagonal mixer restriction.
inline void apply_mixer_hamiltonian(const MixerBasis& basis, const std::vector<cx>& in,
                                    std::vector<cx>& out) {
    const int dim = basis.dim();
    out.assign(dim, cx{});
    for (int k = 0; k + 1 < dim; ++k) {
        out[k] += basis.offdiag[k] * in[k + 1];
        out[k + 1] += basis.offdiag[k] * in[k];
    }
}

// Dense (n+1)x(n+1) unitary exp(-i beta H_sym).
struct MixerPropagator {
    int n = 0;
    double beta = 0.0;
    std::vector<cx> matrix;  // row-major

    int dim() const { return n + 1; }
    const cx& at(int i, int j) const { return matrix[std::size_t(i) * dim() + j]; }
};

inline MixerPropagator build_mixer(int n, double beta) {
    const MixerBasis& basis = mixer_basis(n);
    const int dim = basis.dim();
    MixerPropagator prop{n, beta, std::vector<cx>(std::size_t(dim) * dim)};
    std::vector<cx> phases(dim);
    for (int j = 0; j < dim; ++j)
        phases[j] = std::polar(1.0, -beta * basis.eigenvalues[j]);
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            cx acc{};
            for (int j = 0; j < dim; ++j)
                acc += basis.vectors[std::size_t(a) * dim + j] * phases[j] *
                       basis.vectors[std::size_t(b) * dim + j];
            prop.matrix[std::size_t(a) * dim + b] = acc;
        }
    return prop;
}

inline DickeState apply_mixer(const DickeState& state, const MixerPropagator& propagator) {
    if (state.n != propagator.n)
        throw std::invalid_argument("apply_mixer: state/propagator dimension mismatch");
    const int dim = propagator.dim();
    DickeState out{state.n, std::vector<cx>(dim)};
    for (int i = 0; i < dim; ++i) {
        cx acc{};
        for (int j = 0; j < dim; ++j)
            acc += propagator.at(i, j) * state.amps[j];
        out.amps[i] = acc;
    }
    return out;
}

// Full circuit: V(gamma_k) then U(beta_k) for k = 1..p starting from |+>^n.
inline DickeState simulate_state(int n, const AngleSchedule& schedule,
                                 int max_qubits = default_max_qubits) {
    DickeState state = dicke_init(n, max_qubits);
    if (schedule.depth() == 0) return state;
    const MixerBasis& basis = mixer_basis(n);
    for (int k = 0; k < schedule.depth(); ++k) {
        state.amps[0] *= std::polar(1.0, -schedule.gammas[k]);
        apply_mixer_in_basis(basis, schedule.betas[k], state.amps);
    }
    return state;
}

inline OverlapResult simulate(int n, const AngleSchedule& schedule,
                              int max_qubits = default_max_qubits) {
    return OverlapResult::from_overlap(simulate_state(n, schedule, max_qubits).amps[0]);
}

// |g_p|^2 together with its gradient in the layout
// [d/dgamma_1 .. d/dgamma_p, d/dbeta_1 .. d/dbeta_p].
//
// One forward and one backward sweep: differentiating V(gamma_k) inserts
// -i P after the phase, differentiating U(beta_k) inserts -i H_sym after the
// mixer, and each insertion contracts against the stored forward state and
// the running backward costate. O(p n^2) total.
inline double simulate_with_gradient(int n, const AngleSchedule& schedule,
                                     std::vector<double>& grad,
                                     int max_qubits = default_max_qubits) {
    const int p = schedule.depth();
    if (p < 1) throw std::invalid_argument("simulate_with_gradient: p >= 1 required");
    const MixerBasis& basis = mixer_basis(n);
    const int dim = basis.dim();

    std::vector<std::vector<cx>> post_phase(p), post_mixer(p);
    {
        std::vector<cx> cur = dicke_init(n, max_qubits).amps;
        for (int k = 0; k < p; ++k) {
            cur[0] *= std::polar(1.0, -schedule.gammas[k]);
            post_phase[k] = cur;
            apply_mixer_in_basis(basis, schedule.betas[k], cur);
            post_mixer[k] = cur;
        }
    }
    const cx g = post_mixer[p - 1][0];

    grad.assign(2 * std::size_t(p), 0.0);
    std::vector<cx> costate(dim, cx{});
    costate[0] = 1.0;  // <0..0| as a column
    std::vector<cx> hf;
    for (int k = p - 1; k >= 0; --k) {
        std::vector<cx> u = costate;
        apply_mixer_in_basis(basis, schedule.betas[k], u, /*adjoint=*/true);
        const cx dg_gamma = cx(0.0, -1.0) * std::conj(u[0]) * post_phase[k][0];
        apply_mixer_hamiltonian(basis, post_mixer[k], hf);
        cx acc{};
        for (int i = 0; i < dim; ++i) acc += std::conj(costate[i]) * hf[i];
        const cx dg_beta = cx(0.0, -1.0) * acc;
        grad[k] = 2.0 * std::real(std::conj(g) * dg_gamma);
        grad[std::size_t(p) + k] = 2.0 * std::real(std::conj(g) * dg_beta);
        costate = std::move(u);
        costate[0] *= std::polar(1.0, schedule.gammas[k]);
    }
    return std::norm(g);
}

inline std::vector<double> gradient(int n, const AngleSchedule& schedule,
                                    int max_qubits = default_max_qubits) {
    std::vector<double> grad;
    simulate_with_gradient(n, schedule, grad, max_qubits);
    return grad;
}

}  // namespace qaoaprep::symsim
