// Prints the single-layer optimum per qubit count next to the large-n
// expansion, plus the simulator's value at the solved angles.

#include <cstdio>

#include "qaoaprep/qaoaprep.hpp"

using namespace qaoaprep;

int main() {
    std::printf("%4s %12s %12s %14s %14s %12s\n", "n", "beta", "gamma", "|g|^2", "(n+2)beta",
                "beta_asym");
    for (int n = 1; n <= 16; ++n) {
        const auto sol = analytic::solve_optimal_p1(n);
        const double check =
            symsim::simulate(n, AngleSchedule({sol.gamma}, {sol.beta})).magnitude_sq;
        const double asym = n >= 5 ? analytic::asymptotic_angles(n).beta : 0.0;
        std::printf("%4d %12.8f %12.8f %14.10f %14.10f %12.8f\n", n, sol.beta, sol.gamma, check,
                    (n + 2) * sol.beta, asym);
    }
    return 0;
}
