#pragma once

#include <cstdint>
#include <string>

#include "cli_common.hpp"

namespace qaoaprep::cli {

struct OptimalAnglesOptions {
    int n_lo = 1;
    int n_hi = 24;
    std::string out;
    std::string format = "csv";
};

struct LastLayerOptions {
    int n_lo = 6;
    int n_hi = 12;
    int p = 5;
    std::string strategy = "global";
    int restarts = 20;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
};

struct SaturationOptions {
    int n_lo = 4;
    int n_hi = 6;
    int p_max = 0;  // 0 means the per-n default 2n+2
    std::string noise = "none";
    double sigma = 0.05;
    int undertrain_iters = 5;
    int seeds = 10;
    std::uint64_t seed = 1;
    double epsilon = 1e-8;
    int restarts = 20;
    std::string out;
    std::string format = "csv";
};

int run_optimal_angles(const OptimalAnglesOptions& options);
int run_lastlayer(const LastLayerOptions& options);
int run_saturation(const SaturationOptions& options);

}  // namespace qaoaprep::cli
