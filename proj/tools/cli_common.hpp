#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qaoaprep::cli {

// Exit-code contract: 0 all assertions pass, 1 assertion failure,
// 2 configuration error, 3 solver/resource failure.
enum ExitCode : int {
    exit_ok = 0,
    exit_assertion_failure = 1,
    exit_config_error = 2,
    exit_solver_or_resource = 3,
};

struct ResultRow {
    std::string experiment;
    int n = 0;
    int p = 0;
    int layer = 0;
    double gamma = 0.0;
    double beta = 0.0;
    double magnitude_sq = 0.0;
    double residual = 0.0;
    double wall_time_s = 0.0;
};

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv(std::ostream& os, const std::vector<ResultRow>& rows) {
    os << "experiment,n,p,layer,gamma,beta,magnitude_sq,residual,wall_time_s\n";
    for (const ResultRow& r : rows) {
        os << r.experiment << ',' << r.n << ',' << r.p << ',' << r.layer << ','
           << format_double(r.gamma) << ',' << format_double(r.beta) << ','
           << format_double(r.magnitude_sq) << ',' << format_double(r.residual) << ','
           << format_double(r.wall_time_s) << '\n';
    }
}

inline void write_json(std::ostream& os, const std::vector<ResultRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const ResultRow& r : rows) {
        out.push_back({{"experiment", r.experiment},
                       {"n", r.n},
                       {"p", r.p},
                       {"layer", r.layer},
                       {"gamma", r.gamma},
                       {"beta", r.beta},
                       {"magnitude_sq", r.magnitude_sq},
                       {"residual", r.residual},
                       {"wall_time_s", r.wall_time_s}});
    }
    os << out.dump(2) << '\n';
}

// Writes rows to `path` (or stdout when empty) in the requested format.
inline void emit_rows(const std::vector<ResultRow>& rows, const std::string& path,
                      const std::string& format) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!path.empty()) {
        file.open(path);
        if (!file) throw std::invalid_argument("cannot open output path: " + path);
        os = &file;
    }
    if (format == "csv")
        write_csv(*os, rows);
    else if (format == "json")
        write_json(*os, rows);
    else
        throw std::invalid_argument("unknown format: " + format);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// "A:B" (inclusive) or a single integer.
inline std::pair<int, int> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            const int v = std::stoi(text);
            return {v, v};
        }
        const int lo = std::stoi(text.substr(0, colon));
        const int hi = std::stoi(text.substr(colon + 1));
        if (hi < lo) throw std::invalid_argument("empty range");
        return {lo, hi};
    } catch (const std::exception&) {
        throw std::invalid_argument("bad range '" + text + "', expected A:B");
    }
}

}  // namespace qaoaprep::cli
