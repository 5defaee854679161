#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

// Drives the built command-line binary end to end: exit codes, output
// formats, determinism, and the self-test hooks.

namespace {

namespace fs = std::filesystem;

std::string cli_path() { return QAOAPREP_CLI_PATH; }

struct RunResult {
    int exit_code = -1;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_cli_stdout.txt";
    const std::string command = cli_path() + " " + args + " > " + out.string() + " 2>&1";
    const int raw = std::system(command.c_str());
    RunResult result;
    result.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out);
    std::stringstream buffer;
    buffer << in.rdbuf();
    result.stdout_text = buffer.str();
    return result;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// CSV payload with the wall-time column blanked, so byte comparisons ignore
// timing jitter.
std::string strip_wall_time(const std::string& csv) {
    std::stringstream in(csv), out;
    std::string line;
    while (std::getline(in, line)) {
        const auto cut = line.rfind(',');
        out << line.substr(0, cut) << "\n";
    }
    return out.str();
}

}  // namespace

TEST(Cli, VerifyQuickPasses) {
    const auto result = run_cli("verify --quick --probes 10 --n-max 5 --seed 7");
    EXPECT_EQ(result.exit_code, 0) << result.stdout_text;
    EXPECT_NE(result.stdout_text.find("[PASS] oracle-equivalence"), std::string::npos);
    EXPECT_EQ(result.stdout_text.find("[FAIL]"), std::string::npos);
}

TEST(Cli, VerifyReportIsDeterministic) {
    const auto a = run_cli("verify --quick --probes 8 --n-max 4 --seed 11");
    const auto b = run_cli("verify --quick --probes 8 --n-max 4 --seed 11");
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(a.stdout_text, b.stdout_text);
}

TEST(Cli, CorruptModeFailsNonzero) {
    const auto result = run_cli("verify --quick --probes 8 --n-max 4 --corrupt");
    EXPECT_EQ(result.exit_code, 1);
    EXPECT_NE(result.stdout_text.find("[FAIL] formula-consistency"), std::string::npos);
}

TEST(Cli, VerifyRejectsNOverCap) {
    const auto result = run_cli("verify --quick --n-max 14");
    EXPECT_EQ(result.exit_code, 3);
}

TEST(Cli, BadFlagIsConfigError) {
    const auto result = run_cli("optimal-angles --n-range nonsense");
    EXPECT_EQ(result.exit_code, 2);
    const auto unknown = run_cli("frobnicate");
    EXPECT_EQ(unknown.exit_code, 2);
}

TEST(Cli, OptimalAnglesCsvShape) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_angles.csv";
    const auto result =
        run_cli("optimal-angles --n-range 1:8 --out " + out.string() + " --format csv");
    ASSERT_EQ(result.exit_code, 0);
    const std::string csv = read_file(out);
    std::stringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    EXPECT_EQ(header, "experiment,n,p,layer,gamma,beta,magnitude_sq,residual,wall_time_s");
    int solver_rows = 0;
    std::string line;
    while (std::getline(lines, line))
        if (line.rfind("optimal-angles,", 0) == 0) ++solver_rows;
    EXPECT_EQ(solver_rows, 8);
    // residual column of solver rows is tiny
    std::stringstream again(csv);
    std::getline(again, line);
    while (std::getline(again, line)) {
        if (line.rfind("optimal-angles,", 0) != 0) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        ASSERT_EQ(cells.size(), 9u);
        EXPECT_LT(std::abs(std::stod(cells[7])), 1e-12);
    }
}

TEST(Cli, OptimalAnglesSingleQubitRow) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_angles1.csv";
    ASSERT_EQ(run_cli("optimal-angles --n 1 --out " + out.string()).exit_code, 0);
    const std::string csv = read_file(out);
    std::stringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::vector<std::string> cells;
    std::stringstream ls(row);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 9u);
    EXPECT_NEAR(std::stod(cells[4]), 1.5707963267948966, 1e-12);  // gamma = pi/2
    EXPECT_NEAR(std::stod(cells[5]), 0.7853981633974483, 1e-12);  // beta = pi/4
    EXPECT_NEAR(std::stod(cells[6]), 1.0, 1e-12);                 // unit overlap
}

TEST(Cli, JsonOutputParsesAndMatchesCsvPayload) {
    const fs::path csv_out = fs::temp_directory_path() / "qaoaprep_angles.csv";
    const fs::path json_out = fs::temp_directory_path() / "qaoaprep_angles.json";
    ASSERT_EQ(run_cli("optimal-angles --n-range 2:4 --out " + csv_out.string()).exit_code, 0);
    ASSERT_EQ(run_cli("optimal-angles --n-range 2:4 --format json --out " + json_out.string())
                  .exit_code,
              0);
    const auto parsed = nlohmann::json::parse(read_file(json_out));
    ASSERT_TRUE(parsed.is_array());
    ASSERT_EQ(parsed.size(), 3u);  // solver rows only; expansion rows start at n = 5
    for (const auto& row : parsed) {
        EXPECT_TRUE(row.contains("experiment"));
        EXPECT_TRUE(row.contains("gamma"));
        EXPECT_TRUE(row.contains("magnitude_sq"));
    }
}

TEST(Cli, SeededRunsAreByteIdenticalModuloTiming) {
    const fs::path a = fs::temp_directory_path() / "qaoaprep_sat_a.csv";
    const fs::path b = fs::temp_directory_path() / "qaoaprep_sat_b.csv";
    const std::string args =
        "saturation --n 4 --p-max 5 --seeds 2 --seed 3 --restarts 6 --out ";
    ASSERT_EQ(run_cli(args + a.string()).exit_code, 0);
    ASSERT_EQ(run_cli(args + b.string()).exit_code, 0);
    EXPECT_EQ(strip_wall_time(read_file(a)), strip_wall_time(read_file(b)));
}

TEST(Cli, LastLayerEmitsPerLayerRowsAndFits) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_lastlayer.csv";
    const auto result = run_cli("lastlayer --n-range 6:7 --p 2 --restarts 8 --seed 5 --out " +
                                out.string());
    ASSERT_EQ(result.exit_code, 0) << result.stdout_text;
    const std::string csv = read_file(out);
    std::stringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    int data_rows = 0, fit_rows = 0;
    double worst_last_defect = 0.0;
    while (std::getline(lines, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        ASSERT_EQ(cells.size(), 9u);
        if (cells[0] == "lastlayer") {
            ++data_rows;
            if (cells[3] == cells[2])  // layer == p: the final layer
                worst_last_defect = std::max(worst_last_defect, std::stod(cells[7]));
        } else if (cells[0] == "lastlayer-fit") {
            ++fit_rows;
        }
    }
    EXPECT_EQ(data_rows, 4);  // 2 qubit counts x 2 layers
    EXPECT_EQ(fit_rows, 2);   // one fit per layer index
    EXPECT_LT(worst_last_defect, 0.01);
}

TEST(Cli, SaturationEmitsTraceAndModalRows) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_sat.csv";
    const auto result =
        run_cli("saturation --n 4 --seeds 3 --seed 1 --restarts 8 --epsilon 1e-3 --out " +
                out.string());
    ASSERT_EQ(result.exit_code, 0) << result.stdout_text;
    const std::string csv = read_file(out);
    EXPECT_NE(csv.find("saturation-modal[noise=none]"), std::string::npos);
    // modal p* at the coarse threshold sits at the qubit count
    std::stringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.rfind("saturation-modal", 0) != 0) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        EXPECT_EQ(cells[1], "4");
        EXPECT_EQ(cells[2], "4");  // modal p* == n
    }
}

TEST(Cli, SaturationNoiseAndUndertrainModesRun) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_sat_noise.csv";
    EXPECT_EQ(run_cli("saturation --n 4 --p-max 6 --seeds 2 --noise phase --sigma 0.05 "
                      "--restarts 6 --out " +
                      out.string())
                  .exit_code,
              0);
    EXPECT_NE(read_file(out).find("noise=phase"), std::string::npos);
    EXPECT_EQ(run_cli("saturation --n 4 --p-max 6 --seeds 2 --noise undertrain "
                      "--undertrain-iters 5 --restarts 6 --out " +
                      out.string())
                  .exit_code,
              0);
    EXPECT_NE(read_file(out).find("noise=undertrain"), std::string::npos);
}

TEST(Cli, FloatsCarrySeventeenSignificantDigits) {
    const fs::path out = fs::temp_directory_path() / "qaoaprep_digits.csv";
    ASSERT_EQ(run_cli("optimal-angles --n 7 --out " + out.string()).exit_code, 0);
    const std::string csv = read_file(out);
    // the gamma column of the solver row must round-trip to full precision
    std::stringstream lines(csv);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::stringstream ls(row);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    int mantissa_digits = 0;
    for (char c : cells[4])
        if (c >= '0' && c <= '9') ++mantissa_digits;
    EXPECT_GE(mantissa_digits, 16);
}
