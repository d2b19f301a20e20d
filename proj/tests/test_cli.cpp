#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spde/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace spde;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const char* tag) {
    return std::string("/tmp/spde_test_") + tag + "_" + std::to_string(::getpid()) + ".csv";
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

} // namespace

TEST_CASE("parse_args defaults and the documented example") {
    const CliConfig cfg = parse_args({"convergence", "--problem", "heat-sine", "--levels",
                                      "4,8,16,32", "--paths", "100", "--seed", "7"});
    CHECK(cfg.subcommand == Subcommand::Convergence);
    CHECK(cfg.problem == "heat-sine");
    CHECK(cfg.scheme == "runge-kutta");
    CHECK(cfg.paths == 100);
    CHECK(cfg.seed == 7);
    const LevelPlan plan = build_plan(cfg);
    CHECK(plan.reference.n_modes == 64); // twice the largest level
    CHECK(plan.reference.steps == 64 * 64);
    CHECK(plan.reference.noise_modes == 64);
    REQUIRE(plan.levels.size() == 4);
    CHECK(plan.levels[0].steps == 16); // m = n^2 pairing
    CHECK(plan.levels[0].noise_modes == 4);
    CHECK(plan.levels[3].steps == 1024);
}

TEST_CASE("euler defaults to the m = n^3 pairing") {
    const CliConfig cfg = parse_args({"run", "--scheme", "euler", "--n", "8"});
    CHECK(paired_steps(cfg, 8) == 512);
    const CliConfig rk = parse_args({"run", "--n", "8"});
    CHECK(paired_steps(rk, 8) == 64);
    const CliConfig forced = parse_args({"run", "--scheme", "euler", "--n", "8", "--m", "n2"});
    CHECK(paired_steps(forced, 8) == 64);
    const CliConfig spelled = parse_args({"run", "--n", "8", "--m", "m=n3"});
    CHECK(paired_steps(spelled, 8) == 512);
    const CliConfig expl = parse_args({"run", "--n", "8", "--m", "100"});
    CHECK(paired_steps(expl, 8) == 100);
}

TEST_CASE("usage errors") {
    CHECK_THROWS_AS(parse_args({}), UsageError);
    CHECK_THROWS_AS(parse_args({"trot"}), UsageError);
    CHECK_THROWS_AS(parse_args({"run", "--frobnicate"}), UsageError);
    CHECK_THROWS_AS(parse_args({"run", "--paths"}), UsageError);
    CHECK_THROWS_AS(parse_args({"run", "--paths", "zero"}), UsageError);
    CHECK_THROWS_AS(parse_args({"run", "--problem", "heat-square"}), std::invalid_argument);
    CHECK_THROWS_AS(parse_args({"run", "--m", "n5"}), UsageError);
    CHECK_THROWS_AS(parse_args({"convergence", "--m", "64"}), UsageError);
    CHECK_THROWS_AS(parse_args({"run", "--format", "xml"}), UsageError);
    CHECK_THROWS(parse_args({"--help"}));
    CHECK_THROWS_AS(parse_args({"run", "--help"}), HelpRequested);
}

TEST_CASE("SPDE_SEED environment override, flag wins") {
    ::setenv("SPDE_SEED", "99", 1);
    CHECK(parse_args({"run"}).seed == 99);
    CHECK(parse_args({"run", "--seed", "7"}).seed == 7);
    ::setenv("SPDE_SEED", "not-a-number", 1);
    CHECK_THROWS_AS(parse_args({"run"}), UsageError);
    ::unsetenv("SPDE_SEED");
    CHECK(parse_args({"run"}).seed == 42);
}

TEST_CASE("emit_report schema") {
    CliConfig cfg = parse_args({"convergence", "--scheme", "euler", "--levels", "4,8",
                                "--paths", "50", "--seed", "3", "--m", "n3"});
    ErrorReport report;
    report.levels = {{{4, 64, 4}, 0.125, 0.001}, {{8, 512, 8}, 0.03125, 0.0005}};
    report.fitted_slope = -2.0;
    report.slope_stderr = 0.0;
    report.predicted_slope = -1.5;

    std::stringstream out;
    emit_report(out, report, cfg);
    std::stringstream parse(out.str());
    std::string line;
    std::getline(parse, line);
    CHECK(line == "problem,scheme,N,M,K,paths,seed,rms_error,mc_stderr,rng_draws,seconds");
    std::getline(parse, line);
    const std::vector<std::string> row = split(line, ',');
    REQUIRE(row.size() == 11);
    CHECK(row[0] == "heat-sine");
    CHECK(row[1] == "euler");
    CHECK(row[2] == "4");
    CHECK(row[3] == "64");
    CHECK(row[9] == "256"); // rng draws = M * K = N^4 under the euler pairing
    CHECK(row[7] == "0.125");
    std::getline(parse, line);
    CHECK(split(line, ',')[9] == "4096");
    std::getline(parse, line);
    CHECK(line == "# fitted_slope=-2");
    std::getline(parse, line);
    CHECK(line == "# predicted_slope=-1.5");

    // 17 significant digits survive a round trip
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_g17(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("tsv format") {
    CliConfig cfg = parse_args({"convergence", "--format", "tsv", "--levels", "4"});
    ErrorReport report;
    report.levels = {{{4, 16, 4}, 0.5, 0.0}};
    report.fitted_slope = report.slope_stderr = report.predicted_slope = 0.0;
    std::stringstream out;
    emit_report(out, report, cfg);
    std::string line;
    std::getline(out, line);
    CHECK(line.find('\t') != std::string::npos);
    CHECK(line.find(',') == std::string::npos);
}

TEST_CASE("empty level list emits a header-only file with exit 0") {
    const std::string path = temp_path("empty");
    CliConfig cfg = parse_args({"convergence", "--levels", "", "--out", path});
    CHECK(cfg.levels.empty());
    CHECK(run_cli(cfg, std::cerr) == 0);
    CHECK(slurp(path) == "problem,scheme,N,M,K,paths,seed,rms_error,mc_stderr,rng_draws,seconds\n");
    std::remove(path.c_str());
}

TEST_CASE("convergence runs are byte-identical across reruns") {
    const std::string p1 = temp_path("conv1"), p2 = temp_path("conv2");
    const std::vector<std::string> argv = {"convergence", "--levels", "2,4", "--paths", "6",
                                           "--seed", "11", "--threads", "2", "--out", p1};
    std::vector<std::string> argv2 = argv;
    argv2.back() = p2;
    CHECK(run_cli(parse_args(argv), std::cerr) == 0);
    CHECK(run_cli(parse_args(argv2), std::cerr) == 0);
    const std::string a = slurp(p1), b = slurp(p2);
    CHECK(a == b);
    CHECK(a.find("# fitted_slope=") != std::string::npos);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("run subcommand emits a grid profile") {
    const std::string path = temp_path("run");
    const CliConfig cfg = parse_args({"run", "--n", "4", "--m", "16", "--paths", "3",
                                      "--out", path});
    CHECK(run_cli(cfg, std::cerr) == 0);
    const std::string text = slurp(path);
    std::stringstream ss(text);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "x,mean,std");
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 4);
    std::remove(path.c_str());
}

TEST_CASE("compare subcommand emits per-scheme errors") {
    const std::string path = temp_path("cmp");
    const CliConfig cfg = parse_args({"compare", "--levels", "2,4", "--paths", "4",
                                      "--out", path});
    CHECK(run_cli(cfg, std::cerr) == 0);
    const std::string text = slurp(path);
    CHECK(text.find("err_rk,err_mil,err_euler,rk_mil_distance") != std::string::npos);
    CHECK(text.find("# max_rel_gap_rk_mil=") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("check subcommand passes on the built-in problems") {
    const std::string path = temp_path("check");
    const CliConfig cfg = parse_args({"check", "--n", "8", "--k", "4", "--paths", "5",
                                      "--out", path});
    CHECK(run_cli(cfg, std::cerr) == 0);
    const std::string text = slurp(path);
    CHECK(text.find("# lipschitz_ok=1") != std::string::npos);
    CHECK(text.find("# remainder_ok=1") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("bench subcommand reports draws per path") {
    const std::string path = temp_path("bench");
    const CliConfig cfg = parse_args({"bench", "--levels", "2", "--repeats", "1",
                                      "--out", path});
    CHECK(run_cli(cfg, std::cerr) == 0);
    const std::string text = slurp(path);
    CHECK(text.find("problem,scheme,N,M,K,rng_draws,seconds") == 0);
    CHECK(text.find("heat-sine,euler,2,8,2,16,") != std::string::npos);
    CHECK(text.find("heat-sine,runge-kutta,2,4,2,8,") != std::string::npos);
    std::remove(path.c_str());
}

TEST_CASE("exit codes: unwritable output and usage failure") {
    const CliConfig cfg = parse_args({"convergence", "--levels", "2", "--paths", "2",
                                      "--out", "/nonexistent-dir/report.csv"});
    std::stringstream diag;
    CHECK(run_cli(cfg, diag) == 1);
    CHECK(diag.str().find("cannot open") != std::string::npos);

    const char* argv[] = {"spde", "--bogus"};
    CHECK(cli_main(2, argv) == 2);
    const char* argv_help[] = {"spde", "--help"};
    CHECK(cli_main(2, argv_help) == 0);
}
