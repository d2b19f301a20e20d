#include "spde/cli.hpp"

#include "spde/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace spde {

namespace {

const char* kUsage = R"(usage: spde <subcommand> [options]

subcommands:
  run           integrate seeded paths at one resolution; emits the terminal
                field profile (columns x,mean,std)
  convergence   strong-error sweep over --levels against a fine coupled
                reference; emits one row per level plus fitted slopes
  compare       euler/milstein/runge-kutta on common noise per level
  check         diffusion-operator difference-quotient diagnostics
                (exit 3 when the fitted constants drift beyond 2x)
  bench         one-path wall times per scheme and N

options:
  --problem NAME   heat-sine | heat-cosine | linear-g | zero-noise  [heat-sine]
  --scheme NAME    euler | milstein | runge-kutta  [runge-kutta]
  --n INT          modes for run/check  [run 16, check 32]
  --m INT|n2|n3    steps, or pairing rule M=N^2 / M=N^3
                   [n2; euler defaults to n3]
  --k INT          noise modes  [= n; check 16]
  --levels A,B,..  level N values  [convergence/compare 4,8,16,32; bench 16,32]
  --paths INT      Monte-Carlo paths (trial pairs for check)  [100]
  --seed INT       RNG seed; env SPDE_SEED overrides the default, flag wins  [42]
  --ref-n INT      reference modes  [2x largest level]
  --threads INT    worker cap  [machine parallelism]
  --repeats INT    bench repetitions  [3]
  --out PATH       output file, '-' = stdout  [-]
  --format FMT     csv | tsv  [csv]
  --help
)";

[[noreturn]] void usage_error(const std::string& msg) { throw UsageError(msg); }

long long parse_int(const std::string& value, const std::string& flag) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        usage_error("expected an integer for " + flag + ", got '" + value + "'");
    }
}

std::vector<int> parse_levels(const std::string& value) {
    std::vector<int> out;
    if (value.empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const long long v = parse_int(item, "--levels");
        if (v < 1) usage_error("--levels entries must be >= 1");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

char separator(const CliConfig& cfg) {
    return cfg.format == OutputFormat::Csv ? ',' : '\t';
}

void emit_row(std::ostream& os, char sep, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os << sep;
        os << cells[i];
    }
    os << '\n';
}

int checked_int(long long v, const char* what) {
    if (v < 1 || v > std::numeric_limits<int>::max())
        usage_error(std::string(what) + " out of range");
    return static_cast<int>(v);
}

struct OutputFile {
    std::ofstream file;
    std::ostream* os = nullptr;

    explicit OutputFile(const std::string& path) {
        if (path == "-") {
            os = &std::cout;
        } else {
            file.open(path, std::ios::binary | std::ios::trunc);
            os = &file;
        }
    }
    bool ok() const { return os != nullptr && os->good(); }
};

int run_profile(const CliConfig& cfg, std::ostream& out) {
    const ProblemSpec spec = builtin(cfg.problem);
    const int n = cfg.n > 0 ? cfg.n : 16;
    const long long m = paired_steps(cfg, n);
    const int k = cfg.k > 0 ? cfg.k : n;
    const RunConfig run_cfg{n, checked_int(m, "steps"), k, scheme_from_name(cfg.scheme)};
    const SineBasis basis(n, spec.diffusivity);

    std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sum_sq(static_cast<std::size_t>(n), 0.0);
    for (int p = 0; p < cfg.paths; ++p) {
        const SpectralField y = integrate_path(spec, run_cfg, basis, cfg.seed,
                                               static_cast<std::uint64_t>(p));
        const PhysicalField v = to_physical(y, basis);
        for (int i = 0; i < n; ++i) {
            sum[i] += v.values[i];
            sum_sq[i] += v.values[i] * v.values[i];
        }
    }
    const char sep = separator(cfg);
    emit_row(out, sep, {"x", "mean", "std"});
    for (int i = 0; i < n; ++i) {
        const double mean = sum[i] / cfg.paths;
        const double var = cfg.paths > 1
                               ? std::max(0.0, (sum_sq[i] - cfg.paths * mean * mean) /
                                                   (cfg.paths - 1))
                               : 0.0;
        emit_row(out, sep,
                 {format_g17(basis.grid()[i]), format_g17(mean), format_g17(std::sqrt(var))});
    }
    return 0;
}

} // namespace

std::string usage_text() { return kUsage; }

std::string format_g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

long long paired_steps(const CliConfig& cfg, int n) {
    if (cfg.m > 0) return cfg.m;
    std::string rule = cfg.pairing;
    if (rule.empty()) rule = (cfg.scheme == "euler") ? "n3" : "n2";
    const long long nn = static_cast<long long>(n);
    if (rule == "n2") return nn * nn;
    if (rule == "n3") return nn * nn * nn;
    usage_error("unknown pairing rule '" + rule + "' (expected n2 or n3)");
}

CliConfig parse_args(const std::vector<std::string>& args) {
    CliConfig cfg;
    if (const char* env = std::getenv("SPDE_SEED")) {
        cfg.seed = static_cast<std::uint64_t>(parse_int(env, "SPDE_SEED"));
    }
    if (args.empty()) usage_error("missing subcommand");
    std::size_t i = 0;
    if (args[0] == "--help" || args[0] == "-h") throw HelpRequested{};
    const std::string& sub = args[i++];
    if (sub == "run") cfg.subcommand = Subcommand::Run;
    else if (sub == "convergence") cfg.subcommand = Subcommand::Convergence;
    else if (sub == "compare") cfg.subcommand = Subcommand::Compare;
    else if (sub == "check") cfg.subcommand = Subcommand::Check;
    else if (sub == "bench") cfg.subcommand = Subcommand::Bench;
    else usage_error("unknown subcommand '" + sub + "'");

    bool scheme_given = false;
    for (; i < args.size(); ++i) {
        std::string flag = args[i];
        std::string value;
        bool has_value = false;
        if (const std::size_t eq = flag.find('='); eq != std::string::npos) {
            value = flag.substr(eq + 1);
            flag = flag.substr(0, eq);
            has_value = true;
        }
        const auto need_value = [&]() -> const std::string& {
            if (has_value) return value;
            if (i + 1 >= args.size()) usage_error("missing value for " + flag);
            value = args[++i];
            return value;
        };
        if (flag == "--help" || flag == "-h") throw HelpRequested{};
        else if (flag == "--problem") cfg.problem = need_value();
        else if (flag == "--scheme") { cfg.scheme = need_value(); scheme_given = true; }
        else if (flag == "--n") cfg.n = checked_int(parse_int(need_value(), flag), "--n");
        else if (flag == "--m") {
            const std::string& v = need_value();
            if (v == "n2" || v == "n3" || v == "m=n2" || v == "m=n3") {
                cfg.pairing = v.substr(v.size() - 2);
            } else {
                cfg.m = parse_int(v, flag);
                if (cfg.m < 1) usage_error("--m must be >= 1");
            }
        }
        else if (flag == "--k") cfg.k = checked_int(parse_int(need_value(), flag), "--k");
        else if (flag == "--levels") { cfg.levels = parse_levels(need_value()); cfg.levels_given = true; }
        else if (flag == "--paths") cfg.paths = checked_int(parse_int(need_value(), flag), "--paths");
        else if (flag == "--seed") cfg.seed = static_cast<std::uint64_t>(parse_int(need_value(), flag));
        else if (flag == "--ref-n") cfg.ref_n = checked_int(parse_int(need_value(), flag), "--ref-n");
        else if (flag == "--threads") cfg.threads = checked_int(parse_int(need_value(), flag), "--threads");
        else if (flag == "--repeats") cfg.repeats = checked_int(parse_int(need_value(), flag), "--repeats");
        else if (flag == "--out") cfg.out = need_value();
        else if (flag == "--format") {
            const std::string& v = need_value();
            if (v == "csv") cfg.format = OutputFormat::Csv;
            else if (v == "tsv") cfg.format = OutputFormat::Tsv;
            else usage_error("unknown format '" + v + "'");
        }
        else usage_error("unknown flag '" + flag + "'");
    }

    (void)builtin(cfg.problem); // validate names early
    (void)scheme_from_name(cfg.scheme);
    if ((cfg.subcommand == Subcommand::Convergence || cfg.subcommand == Subcommand::Compare) &&
        cfg.m > 0)
        usage_error("convergence/compare use a pairing rule; pass --m n2 or --m n3");
    if (!cfg.levels_given &&
        (cfg.subcommand == Subcommand::Convergence || cfg.subcommand == Subcommand::Compare))
        cfg.levels = {4, 8, 16, 32};
    if (!cfg.levels_given && cfg.subcommand == Subcommand::Bench) cfg.levels = {16, 32};
    if (cfg.subcommand == Subcommand::Check) {
        if (cfg.n == 0) cfg.n = 32;
        if (cfg.k == 0) cfg.k = 16;
    }
    (void)scheme_given;
    return cfg;
}

LevelPlan build_plan(const CliConfig& cfg) {
    LevelPlan plan;
    plan.paths = cfg.paths;
    plan.base_seed = cfg.seed;
    std::vector<int> ns = cfg.levels;
    std::sort(ns.begin(), ns.end());
    for (int n : ns) {
        const long long m = paired_steps(cfg, n);
        const int k = cfg.k > 0 ? std::min(cfg.k, n) : n;
        plan.levels.push_back({n, checked_int(m, "level steps"), k});
    }
    const int max_n = ns.empty() ? 1 : ns.back();
    const int ref_n = cfg.ref_n > 0 ? cfg.ref_n : 2 * max_n;
    plan.reference = {ref_n, checked_int(paired_steps(cfg, ref_n), "reference steps"), ref_n};
    return plan;
}

void emit_report(std::ostream& os, const ErrorReport& report, const CliConfig& cfg) {
    const char sep = separator(cfg);
    emit_row(os, sep,
             {"problem", "scheme", "N", "M", "K", "paths", "seed", "rms_error", "mc_stderr",
              "rng_draws", "seconds"});
    for (const LevelError& le : report.levels) {
        const long long draws =
            static_cast<long long>(le.level.steps) * le.level.noise_modes;
        emit_row(os, sep,
                 {cfg.problem, cfg.scheme, std::to_string(le.level.n_modes),
                  std::to_string(le.level.steps), std::to_string(le.level.noise_modes),
                  std::to_string(cfg.paths), std::to_string(cfg.seed),
                  format_g17(le.rms_error), format_g17(le.mc_stderr), std::to_string(draws),
                  "0"});
    }
    if (!report.levels.empty()) {
        os << "# fitted_slope=" << format_g17(report.fitted_slope) << '\n';
        os << "# predicted_slope=" << format_g17(report.predicted_slope) << '\n';
    }
}

void emit_comparison(std::ostream& os, const SchemeComparison& cmp, const CliConfig& cfg) {
    const char sep = separator(cfg);
    emit_row(os, sep,
             {"problem", "N", "M", "K", "paths", "seed", "err_rk", "err_mil", "err_euler",
              "rk_mil_distance"});
    for (const SchemeComparisonLevel& row : cmp.levels) {
        emit_row(os, sep,
                 {cfg.problem, std::to_string(row.level.n_modes),
                  std::to_string(row.level.steps), std::to_string(row.level.noise_modes),
                  std::to_string(cfg.paths), std::to_string(cfg.seed),
                  format_g17(row.err_rk), format_g17(row.err_mil),
                  format_g17(row.err_euler), format_g17(row.rk_mil_distance)});
    }
    if (!cmp.levels.empty()) {
        os << "# fitted_slope_rk=" << format_g17(cmp.slope_rk) << '\n';
        os << "# fitted_slope_milstein=" << format_g17(cmp.slope_mil) << '\n';
        os << "# fitted_slope_euler=" << format_g17(cmp.slope_euler) << '\n';
        os << "# max_rel_gap_rk_mil=" << format_g17(cmp.max_rel_gap_rk_mil) << '\n';
        os << "# predicted_slope=" << format_g17(cmp.predicted_slope) << '\n';
    }
}

void emit_gg_check(std::ostream& os, const GGCheckReport& report, const CliConfig& cfg) {
    const char sep = separator(cfg);
    emit_row(os, sep, {"problem", "h", "lipschitz_constant", "remainder_constant"});
    for (const GGCheckSample& s : report.samples)
        emit_row(os, sep,
                 {cfg.problem, format_g17(s.h), format_g17(s.lipschitz_constant),
                  format_g17(s.remainder_constant)});
    os << "# lipschitz_spread=" << format_g17(report.lipschitz_spread) << '\n';
    os << "# remainder_spread=" << format_g17(report.remainder_spread) << '\n';
    os << "# lipschitz_ok=" << (report.lipschitz_ok ? 1 : 0) << '\n';
    os << "# remainder_ok=" << (report.remainder_ok ? 1 : 0) << '\n';
}

void emit_runtime_table(std::ostream& os, const std::vector<RuntimeRow>& rows,
                        const CliConfig& cfg) {
    const char sep = separator(cfg);
    emit_row(os, sep, {"problem", "scheme", "N", "M", "K", "rng_draws", "seconds"});
    for (const RuntimeRow& r : rows)
        emit_row(os, sep,
                 {cfg.problem, std::string(scheme_name(r.scheme)), std::to_string(r.n_modes),
                  std::to_string(r.steps), std::to_string(r.noise_modes),
                  std::to_string(r.rng_draws), format_g17(r.seconds)});
}

int run_cli(const CliConfig& cfg, std::ostream& diag) {
    try {
        OutputFile out(cfg.out);
        if (!out.ok()) {
            diag << "error: cannot open output file '" << cfg.out << "'\n";
            return 1;
        }
        int code = 0;
        switch (cfg.subcommand) {
            case Subcommand::Run:
                code = run_profile(cfg, *out.os);
                break;
            case Subcommand::Convergence: {
                const ProblemSpec spec = builtin(cfg.problem);
                const ErrorReport report =
                    cfg.levels.empty()
                        ? ErrorReport{}
                        : strong_error(spec, scheme_from_name(cfg.scheme), build_plan(cfg),
                                       cfg.threads);
                emit_report(*out.os, report, cfg);
                break;
            }
            case Subcommand::Compare: {
                const ProblemSpec spec = builtin(cfg.problem);
                const SchemeComparison cmp =
                    cfg.levels.empty()
                        ? SchemeComparison{}
                        : compare_schemes(spec, build_plan(cfg), cfg.threads);
                emit_comparison(*out.os, cmp, cfg);
                break;
            }
            case Subcommand::Check: {
                const ProblemSpec spec = builtin(cfg.problem);
                const SineBasis basis(cfg.n, spec.diffusivity);
                const GGCheckReport report =
                    check_gg_assumption(spec, cfg.k, basis, cfg.paths, cfg.seed);
                emit_gg_check(*out.os, report, cfg);
                code = report.passed() ? 0 : 3;
                break;
            }
            case Subcommand::Bench: {
                const ProblemSpec spec = builtin(cfg.problem);
                const std::vector<RuntimeRow> rows =
                    runtime_table(spec, cfg.levels, cfg.repeats, cfg.seed);
                emit_runtime_table(*out.os, rows, cfg);
                break;
            }
        }
        out.os->flush();
        if (!out.ok()) {
            diag << "error: failed writing to '" << cfg.out << "'\n";
            return 1;
        }
        return code;
    } catch (const std::invalid_argument& e) {
        diag << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        diag << "error: " << e.what() << '\n';
        return 1;
    }
}

int cli_main(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    try {
        const CliConfig cfg = parse_args(args);
        return run_cli(cfg, std::cerr);
    } catch (const HelpRequested&) {
        std::cout << usage_text();
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n' << usage_text();
        return 2;
    }
}

} // namespace spde
