// Command-line front end: experiment configuration, seeded reproducible
// runs, CSV/TSV emission.
//
// Exit codes: 0 success, 1 I/O or run failure, 2 usage error, 3 a `check`
// run whose acceptance conditions failed.

#pragma once

#include "spde/experiments.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace spde {

enum class Subcommand { Run, Convergence, Compare, Check, Bench };
enum class OutputFormat { Csv, Tsv };

struct CliConfig {
    Subcommand subcommand = Subcommand::Run;
    std::string problem = "heat-sine";
    std::string scheme = "runge-kutta";
    int n = 0;                // 0 = subcommand default
    long long m = 0;          // explicit steps; 0 = use pairing
    std::string pairing;      // "n2" | "n3" | "" (scheme default)
    int k = 0;                // 0 = k = n
    std::vector<int> levels;  // empty = subcommand default
    bool levels_given = false;
    int paths = 100;          // doubles as trial count for `check`
    std::uint64_t seed = 42;
    int ref_n = 0;            // 0 = twice the largest level
    int threads = 0;          // 0 = machine parallelism
    int repeats = 3;          // bench repetitions per row
    std::string out = "-";    // "-" = stdout
    OutputFormat format = OutputFormat::Csv;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HelpRequested {};

std::string usage_text();

// Parses everything after argv[0].  Throws UsageError on unknown or
// malformed flags and HelpRequested for --help.  The environment variable
// SPDE_SEED overrides the default seed; an explicit --seed wins over it.
CliConfig parse_args(const std::vector<std::string>& args);

// Effective steps for a given N under the config's pairing rule.
long long paired_steps(const CliConfig& cfg, int n);

// Level plan for convergence/compare: levels from cfg.levels under the
// pairing rule, reference at ref_n (default 2x the largest level).
LevelPlan build_plan(const CliConfig& cfg);

// `problem,scheme,N,M,K,paths,seed,rms_error,mc_stderr,rng_draws,seconds`
// plus `# fitted_slope=` / `# predicted_slope=` footers; numbers carry 17
// significant digits so reruns diff cleanly.
void emit_report(std::ostream& os, const ErrorReport& report, const CliConfig& cfg);

void emit_comparison(std::ostream& os, const SchemeComparison& cmp, const CliConfig& cfg);
void emit_gg_check(std::ostream& os, const GGCheckReport& report, const CliConfig& cfg);
void emit_runtime_table(std::ostream& os, const std::vector<RuntimeRow>& rows,
                        const CliConfig& cfg);

// Dispatches a parsed config; diagnostics go to diag.  Returns the exit code.
int run_cli(const CliConfig& cfg, std::ostream& diag);

// parse + dispatch + exit-code mapping for main().
int cli_main(int argc, const char* const* argv);

std::string format_g17(double x);

} // namespace spde
