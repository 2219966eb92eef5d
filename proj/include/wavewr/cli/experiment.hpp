#ifndef WAVEWR_CLI_EXPERIMENT_HPP
#define WAVEWR_CLI_EXPERIMENT_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavewr/cli/config.hpp"

namespace wavewr::cli
{
    enum class Command
    {
        Run,
        Compare
    };

    /// Exit codes of the wrsolve tool.
    inline constexpr int kExitOk = 0;
    inline constexpr int kExitConfig = 2;
    inline constexpr int kExitNumerical = 3;

    /// One (method, theta, T) combination of a sweep.
    struct RunOutcome
    {
        Method method = Method::DNWR;
        /// Empty for the SWR variants, which have no relaxation parameter.
        std::optional<double> theta;
        double final_time = 0.0;
        IterationHistory history;
        bool converged = false;
        /// "ok", or a description of the numerical failure.
        std::string status = "ok";

        bool failed() const { return status != "ok"; }
    };

    struct ExperimentReport
    {
        Command command = Command::Run;
        /// Settings after command-specific defaults were applied.
        ExperimentConfig config;
        std::vector<RunOutcome> runs;

        bool any_failure() const;
    };

    /// Fills in the defaults of the compare command for keys the file did not
    /// set: dx = dt = 1/50, overlap 24, T = {4, 10}, tolerance 1e-8,
    /// max_iterations 100. Requires at least two methods.
    ExperimentConfig with_compare_defaults(ExperimentConfig cfg);

    /// Runs every combination in deterministic order: methods as listed, then
    /// theta (DNWR/NNWR only; compare uses theta_dnwr / theta_nnwr), then T.
    /// Monodomain references are solved once per T. Numerical failures are
    /// recorded per combination; configuration errors throw.
    ExperimentReport execute(const ExperimentConfig& cfg, Command command);

    /// CSV with columns method, theta, T, dx, dt, iteration, error_linf_l2,
    /// trace_error_l2, wallclock_ms. Numbers use 17 significant digits;
    /// wallclock_ms is 0 unless record_wallclock is set.
    void write_csv(std::ostream& out, const ExperimentReport& report);

    /// Summary JSON: iterations-to-tolerance per combination together with the
    /// theory predictions (finite_step_bound, symmetric_rate).
    void write_summary(std::ostream& out, const ExperimentReport& report);

    /// Output directory: WR_OUTPUT_DIR when set, otherwise output.dir.
    std::string output_directory(const ExperimentConfig& cfg);

    /// Loads, validates and executes a config file, writing <name>.csv,
    /// <name>_summary.json and <name>_effective.cfg. Returns an exit code;
    /// diagnostics go to `log`.
    int run_config_file(const std::string& path, Command command, std::ostream& log);

    /// Text printed by `wrsolve theory`: finite_step_bound, symmetric_rate and
    /// the minimum delay of each symbol power up to the bound.
    std::string theory_report(Method method, double a, double b, double c, double T, double theta);
} // namespace wavewr::cli

#endif
