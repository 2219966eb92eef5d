#ifndef WAVEWR_CLI_CONFIG_HPP
#define WAVEWR_CLI_CONFIG_HPP

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavewr/core.hpp"
#include "wavewr/stepper.hpp"
#include "wavewr/waveform.hpp"

namespace wavewr::cli
{
    /// Invalid configuration text. what() carries "line N: ..." when the
    /// problem can be tied to a line.
    class ConfigError : public UsageError
    {
    public:
        using UsageError::UsageError;
    };

    enum class GuessKind
    {
        PolyT2,
        Zero,
        MonodomainTrace
    };

    /// A whitelisted data function as written in a config, e.g. "poly(0, 1)"
    /// or "model_v0". The text is kept for the effective config.
    struct FunctionSpec
    {
        std::string text = "zero";
    };

    struct ProblemBlock
    {
        double x_left = -3.0;
        double interface = 0.0;
        double x_right = 2.0;
        double wave_speed = 1.0;
        FunctionSpec u0{"zero"};
        FunctionSpec v0{"model_v0"};
        FunctionSpec g_left{"model_g_left"};
        FunctionSpec g_right{"model_g_right"};
        FunctionSpec f{"zero"};
    };

    struct ExperimentConfig
    {
        ProblemBlock problem;

        double dx = 0.02;
        double dt = 0.02;

        std::vector<Method> methods;
        std::vector<double> thetas{0.5};
        std::vector<double> final_times{16.0};
        double theta_dnwr = 0.5;
        double theta_nnwr = 0.25;
        int max_iterations = 20;
        double tolerance = 1e-10;
        FluxMode flux_mode = FluxMode::SchemeConsistent;
        StartMode start_mode = StartMode::ExactDalembert;
        int overlap_cells = 24;
        GuessKind initial_guess = GuessKind::PolyT2;
        bool record_wallclock = false;
        bool parallel = false;

        std::string output_dir = "out";
        std::string output_name = "experiment";

        /// Keys that appeared in the file, as "section.key", with their line
        /// numbers; commands use it to tell explicit settings from defaults.
        std::map<std::string, int> key_lines;

        bool is_explicit(const std::string& key) const;
        void validate() const;
        WaveProblem make_problem() const;
    };

    /// Evaluates a whitelisted function of one variable. The model_* names
    /// need the problem block (for the endpoint positions).
    ///   zero, poly_t2 (z^2), model_v0 (z e^-z), model_g_left / model_g_right
    ///   (x e^-x * t at the matching endpoint), poly(c0, c1, ...) = sum c_i z^i,
    ///   poly_exp(k, c0, c1, ...) = e^{k z} sum c_i z^i.
    std::function<double(double)> make_function(const FunctionSpec& spec, const ProblemBlock& problem);

    /// Parses a number written as a decimal or as p/q.
    double parse_number(const std::string& text);

    ExperimentConfig parse_config(std::istream& in);
    ExperimentConfig load_config(const std::string& path);

    /// Writes every setting, defaults included, in the format parse_config reads.
    void write_effective_config(std::ostream& out, const ExperimentConfig& cfg);

    std::string to_string(GuessKind g);
    std::string to_string(FluxMode m);
    std::string to_string(StartMode m);
} // namespace wavewr::cli

#endif
