#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "wavewr/cli/experiment.hpp"

namespace
{
    constexpr const char* kVersion = "0.1.0";
}

int main(int argc, char** argv)
{
    using namespace wavewr;

    CLI::App app{"Waveform relaxation solvers for the 1D wave equation"};
    app.require_subcommand(1);

    std::string run_path;
    auto* run = app.add_subcommand("run", "Run every (method, theta, T) combination of a config");
    run->add_option("config", run_path, "Experiment config file")->required()->check(CLI::ExistingFile);

    std::string compare_path;
    auto* compare = app.add_subcommand("compare", "Compare at least two methods on the same problem");
    compare->add_option("config", compare_path, "Experiment config file")->required()->check(CLI::ExistingFile);

    std::string method_name;
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double T = 0.0;
    double theta = 0.0;
    auto* theory_cmd = app.add_subcommand("theory", "Print finite-step bound, rate and minimum delays");
    theory_cmd->add_option("method", method_name, "DNWR or NNWR")->required();
    theory_cmd->add_option("a", a, "Length of the left subdomain")->required();
    theory_cmd->add_option("b", b, "Length of the right subdomain")->required();
    theory_cmd->add_option("c", c, "Wave speed")->required();
    theory_cmd->add_option("T", T, "Final time")->required();
    theory_cmd->add_option("theta", theta, "Relaxation parameter")->required();

    app.add_subcommand("version", "Print the version");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitConfig;
    }

    try
    {
        if (*run)
            return cli::run_config_file(run_path, cli::Command::Run, std::cerr);
        if (*compare)
            return cli::run_config_file(compare_path, cli::Command::Compare, std::cerr);
        if (*theory_cmd)
        {
            std::cout << cli::theory_report(parse_method(method_name), a, b, c, T, theta);
            return cli::kExitOk;
        }
        std::cout << "wrsolve " << kVersion << '\n';
        return cli::kExitOk;
    }
    catch (const UsageError& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitConfig;
    }
    catch (const std::exception& e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return cli::kExitNumerical;
    }
}
