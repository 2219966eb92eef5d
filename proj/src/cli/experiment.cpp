#include "wavewr/cli/experiment.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "wavewr/theory.hpp"

namespace wavewr::cli
{
    namespace
    {
        // Shortest text that reads back to the same double.
        std::string fmt(double v)
        {
            char buf[32];
            const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
            return std::string(buf, end);
        }

        bool has_theta(Method m) { return m == Method::DNWR || m == Method::NNWR; }

        struct Job
        {
            Method method;
            std::optional<double> theta;
            double final_time;
        };

        std::vector<Job> plan(const ExperimentConfig& cfg, Command command)
        {
            std::vector<Job> jobs;
            for (Method m : cfg.methods)
            {
                std::vector<std::optional<double>> thetas;
                if (!has_theta(m))
                    thetas.push_back(std::nullopt);
                else if (command == Command::Compare)
                    thetas.push_back(m == Method::DNWR ? cfg.theta_dnwr : cfg.theta_nnwr);
                else
                    thetas.assign(cfg.thetas.begin(), cfg.thetas.end());
                for (const auto& th : thetas)
                    for (double T : cfg.final_times)
                        jobs.push_back({m, th, T});
            }
            return jobs;
        }

        RunOutcome run_one(const WaveProblem& problem, const ExperimentConfig& cfg, const Job& job,
                           const Reference& reference)
        {
            RunOutcome out;
            out.method = job.method;
            out.theta = job.theta;
            out.final_time = job.final_time;

            WrConfig wr;
            wr.method = job.method;
            wr.theta = job.theta.value_or(0.5);
            wr.max_iterations = cfg.max_iterations;
            wr.tolerance = cfg.tolerance;
            wr.overlap_cells = job.method == Method::SwrClassical ? cfg.overlap_cells : 0;
            wr.flux_mode = cfg.flux_mode;
            wr.start_mode = cfg.start_mode;
            switch (cfg.initial_guess)
            {
            case GuessKind::PolyT2: wr.initial_guess = guess_from_time([](double t) { return t * t; }); break;
            case GuessKind::Zero: wr.initial_guess = guess_from_time([](double) { return 0.0; }); break;
            case GuessKind::MonodomainTrace: wr.initial_guess = guess_from_field(reference); break;
            }

            const auto disc = Discretization::with_window(cfg.dx, cfg.dt, job.final_time);
            try
            {
                WrResult r = iterate(problem, disc, wr, reference);
                out.converged = r.converged;
                out.history = std::move(r.history);
                const auto& recs = out.history.records();
                if (!recs.empty() && !std::isfinite(recs.back().error_linf_l2))
                    out.status = "non-finite error at iteration " + std::to_string(recs.back().iteration);
            }
            catch (const StabilityError& e)
            {
                out.status = std::string("stability error: ") + e.what();
            }
            return out;
        }

        nlohmann::json number_or_null(double v)
        {
            return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
        }
    } // namespace

    bool ExperimentReport::any_failure() const
    {
        for (const auto& r : runs)
            if (r.failed())
                return true;
        return false;
    }

    ExperimentConfig with_compare_defaults(ExperimentConfig cfg)
    {
        if (cfg.methods.size() < 2)
            throw ConfigError("compare: run.methods must list at least two methods");
        if (!cfg.is_explicit("discretization.dx"))
            cfg.dx = 1.0 / 50.0;
        if (!cfg.is_explicit("discretization.dt"))
            cfg.dt = 1.0 / 50.0;
        if (!cfg.is_explicit("run.overlap_cells"))
            cfg.overlap_cells = 24;
        if (!cfg.is_explicit("run.T"))
            cfg.final_times = {4.0, 10.0};
        if (!cfg.is_explicit("run.tolerance"))
            cfg.tolerance = 1e-8;
        if (!cfg.is_explicit("run.max_iterations"))
            cfg.max_iterations = 100;
        return cfg;
    }

    ExperimentReport execute(const ExperimentConfig& input, Command command)
    {
        ExperimentReport report;
        report.command = command;
        report.config = command == Command::Compare ? with_compare_defaults(input) : input;
        const ExperimentConfig& cfg = report.config;
        cfg.validate();

        const WaveProblem problem = cfg.make_problem();
        // A failed reference solve fails every combination with that T.
        std::map<double, Reference> references;
        std::map<double, std::string> reference_failures;
        for (double T : cfg.final_times)
        {
            if (references.count(T) || reference_failures.count(T))
                continue;
            const auto disc = Discretization::with_window(cfg.dx, cfg.dt, T);
            try
            {
                references[T] =
                    std::make_shared<const SpaceTimeField>(solve_monodomain(problem, disc, cfg.start_mode));
            }
            catch (const StabilityError& e)
            {
                reference_failures[T] = std::string("stability error in the monodomain reference: ") + e.what();
            }
        }
        const auto run_job = [&](const Job& job) {
            if (const auto it = reference_failures.find(job.final_time); it != reference_failures.end())
            {
                RunOutcome failed;
                failed.method = job.method;
                failed.theta = job.theta;
                failed.final_time = job.final_time;
                failed.status = it->second;
                return failed;
            }
            return run_one(problem, cfg, job, references.at(job.final_time));
        };

        const auto jobs = plan(cfg, command);
        if (cfg.parallel)
        {
            std::vector<std::future<RunOutcome>> pending;
            for (const auto& job : jobs)
                pending.push_back(std::async(std::launch::async, run_job, std::cref(job)));
            for (auto& f : pending)
                report.runs.push_back(f.get());
        }
        else
        {
            for (const auto& job : jobs)
                report.runs.push_back(run_job(job));
        }
        return report;
    }

    void write_csv(std::ostream& out, const ExperimentReport& report)
    {
        const auto& cfg = report.config;
        out << "method,theta,T,dx,dt,iteration,error_linf_l2,trace_error_l2,wallclock_ms\n";
        for (const auto& run : report.runs)
        {
            const std::string theta = run.theta ? fmt(*run.theta) : "";
            for (const auto& r : run.history.records())
            {
                out << to_string(run.method) << ',' << theta << ',' << fmt(run.final_time) << ',' << fmt(cfg.dx) << ','
                    << fmt(cfg.dt) << ',' << r.iteration << ',' << fmt(r.error_linf_l2) << ','
                    << fmt(r.trace_error_l2) << ',' << (cfg.record_wallclock ? fmt(r.wallclock_ms) : "0") << '\n';
            }
        }
    }

    void write_summary(std::ostream& out, const ExperimentReport& report)
    {
        const auto& cfg = report.config;
        const double a = cfg.problem.interface - cfg.problem.x_left;
        const double b = cfg.problem.x_right - cfg.problem.interface;
        const double c = cfg.problem.wave_speed;

        nlohmann::json runs = nlohmann::json::array();
        for (const auto& run : report.runs)
        {
            nlohmann::json j;
            j["method"] = std::string(to_string(run.method));
            j["theta"] = run.theta ? nlohmann::json(*run.theta) : nlohmann::json(nullptr);
            j["T"] = run.final_time;
            j["iterations_run"] = run.history.records().size();
            const auto reached = run.history.iterations_to(cfg.tolerance);
            j["iterations_to_tolerance"] = reached ? nlohmann::json(*reached) : nlohmann::json(nullptr);
            j["converged"] = run.converged;
            j["final_error_linf_l2"] =
                run.history.records().empty() ? nlohmann::json(nullptr)
                                              : number_or_null(run.history.records().back().error_linf_l2);
            if (has_theta(run.method))
            {
                j["finite_step_bound"] = theory::finite_step_bound(run.method, a, b, c, run.final_time);
                j["symmetric_rate"] = theory::symmetric_rate(run.method, *run.theta);
            }
            else
            {
                j["finite_step_bound"] = nullptr;
                j["symmetric_rate"] = nullptr;
            }
            j["status"] = run.status;
            runs.push_back(std::move(j));
        }

        nlohmann::json doc;
        doc["command"] = report.command == Command::Run ? "run" : "compare";
        doc["tolerance"] = cfg.tolerance;
        doc["dx"] = cfg.dx;
        doc["dt"] = cfg.dt;
        doc["geometry"] = {{"a", a}, {"b", b}, {"c", c}};
        doc["runs"] = std::move(runs);
        out << doc.dump(2) << '\n';
    }

    std::string output_directory(const ExperimentConfig& cfg)
    {
        if (const char* env = std::getenv("WR_OUTPUT_DIR"); env != nullptr && *env != '\0')
            return env;
        return cfg.output_dir;
    }

    int run_config_file(const std::string& path, Command command, std::ostream& log)
    {
        ExperimentReport report;
        try
        {
            report = execute(load_config(path), command);
        }
        catch (const UsageError& e)
        {
            log << "config error: " << e.what() << '\n';
            return kExitConfig;
        }

        namespace fs = std::filesystem;
        const fs::path dir = output_directory(report.config);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec)
        {
            log << "cannot create output directory " << dir << ": " << ec.message() << '\n';
            return kExitConfig;
        }
        const std::string stem = report.config.output_name;
        {
            std::ofstream csv(dir / (stem + ".csv"));
            write_csv(csv, report);
            std::ofstream summary(dir / (stem + "_summary.json"));
            write_summary(summary, report);
            std::ofstream effective(dir / (stem + "_effective.cfg"));
            write_effective_config(effective, report.config);
            if (!csv || !summary || !effective)
            {
                log << "failed to write outputs under " << dir << '\n';
                return kExitConfig;
            }
        }

        for (const auto& run : report.runs)
        {
            const auto reached = run.history.iterations_to(report.config.tolerance);
            log << to_string(run.method);
            if (run.theta)
                log << " theta=" << fmt(*run.theta);
            log << " T=" << fmt(run.final_time) << ": ";
            if (run.failed())
                log << run.status;
            else if (reached)
                log << "tolerance reached at iteration " << *reached;
            else
                log << "tolerance not reached in " << run.history.records().size() << " iterations";
            log << '\n';
        }
        log << "wrote " << (dir / (stem + ".csv")).string() << '\n';
        return report.any_failure() ? kExitNumerical : kExitOk;
    }

    std::string theory_report(Method method, double a, double b, double c, double T, double theta)
    {
        const theory::SymbolSpec spec{method, theta, theory::Geometry{a, b, c}};
        spec.validate();
        const int bound = theory::finite_step_bound(method, a, b, c, T);

        std::ostringstream out;
        out << "method: " << to_string(method) << '\n'
            << "theta: " << fmt(theta) << '\n'
            << "finite_step_bound: " << bound << '\n'
            << "symmetric_rate: " << fmt(theory::symmetric_rate(method, theta)) << '\n';

        // Minimum delay of each symbol power within [0, T]; "none" means the
        // error trace vanishes on the whole window after k iterations.
        std::vector<std::string> lines;
        for (int k = 1; k <= bound; ++k)
        {
            const auto merged = theory::symbol_power(spec, k, T).by_delay();
            std::string line = "k=" + std::to_string(k) + " min_delay=";
            if (merged.empty())
                line += "none";
            else
                line += fmt(merged.front().first) + " leading_coefficient=" + merged.front().second.str();
            if (k == 1)
                out << "min_delay: " << (merged.empty() ? std::string("none") : fmt(merged.front().first)) << '\n';
            lines.push_back(line);
        }
        for (const auto& line : lines)
            out << line << '\n';
        return out.str();
    }
} // namespace wavewr::cli
