#include "wavewr/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

namespace wavewr::cli
{
    namespace
    {
        std::string trim(const std::string& s)
        {
            const auto first = s.find_first_not_of(" \t\r");
            if (first == std::string::npos)
                return {};
            const auto last = s.find_last_not_of(" \t\r");
            return s.substr(first, last - first + 1);
        }

        std::string lower(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
            return s;
        }

        std::string upper(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
            return s;
        }

        std::vector<std::string> split_list(const std::string& s)
        {
            std::vector<std::string> out;
            std::string item;
            std::istringstream in(s);
            while (std::getline(in, item, ','))
            {
                item = trim(item);
                if (!item.empty())
                    out.push_back(item);
            }
            return out;
        }

        double parse_plain(const std::string& s)
        {
            double v = 0.0;
            const char* begin = s.data();
            const char* end = s.data() + s.size();
            if (!s.empty() && *begin == '+')
                ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end || begin == end)
                throw ConfigError("not a number: '" + s + "'");
            return v;
        }

        int parse_int(const std::string& s)
        {
            int v = 0;
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
                throw ConfigError("not an integer: '" + s + "'");
            return v;
        }

        bool parse_bool(const std::string& s)
        {
            const std::string v = lower(s);
            if (v == "true" || v == "yes" || v == "1")
                return true;
            if (v == "false" || v == "no" || v == "0")
                return false;
            throw ConfigError("not a boolean: '" + s + "'");
        }

        // Shortest text that reads back to the same double.
        std::string fmt(double v)
        {
            char buf[32];
            const auto end = std::to_chars(buf, buf + sizeof buf, v).ptr;
            return std::string(buf, end);
        }

        template <class T, class F>
        std::string join(const std::vector<T>& items, F&& show)
        {
            std::string out;
            for (std::size_t i = 0; i < items.size(); ++i)
            {
                if (i > 0)
                    out += ", ";
                out += show(items[i]);
            }
            return out;
        }

        FluxMode parse_flux_mode(const std::string& s)
        {
            const std::string v = upper(s);
            if (v == "SCHEME_CONSISTENT")
                return FluxMode::SchemeConsistent;
            if (v == "ONE_SIDED")
                return FluxMode::OneSided;
            throw ConfigError("unknown flux_mode '" + s + "'");
        }

        StartMode parse_start_mode(const std::string& s)
        {
            const std::string v = upper(s);
            if (v == "EXACT_DALEMBERT")
                return StartMode::ExactDalembert;
            if (v == "TAYLOR")
                return StartMode::Taylor;
            throw ConfigError("unknown start_mode '" + s + "'");
        }

        GuessKind parse_guess(const std::string& s)
        {
            const std::string v = upper(s);
            if (v == "POLY_T2")
                return GuessKind::PolyT2;
            if (v == "ZERO")
                return GuessKind::Zero;
            if (v == "MONODOMAIN_TRACE")
                return GuessKind::MonodomainTrace;
            throw ConfigError("unknown initial_guess '" + s + "'");
        }

        // Splits "name(a, b, c)" into the name and its argument list.
        std::pair<std::string, std::vector<std::string>> split_call(const std::string& text)
        {
            const std::string s = trim(text);
            const auto open = s.find('(');
            if (open == std::string::npos)
                return {lower(s), {}};
            if (s.back() != ')')
                throw ConfigError("malformed function '" + text + "'");
            return {lower(trim(s.substr(0, open))), split_list(s.substr(open + 1, s.size() - open - 2))};
        }

        using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

        // Rejects names outside the whitelist while the line is still known.
        FunctionSpec checked_function(const std::string& text)
        {
            make_function({text}, ProblemBlock{});
            return {text};
        }

        const std::map<std::string, Setter>& setters()
        {
            static const std::map<std::string, Setter> table = {
                {"problem.x_left", [](auto& c, const auto& v) { c.problem.x_left = parse_number(v); }},
                {"problem.interface", [](auto& c, const auto& v) { c.problem.interface = parse_number(v); }},
                {"problem.x_right", [](auto& c, const auto& v) { c.problem.x_right = parse_number(v); }},
                {"problem.wave_speed", [](auto& c, const auto& v) { c.problem.wave_speed = parse_number(v); }},
                {"problem.u0", [](auto& c, const auto& v) { c.problem.u0 = checked_function(v); }},
                {"problem.v0", [](auto& c, const auto& v) { c.problem.v0 = checked_function(v); }},
                {"problem.g_left", [](auto& c, const auto& v) { c.problem.g_left = checked_function(v); }},
                {"problem.g_right", [](auto& c, const auto& v) { c.problem.g_right = checked_function(v); }},
                {"problem.f", [](auto& c, const auto& v) { c.problem.f = checked_function(v); }},
                {"discretization.dx", [](auto& c, const auto& v) { c.dx = parse_number(v); }},
                {"discretization.dt", [](auto& c, const auto& v) { c.dt = parse_number(v); }},
                {"run.methods",
                 [](auto& c, const auto& v) {
                     c.methods.clear();
                     for (const auto& m : split_list(v))
                         c.methods.push_back(parse_method(upper(m)));
                 }},
                {"run.thetas",
                 [](auto& c, const auto& v) {
                     c.thetas.clear();
                     for (const auto& t : split_list(v))
                         c.thetas.push_back(parse_number(t));
                 }},
                {"run.T",
                 [](auto& c, const auto& v) {
                     c.final_times.clear();
                     for (const auto& t : split_list(v))
                         c.final_times.push_back(parse_number(t));
                 }},
                {"run.theta_dnwr", [](auto& c, const auto& v) { c.theta_dnwr = parse_number(v); }},
                {"run.theta_nnwr", [](auto& c, const auto& v) { c.theta_nnwr = parse_number(v); }},
                {"run.max_iterations", [](auto& c, const auto& v) { c.max_iterations = parse_int(v); }},
                {"run.tolerance", [](auto& c, const auto& v) { c.tolerance = parse_number(v); }},
                {"run.flux_mode", [](auto& c, const auto& v) { c.flux_mode = parse_flux_mode(v); }},
                {"run.start_mode", [](auto& c, const auto& v) { c.start_mode = parse_start_mode(v); }},
                {"run.overlap_cells", [](auto& c, const auto& v) { c.overlap_cells = parse_int(v); }},
                {"run.initial_guess", [](auto& c, const auto& v) { c.initial_guess = parse_guess(v); }},
                {"run.record_wallclock", [](auto& c, const auto& v) { c.record_wallclock = parse_bool(v); }},
                {"run.parallel", [](auto& c, const auto& v) { c.parallel = parse_bool(v); }},
                {"output.dir", [](auto& c, const auto& v) { c.output_dir = v; }},
                {"output.name", [](auto& c, const auto& v) { c.output_name = v; }},
            };
            return table;
        }
    } // namespace

    double parse_number(const std::string& text)
    {
        const std::string s = trim(text);
        const auto slash = s.find('/');
        if (slash == std::string::npos)
            return parse_plain(s);
        const double p = parse_plain(trim(s.substr(0, slash)));
        const double q = parse_plain(trim(s.substr(slash + 1)));
        if (q == 0.0)
            throw ConfigError("zero denominator in '" + text + "'");
        return p / q;
    }

    std::function<double(double)> make_function(const FunctionSpec& spec, const ProblemBlock& problem)
    {
        const auto [name, args] = split_call(spec.text);
        std::vector<double> coeffs;
        for (const auto& a : args)
            coeffs.push_back(parse_number(a));
        const auto no_args = [&] {
            if (!args.empty())
                throw ConfigError("function '" + name + "' takes no arguments");
        };
        const auto polynomial = [](std::vector<double> c) {
            return [c = std::move(c)](double z) {
                double s = 0.0;
                for (auto it = c.rbegin(); it != c.rend(); ++it)
                    s = s * z + *it;
                return s;
            };
        };

        if (name == "zero")
        {
            no_args();
            return [](double) { return 0.0; };
        }
        if (name == "poly_t2")
        {
            no_args();
            return [](double z) { return z * z; };
        }
        if (name == "model_v0")
        {
            no_args();
            return [](double x) { return x * std::exp(-x); };
        }
        if (name == "model_g_left" || name == "model_g_right")
        {
            no_args();
            const double x = name == "model_g_left" ? problem.x_left : problem.x_right;
            const double slope = x * std::exp(-x);
            return [slope](double t) { return slope * t; };
        }
        if (name == "poly")
        {
            if (coeffs.empty())
                throw ConfigError("poly needs at least one coefficient");
            return polynomial(coeffs);
        }
        if (name == "poly_exp")
        {
            if (coeffs.size() < 2)
                throw ConfigError("poly_exp needs a rate and at least one coefficient");
            const double rate = coeffs.front();
            auto p = polynomial(std::vector<double>(coeffs.begin() + 1, coeffs.end()));
            return [rate, p](double z) { return std::exp(rate * z) * p(z); };
        }
        throw ConfigError("function '" + spec.text + "' is not in the whitelist");
    }

    bool ExperimentConfig::is_explicit(const std::string& key) const
    {
        return key_lines.count(key) != 0;
    }

    void ExperimentConfig::validate() const
    {
        // Errors name the line that set the offending key, when there is one.
        const auto fail = [this](const std::string& key, const std::string& what) {
            const auto it = key_lines.find(key);
            const std::string where = it == key_lines.end() ? "" : "line " + std::to_string(it->second) + ": ";
            return ConfigError(where + key + ": " + what);
        };
        if (methods.empty())
            throw fail("run.methods", "at least one method is required");
        if (final_times.empty())
            throw fail("run.T", "at least one final time is required");
        const bool needs_theta = std::any_of(methods.begin(), methods.end(), [](Method m) {
            return m == Method::DNWR || m == Method::NNWR;
        });
        if (needs_theta && thetas.empty())
            throw fail("run.thetas", "DNWR/NNWR runs need at least one theta");
        for (double th : thetas)
            if (!(th > 0.0 && th <= 1.0))
                throw fail("run.thetas", "theta must lie in (0, 1]");
        if (!(theta_dnwr > 0.0 && theta_dnwr <= 1.0))
            throw fail("run.theta_dnwr", "theta must lie in (0, 1]");
        if (!(theta_nnwr > 0.0 && theta_nnwr <= 1.0))
            throw fail("run.theta_nnwr", "theta must lie in (0, 1]");
        if (max_iterations < 1)
            throw fail("run.max_iterations", "must be at least 1");
        if (!(tolerance >= 0.0))
            throw fail("run.tolerance", "must be nonnegative");
        if (overlap_cells < 0)
            throw fail("run.overlap_cells", "must be nonnegative");
        if (output_name.empty() || output_name.find('/') != std::string::npos)
            throw fail("output.name", "must be a plain file stem");

        WaveProblem p;
        try
        {
            p = make_problem();
        }
        catch (const ConfigError&)
        {
            throw;
        }
        catch (const UsageError& e)
        {
            throw fail(is_explicit("problem.x_right") ? "problem.x_right" : "problem.x_left", e.what());
        }
        for (double T : final_times)
        {
            Discretization d;
            try
            {
                d = Discretization::with_window(dx, dt, T);
            }
            catch (const UsageError& e)
            {
                throw fail(is_explicit("discretization.dt") ? "discretization.dt" : "run.T", e.what());
            }
            try
            {
                d.validate_for(p);
            }
            catch (const UsageError& e)
            {
                throw fail("discretization.dx", e.what());
            }
        }
    }

    WaveProblem ExperimentConfig::make_problem() const
    {
        WaveProblem p;
        p.x_left = problem.x_left;
        p.interface = problem.interface;
        p.x_right = problem.x_right;
        p.wave_speed = problem.wave_speed;
        p.u0 = make_function(problem.u0, problem);
        p.v0 = make_function(problem.v0, problem);
        p.g_left = make_function(problem.g_left, problem);
        p.g_right = make_function(problem.g_right, problem);
        // The source is given as a function of x only.
        p.f = [fx = make_function(problem.f, problem)](double x, double) { return fx(x); };
        p.validate();
        return p;
    }

    ExperimentConfig parse_config(std::istream& in)
    {
        ExperimentConfig cfg;
        std::string section;
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw))
        {
            ++line_no;
            const auto where = [&](const std::string& what) {
                return ConfigError("line " + std::to_string(line_no) + ": " + what);
            };
            std::string line = raw;
            if (const auto hash = line.find('#'); hash != std::string::npos)
                line.erase(hash);
            line = trim(line);
            if (line.empty())
                continue;
            if (line.front() == '[')
            {
                if (line.back() != ']')
                    throw where("malformed section header '" + line + "'");
                section = lower(trim(line.substr(1, line.size() - 2)));
                if (section != "problem" && section != "discretization" && section != "run" && section != "output")
                    throw where("unknown section [" + section + "]");
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw where("expected 'key = value'");
            if (section.empty())
                throw where("setting outside of a section");
            const std::string key = section + "." + trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            const auto it = setters().find(key);
            if (it == setters().end())
                throw where("unknown key '" + key + "'");
            if (cfg.is_explicit(key))
                throw where("duplicate key '" + key + "'");
            try
            {
                it->second(cfg, value);
            }
            catch (const std::exception& e)
            {
                throw where(key + ": " + e.what());
            }
            cfg.key_lines[key] = line_no;
        }
        return cfg;
    }

    ExperimentConfig load_config(const std::string& path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open config '" + path + "'");
        try
        {
            return parse_config(in);
        }
        catch (const ConfigError& e)
        {
            throw ConfigError(path + ": " + e.what());
        }
    }

    std::string to_string(GuessKind g)
    {
        switch (g)
        {
        case GuessKind::PolyT2: return "POLY_T2";
        case GuessKind::Zero: return "ZERO";
        case GuessKind::MonodomainTrace: return "MONODOMAIN_TRACE";
        }
        return "?";
    }

    std::string to_string(FluxMode m) { return m == FluxMode::SchemeConsistent ? "SCHEME_CONSISTENT" : "ONE_SIDED"; }

    std::string to_string(StartMode m) { return m == StartMode::ExactDalembert ? "EXACT_DALEMBERT" : "TAYLOR"; }

    void write_effective_config(std::ostream& out, const ExperimentConfig& cfg)
    {
        const auto number = [](double v) { return fmt(v); };
        out << "[problem]\n"
            << "x_left = " << fmt(cfg.problem.x_left) << "\n"
            << "interface = " << fmt(cfg.problem.interface) << "\n"
            << "x_right = " << fmt(cfg.problem.x_right) << "\n"
            << "wave_speed = " << fmt(cfg.problem.wave_speed) << "\n"
            << "u0 = " << cfg.problem.u0.text << "\n"
            << "v0 = " << cfg.problem.v0.text << "\n"
            << "g_left = " << cfg.problem.g_left.text << "\n"
            << "g_right = " << cfg.problem.g_right.text << "\n"
            << "f = " << cfg.problem.f.text << "\n\n"
            << "[discretization]\n"
            << "dx = " << fmt(cfg.dx) << "\n"
            << "dt = " << fmt(cfg.dt) << "\n\n"
            << "[run]\n"
            << "methods = " << join(cfg.methods, [](Method m) { return std::string(wavewr::to_string(m)); }) << "\n"
            << "thetas = " << join(cfg.thetas, number) << "\n"
            << "T = " << join(cfg.final_times, number) << "\n"
            << "theta_dnwr = " << fmt(cfg.theta_dnwr) << "\n"
            << "theta_nnwr = " << fmt(cfg.theta_nnwr) << "\n"
            << "max_iterations = " << cfg.max_iterations << "\n"
            << "tolerance = " << fmt(cfg.tolerance) << "\n"
            << "flux_mode = " << to_string(cfg.flux_mode) << "\n"
            << "start_mode = " << to_string(cfg.start_mode) << "\n"
            << "overlap_cells = " << cfg.overlap_cells << "\n"
            << "initial_guess = " << to_string(cfg.initial_guess) << "\n"
            << "record_wallclock = " << (cfg.record_wallclock ? "true" : "false") << "\n"
            << "parallel = " << (cfg.parallel ? "true" : "false") << "\n\n"
            << "[output]\n"
            << "dir = " << cfg.output_dir << "\n"
            << "name = " << cfg.output_name << "\n";
    }
} // namespace wavewr::cli
