#include "wavewr/waveform.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <utility>

namespace wavewr
{
    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        // Runs two independent solves, on two threads when asked. The results
        // do not depend on the choice.
        template <class F1, class F2>
        auto run_pair(bool parallel, F1&& f1, F2&& f2)
        {
            if (!parallel)
            {
                auto a = f1();
                auto b = f2();
                return std::make_pair(std::move(a), std::move(b));
            }
            auto fut = std::async(std::launch::async, std::forward<F2>(f2));
            auto a = f1();
            return std::make_pair(std::move(a), fut.get());
        }

        TimeTrace sample_guess(const InitialGuess& g, double x, const Discretization& d)
        {
            return TimeTrace::sample([&](double t) { return g(x, t); }, d);
        }

        TimeTrace scaled_sum(double a, const TimeTrace& u, double b, const TimeTrace& v)
        {
            std::vector<double> out(static_cast<std::size_t>(u.n_time()) + 1);
            for (int n = 0; n <= u.n_time(); ++n)
                out[static_cast<std::size_t>(n)] = a * u[n] + b * v[n];
            return TimeTrace(std::move(out), u.dt());
        }

        TimeTrace negated(const TimeTrace& u) { return scaled_sum(-1.0, u, 0.0, u); }

        // Shared bookkeeping of one driver run: reference, timing, records and
        // the stopping decision.
        class Recorder
        {
        public:
            Recorder(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg, Reference ref)
                : cfg_(cfg), ref_(std::move(ref)), gamma_(interface_node(problem, disc))
            {
                if (!ref_ && cfg.stop_mode == StopMode::Reference)
                    ref_ = std::make_shared<const SpaceTimeField>(solve_monodomain(problem, disc, cfg.start_mode));
                if (ref_)
                {
                    if (ref_->grid() != global_grid(problem, disc) || ref_->n_time() != disc.n_time)
                        throw UsageError("reference field does not match the problem grid");
                    ref_trace_ = ref_->trace(gamma_);
                }
            }

            void start_iteration() { t0_ = std::chrono::steady_clock::now(); }

            // Returns true when the iteration should stop.
            bool finish_iteration(int k, Concatenation&& joined, const TimeTrace& interface_data, WrResult& out)
            {
                IterationRecord r;
                r.iteration = k;
                r.error_linf_l2 = ref_ ? error_linf_l2(*ref_, joined.field) : kNaN;
                r.trace_error_l2 = ref_ ? l2_time(interface_data - ref_trace_) : kNaN;
                r.increment = k > 1 ? error_linf_l2(out.solution, joined.field) : kNaN;
                r.wallclock_ms =
                    std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
                out.history.append(r);
                out.solution = std::move(joined.field);
                out.interface_discrepancy = joined.discrepancy;
                if (cfg_.record_traces)
                    out.traces.push_back(interface_data);

                const double measure = cfg_.stop_mode == StopMode::Reference ? r.error_linf_l2 : r.increment;
                if (!std::isfinite(r.error_linf_l2) && ref_)
                    return true;
                if (measure <= cfg_.tolerance)
                {
                    out.converged = true;
                    return true;
                }
                return false;
            }

            int gamma() const { return gamma_; }

        private:
            const WrConfig& cfg_;
            Reference ref_;
            int gamma_;
            TimeTrace ref_trace_;
            std::chrono::steady_clock::time_point t0_;
        };

        void require_method(const WrConfig& cfg, Method m)
        {
            cfg.validate();
            if (cfg.method != m)
                throw UsageError("driver called with method " + std::string(to_string(cfg.method)));
        }

        // Field over `grid` holding the guess at levels >= 1 and u0 at level 0.
        SpaceTimeField guess_field(const WaveProblem& p, const Discretization& d, const Grid& grid,
                                   const InitialGuess& guess)
        {
            SpaceTimeField u(grid, d.n_time, d.dt);
            for (int j = 0; j < grid.n_nodes; ++j)
                u(0, j) = p.u0(grid.x(j));
            for (int n = 1; n <= d.n_time; ++n)
                for (int j = 0; j < grid.n_nodes; ++j)
                    u(n, j) = guess(grid.x(j), d.time(n));
            return u;
        }
    } // namespace

    InitialGuess guess_from_time(TimeFunction g)
    {
        return [g = std::move(g)](double, double t) { return g(t); };
    }

    InitialGuess guess_from_field(std::shared_ptr<const SpaceTimeField> u)
    {
        return [u = std::move(u)](double x, double t) {
            const Grid& g = u->grid();
            const int j = static_cast<int>(std::lround((x - g.origin) / g.dx)) - g.first;
            const int n = static_cast<int>(std::lround(t / u->dt()));
            if (j < 0 || j >= g.n_nodes || n < 0 || n > u->n_time())
                throw UsageError("guess_from_field: point outside the field");
            return (*u)(n, j);
        };
    }

    void WrConfig::validate() const
    {
        if ((method == Method::DNWR || method == Method::NNWR) && !(theta > 0.0 && theta <= 1.0))
            throw UsageError("WrConfig: theta must lie in (0, 1]");
        if (max_iterations < 1)
            throw UsageError("WrConfig: max_iterations must be at least 1");
        if (!(tolerance >= 0.0))
            throw UsageError("WrConfig: tolerance must be nonnegative");
        if (!initial_guess)
            throw UsageError("WrConfig: initial guess not set");
        if (method == Method::SwrClassical && overlap_cells < 1)
            throw UsageError("WrConfig: SWR_CLASSICAL needs overlap_cells >= 1");
        if (overlap_cells < 0)
            throw UsageError("WrConfig: overlap_cells must be nonnegative");
    }

    WrResult dnwr_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                          Reference reference)
    {
        require_method(cfg, Method::DNWR);
        disc.validate_for(problem);
        Recorder rec(problem, disc, cfg, std::move(reference));
        const Grid global = global_grid(problem, disc);
        const int gamma = rec.gamma();
        const Grid g1 = global.sub(0, gamma);
        const Grid g2 = global.sub(gamma, global.last());
        const TimeTrace g_left = TimeTrace::sample(problem.g_left, disc);
        const TimeTrace g_right = TimeTrace::sample(problem.g_right, disc);

        WrResult out;
        TimeTrace h = sample_guess(cfg.initial_guess, problem.interface, disc);
        for (int k = 1; k <= cfg.max_iterations; ++k)
        {
            rec.start_iteration();
            const auto p1 = make_subproblem(problem, disc, g1, DirichletTrace{g_left}, DirichletTrace{h}, cfg.start_mode);
            SpaceTimeField u1 = solve(p1);
            const TimeTrace flux = extract_flux(u1, p1, Side::Right, cfg.flux_mode);
            // Omega_2's outward normal at the interface is minus Omega_1's.
            const auto p2 = make_subproblem(problem, disc, g2, NeumannTrace{negated(flux)},
                                            DirichletTrace{g_right}, cfg.start_mode);
            SpaceTimeField u2 = solve(p2);

            h = scaled_sum(cfg.theta, u2.trace(0), 1.0 - cfg.theta, h);
            auto joined = concatenate(u1, u2);
            out.u1 = std::move(u1);
            out.u2 = std::move(u2);
            if (rec.finish_iteration(k, std::move(joined), h, out))
                break;
        }
        return out;
    }

    WrResult nnwr_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                          Reference reference)
    {
        require_method(cfg, Method::NNWR);
        disc.validate_for(problem);
        Recorder rec(problem, disc, cfg, std::move(reference));
        const Grid global = global_grid(problem, disc);
        const int gamma = rec.gamma();
        const Grid g1 = global.sub(0, gamma);
        const Grid g2 = global.sub(gamma, global.last());
        const TimeTrace g_left = TimeTrace::sample(problem.g_left, disc);
        const TimeTrace g_right = TimeTrace::sample(problem.g_right, disc);
        const WaveProblem zero = problem.homogeneous();
        const TimeTrace nothing = TimeTrace::zero(disc);

        WrResult out;
        TimeTrace w = sample_guess(cfg.initial_guess, problem.interface, disc);
        for (int k = 1; k <= cfg.max_iterations; ++k)
        {
            rec.start_iteration();
            const auto p1 = make_subproblem(problem, disc, g1, DirichletTrace{g_left}, DirichletTrace{w}, cfg.start_mode);
            const auto p2 = make_subproblem(problem, disc, g2, DirichletTrace{w}, DirichletTrace{g_right}, cfg.start_mode);
            auto [u1, u2] = run_pair(cfg.parallel_stages, [&] { return solve(p1); }, [&] { return solve(p2); });

            const TimeTrace jump = scaled_sum(1.0, extract_flux(u1, p1, Side::Right, cfg.flux_mode), 1.0,
                                              extract_flux(u2, p2, Side::Left, cfg.flux_mode));
            const auto q1 = make_subproblem(zero, disc, g1, DirichletTrace{nothing}, NeumannTrace{jump}, cfg.start_mode);
            const auto q2 = make_subproblem(zero, disc, g2, NeumannTrace{jump}, DirichletTrace{nothing}, cfg.start_mode);
            auto [psi1, psi2] = run_pair(cfg.parallel_stages, [&] { return solve(q1); }, [&] { return solve(q2); });

            w = scaled_sum(1.0, w, -cfg.theta, scaled_sum(1.0, psi1.trace(psi1.n_nodes() - 1), 1.0, psi2.trace(0)));
            auto joined = concatenate(u1, u2);
            out.u1 = std::move(u1);
            out.u2 = std::move(u2);
            out.flux_jump = jump;
            if (rec.finish_iteration(k, std::move(joined), w, out))
                break;
        }
        return out;
    }

    WrResult swr_classical_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                                   Reference reference)
    {
        require_method(cfg, Method::SwrClassical);
        disc.validate_for(problem);
        Recorder rec(problem, disc, cfg, std::move(reference));
        const Grid global = global_grid(problem, disc);
        const int gamma = rec.gamma();
        // Odd overlaps put the extra cell on Omega_1's side.
        const int right_end_1 = gamma + (cfg.overlap_cells + 1) / 2;
        const int left_end_2 = gamma - cfg.overlap_cells / 2;
        if (left_end_2 < 1 || right_end_1 > global.last() - 1)
            throw UsageError("swr_classical_iterate: overlap exceeds a subdomain");
        const Grid g1 = global.sub(0, right_end_1);
        const Grid g2 = global.sub(left_end_2, global.last());
        const TimeTrace g_left = TimeTrace::sample(problem.g_left, disc);
        const TimeTrace g_right = TimeTrace::sample(problem.g_right, disc);

        WrResult out;
        TimeTrace d1 = sample_guess(cfg.initial_guess, global.x(right_end_1), disc);
        TimeTrace d2 = sample_guess(cfg.initial_guess, global.x(left_end_2), disc);
        for (int k = 1; k <= cfg.max_iterations; ++k)
        {
            rec.start_iteration();
            const auto p1 = make_subproblem(problem, disc, g1, DirichletTrace{g_left}, DirichletTrace{d1}, cfg.start_mode);
            const auto p2 = make_subproblem(problem, disc, g2, DirichletTrace{d2}, DirichletTrace{g_right}, cfg.start_mode);
            auto [u1, u2] = run_pair(cfg.parallel_stages, [&] { return solve(p1); }, [&] { return solve(p2); });

            d1 = u2.trace(right_end_1 - left_end_2);
            d2 = u1.trace(left_end_2);
            auto joined = concatenate(u1.restrict_to(0, gamma), u2.restrict_to(gamma, global.last()));
            const TimeTrace at_interface = u1.trace(gamma);
            out.u1 = std::move(u1);
            out.u2 = std::move(u2);
            if (rec.finish_iteration(k, std::move(joined), at_interface, out))
                break;
        }
        return out;
    }

    WrResult swr_optimized_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                                   Reference reference)
    {
        require_method(cfg, Method::SwrOptimized);
        disc.validate_for(problem);
        Recorder rec(problem, disc, cfg, std::move(reference));
        const Grid global = global_grid(problem, disc);
        const int gamma = rec.gamma();
        const Grid g1 = global.sub(0, gamma);
        const Grid g2 = global.sub(gamma, global.last());
        if (g1.n_nodes < 3 || g2.n_nodes < 3)
            throw UsageError("swr_optimized_iterate: each subdomain needs at least two cells");
        const TimeTrace g_left = TimeTrace::sample(problem.g_left, disc);
        const TimeTrace g_right = TimeTrace::sample(problem.g_right, disc);

        // The absorbing data of the first sweep come from fields holding the guess.
        const TimeTrace placeholder = TimeTrace::zero(disc);
        auto p1 = make_subproblem(problem, disc, g1, DirichletTrace{g_left}, AbsorbingTrace{placeholder}, cfg.start_mode);
        auto p2 = make_subproblem(problem, disc, g2, AbsorbingTrace{placeholder}, DirichletTrace{g_right}, cfg.start_mode);
        TimeTrace r1 = absorbing_datum_for_neighbour(guess_field(problem, disc, g2, cfg.initial_guess), p2, Side::Left);
        TimeTrace r2 = absorbing_datum_for_neighbour(guess_field(problem, disc, g1, cfg.initial_guess), p1, Side::Right);

        WrResult out;
        for (int k = 1; k <= cfg.max_iterations; ++k)
        {
            rec.start_iteration();
            p1.right = AbsorbingTrace{r1};
            p2.left = AbsorbingTrace{r2};
            auto [u1, u2] = run_pair(cfg.parallel_stages, [&] { return solve(p1); }, [&] { return solve(p2); });

            r1 = absorbing_datum_for_neighbour(u2, p2, Side::Left);
            r2 = absorbing_datum_for_neighbour(u1, p1, Side::Right);
            auto joined = concatenate(u1, u2);
            const TimeTrace at_interface = u1.trace(u1.n_nodes() - 1);
            out.u1 = std::move(u1);
            out.u2 = std::move(u2);
            if (rec.finish_iteration(k, std::move(joined), at_interface, out))
                break;
        }
        return out;
    }

    WrResult iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg, Reference reference)
    {
        switch (cfg.method)
        {
        case Method::DNWR: return dnwr_iterate(problem, disc, cfg, std::move(reference));
        case Method::NNWR: return nnwr_iterate(problem, disc, cfg, std::move(reference));
        case Method::SwrClassical: return swr_classical_iterate(problem, disc, cfg, std::move(reference));
        case Method::SwrOptimized: return swr_optimized_iterate(problem, disc, cfg, std::move(reference));
        }
        throw UsageError("unknown method");
    }
} // namespace wavewr
