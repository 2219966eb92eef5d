#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "wavewr/stepper.hpp"

using namespace wavewr;

namespace
{
    constexpr double kPi = std::numbers::pi;

    WaveProblem model()
    {
        WaveProblem p;
        p.x_left = -3.0;
        p.interface = 0.0;
        p.x_right = 2.0;
        p.u0 = [](double) { return 0.0; };
        p.v0 = [](double x) { return x * std::exp(-x); };
        p.g_left = [](double t) { return -3.0 * std::exp(3.0) * t; };
        p.g_right = [](double t) { return 2.0 * std::exp(-2.0) * t; };
        p.f = [](double, double) { return 0.0; };
        return p;
    }

    // Interval [x0, x0 + cells dx] with Dirichlet data taken from `exact`.
    SubdomainProblem dirichlet_problem(double x0, int cells, Discretization d,
                                       const std::function<double(double, double)>& exact)
    {
        SubdomainProblem p;
        p.grid = Grid{x0, d.dx, 0, cells + 1};
        p.disc = d;
        const double xl = p.grid.x(0);
        const double xr = p.grid.x(cells);
        p.left = DirichletTrace{TimeTrace::sample([=](double t) { return exact(xl, t); }, d)};
        p.right = DirichletTrace{TimeTrace::sample([=](double t) { return exact(xr, t); }, d)};
        p.f = [](double, double) { return 0.0; };
        return p;
    }

    double max_nodal_error(const SpaceTimeField& u, const std::function<double(double, double)>& exact)
    {
        double worst = 0.0;
        for (int n = 0; n <= u.n_time(); ++n)
            for (int j = 0; j < u.n_nodes(); ++j)
                worst = std::max(worst, std::abs(u(n, j) - exact(u.grid().x(j), n * u.dt())));
        return worst;
    }

    // P(x) = -(x + 1) e^{-x} is an antiderivative of x e^{-x}.
    double P(double x) { return -(x + 1.0) * std::exp(-x); }
    double max_abs(const SpaceTimeField& u)
    {
        double m = 0.0;
        for (int n = 0; n <= u.n_time(); ++n)
            for (double v : u.row(n))
                m = std::max(m, std::abs(v));
        return m;
    }
} // namespace

TEST_CASE("zero data gives the zero field")
{
    const Discretization d{0.1, 0.05, 40};
    auto p = dirichlet_problem(0.0, 10, d, [](double, double) { return 0.0; });
    p.u0 = [](double) { return 0.0; };
    p.v0 = [](double) { return 0.0; };
    const auto u = solve(p);
    for (int n = 0; n <= d.n_time; ++n)
        for (double v : u.row(n))
            CHECK(v == 0.0);
    for (double v : first_step(p))
        CHECK(v == 0.0);
}

TEST_CASE("standing wave is exact at lambda = 1")
{
    const Discretization d = Discretization::with_window(0.02, 0.02, 2.0);
    const auto exact = [](double x, double t) { return std::cos(kPi * t) * std::sin(kPi * x); };
    auto p = dirichlet_problem(0.0, 50, d, [](double, double) { return 0.0; });
    p.u0 = [](double x) { return std::sin(kPi * x); };
    p.v0 = [](double) { return 0.0; };
    p.start = StartMode::ExactDalembert;
    CHECK(max_nodal_error(solve(p), exact) <= 1e-12);
}

TEST_CASE("polynomial travelling waves are reproduced at lambda = 1")
{
    // u = F(x - t) + G(x + t).
    const auto F = [](double z) { return z * z * z / 6.0 - z + 0.5; };
    const auto dF = [](double z) { return z * z / 2.0 - 1.0; };
    const auto G = [](double z) { return 0.25 * z * z * z * z / 12.0 + 0.5 * z * z; };
    const auto dG = [](double z) { return z * z * z / 12.0 + z; };
    const auto exact = [&](double x, double t) { return F(x - t) + G(x + t); };

    const Discretization d = Discretization::with_window(0.05, 0.05, 2.0);
    auto p = dirichlet_problem(-1.0, 40, d, exact);
    p.u0 = [&](double x) { return F(x) + G(x); };
    p.v0 = [&](double x) { return -dF(x) + dG(x); };
    p.start = StartMode::ExactDalembert;
    CHECK(max_nodal_error(solve(p), exact) <= 1e-12);
}

TEST_CASE("first step formulas")
{
    const Discretization d{0.02, 0.02, 10};
    const WaveProblem m = model();
    const Grid g{-1.0, 0.02, 0, 101};
    auto p = make_subproblem(m, d, g, DirichletTrace{TimeTrace::zero(d)}, DirichletTrace{TimeTrace::zero(d)},
                             StartMode::Taylor);

    SUBCASE("taylor collapses to dt v0")
    {
        for (int j : {1, 30, 50, 99})
        {
            const double x = g.x(j);
            CHECK(starter_value(p, x) == doctest::Approx(0.02 * x * std::exp(-x)).epsilon(1e-14));
        }
        const auto row = first_step(p);
        CHECK(row.front() == 0.0);
        CHECK(row.back() == 0.0);
    }

    SUBCASE("exact d'Alembert matches the antiderivative")
    {
        p.start = StartMode::ExactDalembert;
        // 40-digit reference for 1/2 [P(0.02) - P(-0.02)].
        CHECK(std::abs(starter_value(p, 0.0) - (-2.666773334857154144672118163318514133374e-06)) <= 1e-18);
        for (double x : {-3.0, -1.0, -0.5, 0.0, 0.26, 1.0, 2.0})
            CHECK(std::abs(starter_value(p, x) - 0.5 * (P(x + 0.02) - P(x - 0.02))) <= 1e-12);
    }

    SUBCASE("exact start rejects a source")
    {
        p.start = StartMode::ExactDalembert;
        p.f = [](double x, double) { return x; };
        CHECK_THROWS_AS(first_step(p), UsageError);
        CHECK_THROWS_AS(solve(p), UsageError);
    }
}

TEST_CASE("solve preconditions")
{
    const Discretization d{0.02, 0.02, 10};
    auto p = dirichlet_problem(0.0, 10, d, [](double, double) { return 0.0; });
    p.u0 = [](double) { return 0.0; };
    p.v0 = [](double) { return 0.0; };

    auto fast = p;
    fast.wave_speed = 1.01;
    CHECK_THROWS_AS(solve(fast), StabilityError);

    auto short_trace = p;
    short_trace.right = DirichletTrace{TimeTrace::zero(Discretization{0.02, 0.02, 9})};
    CHECK_THROWS_AS(solve(short_trace), UsageError);
}

TEST_CASE("stability on random smooth data")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    for (double lambda : {0.5, 0.8, 1.0})
    {
        for (int trial = 0; trial < 5; ++trial)
        {
            std::vector<double> a(6);
            double amplitude = 0.0;
            for (auto& v : a)
            {
                v = coef(rng);
                amplitude += std::abs(v);
            }
            const auto u0 = [a](double x) {
                double s = 0.0;
                for (std::size_t k = 0; k < a.size(); ++k)
                    s += a[k] * std::sin(static_cast<double>(k + 1) * kPi * x);
                return s;
            };
            const Discretization d = Discretization::with_window(0.02, 0.02 * lambda, 4.0);
            auto p = dirichlet_problem(0.0, 50, d, [](double, double) { return 0.0; });
            p.u0 = u0;
            p.v0 = [](double) { return 0.0; };
            const auto u = solve(p);
            double peak = 0.0;
            for (int n = 0; n <= u.n_time(); ++n)
                for (double v : u.row(n))
                    peak = std::max(peak, std::abs(v));
            CHECK(peak <= 2.0 * amplitude);
        }
    }
}

TEST_CASE("second-order convergence at lambda = 0.5")
{
    // u = sin(x) e^{-t} solves u_tt - u_xx = 2 sin(x) e^{-t}.
    const auto exact = [](double x, double t) { return std::sin(x) * std::exp(-t); };
    std::vector<double> errors;
    for (int level = 0; level < 4; ++level)
    {
        const double dx = 0.1 / (1 << level);
        const int cells = 10 << level;
        const Discretization d = Discretization::with_window(dx, 0.5 * dx, 1.0);
        auto p = dirichlet_problem(0.0, cells, d, exact);
        p.u0 = [](double x) { return std::sin(x); };
        p.v0 = [](double x) { return -std::sin(x); };
        p.f = [](double x, double t) { return 2.0 * std::sin(x) * std::exp(-t); };
        const auto u = solve(p);
        SpaceTimeField ref(u.grid(), u.n_time(), u.dt());
        for (int n = 0; n <= u.n_time(); ++n)
            for (int j = 0; j < u.n_nodes(); ++j)
                ref(n, j) = exact(u.grid().x(j), d.time(n));
        errors.push_back(error_linf_l2(ref, u));
    }
    for (std::size_t i = 1; i < errors.size(); ++i)
    {
        const double ratio = errors[i - 1] / errors[i];
        CHECK(ratio >= 3.6);
        CHECK(ratio <= 4.4);
    }
}

TEST_CASE("model monodomain solve agrees with a refined solve")
{
    const WaveProblem m = model();
    const auto coarse_d = Discretization::with_window(0.02, 0.02, 16.0);
    const auto fine_d = Discretization::with_window(0.005, 0.005, 16.0);
    const auto coarse = solve_monodomain(m, coarse_d, StartMode::ExactDalembert);
    const auto fine = solve_monodomain(m, fine_d, StartMode::ExactDalembert);
    SpaceTimeField sampled(coarse.grid(), coarse.n_time(), coarse.dt());
    for (int n = 0; n <= coarse.n_time(); ++n)
        for (int j = 0; j < coarse.n_nodes(); ++j)
            sampled(n, j) = fine(4 * n, 4 * j);
    CHECK(error_linf_l2(coarse, sampled) <= 1e-3);
}

TEST_CASE("flux of a static linear profile")
{
    const Discretization d{0.1, 0.05, 8};
    SubdomainProblem p = dirichlet_problem(0.0, 10, d, [](double x, double) { return x; });
    p.u0 = [](double x) { return x; };
    p.v0 = [](double) { return 0.0; };
    SpaceTimeField u(p.grid, d.n_time, d.dt);
    for (int n = 0; n <= d.n_time; ++n)
        for (int j = 0; j < u.n_nodes(); ++j)
            u(n, j) = p.grid.x(j);

    for (FluxMode mode : {FluxMode::SchemeConsistent, FluxMode::OneSided})
    {
        const auto right = extract_flux(u, p, Side::Right, mode);
        const auto left = extract_flux(u, p, Side::Left, mode);
        for (int n = 0; n <= d.n_time; ++n)
        {
            CHECK(right[n] == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(left[n] == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }

    SpaceTimeField zero(p.grid, d.n_time, d.dt);
    p.u0 = [](double) { return 0.0; };
    for (FluxMode mode : {FluxMode::SchemeConsistent, FluxMode::OneSided})
        CHECK(l2_time(extract_flux(zero, p, Side::Right, mode)) == 0.0);

    SpaceTimeField narrow(Grid{0.0, 0.1, 0, 2}, d.n_time, d.dt);
    CHECK_THROWS_AS(extract_flux(narrow, p, Side::Right, FluxMode::OneSided), UsageError);
}

TEST_CASE("transmitted flux reproduces the monodomain solution")
{
    const WaveProblem m = model();
    // Rounding in the stencil inversion accumulates with |u| (about 1e3 at
    // T = 16), so the long window is checked relative to the solution size.
    for (double T : {10.0, 16.0})
    {
        CAPTURE(T);
        const auto d = Discretization::with_window(0.02, 0.02, T);
        const auto mono = solve_monodomain(m, d, StartMode::ExactDalembert);
        const Grid global = global_grid(m, d);
        const int gamma = interface_node(m, d);

        const auto left_field = mono.restrict_to(0, gamma);
        const auto p1 = make_subproblem(m, d, global.sub(0, gamma), DirichletTrace{TimeTrace::sample(m.g_left, d)},
                                        DirichletTrace{mono.trace(gamma)}, StartMode::ExactDalembert);
        const auto g1 = extract_flux(left_field, p1, Side::Right, FluxMode::SchemeConsistent);

        const TimeTrace g2 = TimeTrace::zero(d) - g1;
        const auto p2 = make_subproblem(m, d, global.sub(gamma, global.last()), NeumannTrace{g2},
                                        DirichletTrace{TimeTrace::sample(m.g_right, d)}, StartMode::ExactDalembert);
        const double err = error_linf_l2(mono.restrict_to(gamma, global.last()), solve(p2));
        if (T == 10.0)
            CHECK(err <= 1e-12);
        else
            CHECK(err <= 1e-14 * max_abs(mono));
    }
}

TEST_CASE("Dirichlet and Neumann solves are dual")
{
    // Arbitrary smooth data, lambda < 1, with a source and the Taylor start.
    const Discretization d = Discretization::with_window(0.05, 0.04, 3.0);
    SubdomainProblem p;
    p.grid = Grid{-1.0, 0.05, 0, 41};
    p.disc = d;
    p.wave_speed = 1.1;
    p.u0 = [](double x) { return std::cos(2.0 * x); };
    p.v0 = [](double x) { return x * x; };
    p.f = [](double x, double t) { return std::sin(x + t); };
    p.left = DirichletTrace{TimeTrace::sample([](double t) { return std::cos(2.0) + t; }, d)};
    p.right = DirichletTrace{TimeTrace::sample([](double t) { return std::cos(2.0) * std::cos(t); }, d)};
    const auto u = solve(p);

    for (Side side : {Side::Left, Side::Right})
    {
        auto q = p;
        const NeumannTrace flux{extract_flux(u, p, side, FluxMode::SchemeConsistent)};
        (side == Side::Left ? q.left : q.right) = flux;
        CHECK(error_linf_l2(u, solve(q)) <= 1e-11);
    }
}

TEST_CASE("absorbing end lets a right-going pulse leave at lambda = 1")
{
    const auto bump = [](double x) {
        const double z = (x - 0.5) / 0.25;
        return std::abs(z) < 1.0 ? std::pow(1.0 - z * z, 4) : 0.0;
    };
    const auto dbump = [](double x) {
        const double z = (x - 0.5) / 0.25;
        return std::abs(z) < 1.0 ? -32.0 * z * std::pow(1.0 - z * z, 3) : 0.0;
    };
    const Discretization d = Discretization::with_window(0.01, 0.01, 3.0);
    SubdomainProblem p;
    p.grid = Grid{0.0, 0.01, 0, 201};
    p.disc = d;
    p.u0 = bump;
    p.v0 = [&](double x) { return -dbump(x); };
    p.f = [](double, double) { return 0.0; };
    p.start = StartMode::ExactDalembert;
    p.left = DirichletTrace{TimeTrace::zero(d)};
    p.right = AbsorbingTrace{TimeTrace::zero(d)};
    const auto u = solve(p);
    CHECK(max_nodal_error(u, [&](double x, double t) { return bump(x - t); }) <= 1e-12);
}
