#include "wavewr/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wavewr
{
    namespace
    {
        constexpr double kCflSlack = 1e-12;

        const TimeTrace& trace_of(const BoundaryCondition& bc)
        {
            return std::visit([](const auto& b) -> const TimeTrace& { return b.values; }, bc);
        }

        // Local indices of the end node, its inner neighbour, and the ghost
        // position on `side`.
        struct EndNodes
        {
            int node;
            int inner;
            int inner2;
            int ghost;
        };

        EndNodes end_nodes(const Grid& g, Side side)
        {
            if (side == Side::Left)
                return {0, 1, 2, -1};
            const int last = g.n_nodes - 1;
            return {last, last - 1, last - 2, last + 1};
        }

        void check(const SubdomainProblem& p)
        {
            if (p.grid.n_nodes < 2)
                throw UsageError("solve: interval needs at least two nodes");
            if (!p.u0 || !p.v0 || !p.f)
                throw UsageError("solve: initial data and source must be set");
            if (p.cfl() > 1.0 + kCflSlack)
                throw StabilityError("solve: CFL number " + std::to_string(p.cfl()) + " exceeds 1");
            for (const auto* bc : {&p.left, &p.right})
                if (trace_of(*bc).n_time() != p.disc.n_time)
                    throw UsageError("solve: boundary trace length does not match the time window");
        }


        void advance_end(const SubdomainProblem& p, const SpaceTimeField& u, std::span<double> next,
                         int n, Side side)
        {
            const BoundaryCondition& bc = side == Side::Left ? p.left : p.right;
            const auto e = end_nodes(p.grid, side);
            const double lam2 = p.cfl() * p.cfl();
            const double dt = p.disc.dt;
            const double dx = p.grid.dx;
            const double un = u(n, e.node);
            const double uprev = u(n - 1, e.node);
            const double uin = u(n, e.inner);
            const double src = dt * dt * p.f(p.grid.x(e.node), p.disc.time(n));

            if (const auto* d = std::get_if<DirichletTrace>(&bc))
            {
                next[static_cast<std::size_t>(e.node)] = d->values[n + 1];
            }
            else if (const auto* nb = std::get_if<NeumannTrace>(&bc))
            {
                const double ghost = uin + 2.0 * dx * nb->values[n];
                next[static_cast<std::size_t>(e.node)] = 2.0 * un - uprev + lam2 * (ghost - 2.0 * un + uin) + src;
            }
            else
            {
                // (u^{n+1} - u^{n-1})/(2 c dt) + (ghost - inner)/(2 dx) = r, ghost eliminated.
                const double lam = p.cfl();
                const double r = std::get<AbsorbingTrace>(bc).values[n];
                next[static_cast<std::size_t>(e.node)] =
                    (2.0 * un - (1.0 - lam) * uprev + 2.0 * lam2 * (uin - un + dx * r) + src) / (1.0 + lam);
            }
        }
    } // namespace

    Grid global_grid(const WaveProblem& p, const Discretization& d)
    {
        return Grid{p.x_left, d.dx, 0, d.cells(p.x_right - p.x_left) + 1};
    }

    int interface_node(const WaveProblem& p, const Discretization& d) { return d.cells(p.left_length()); }

    SubdomainProblem make_subproblem(const WaveProblem& p, const Discretization& d, Grid grid,
                                     BoundaryCondition left, BoundaryCondition right, StartMode start)
    {
        return SubdomainProblem{grid, p.wave_speed, p.u0, p.v0, p.f, std::move(left), std::move(right), d, start};
    }

    double starter_value(const SubdomainProblem& p, double x)
    {
        const double dt = p.disc.dt;
        const double c = p.wave_speed;
        if (p.start == StartMode::Taylor)
        {
            const double dx = p.grid.dx;
            const double d2 = (p.u0(x - dx) - 2.0 * p.u0(x) + p.u0(x + dx)) / (dx * dx);
            return p.u0(x) + dt * p.v0(x) + 0.5 * dt * dt * (c * c * d2 + p.f(x, 0.0));
        }
        using boost::math::quadrature::gauss_kronrod;
        const double lo = x - c * dt;
        const double hi = x + c * dt;
        // A single 31-point rule is normally converged over [x - c dt, x + c dt].
        // The Kronrod error estimate never drops below ~50 eps * L1, so refine
        // only when it exceeds both that floor and 1e-14.
        double error = 0.0;
        double l1 = 0.0;
        double integral = gauss_kronrod<double, 31>::integrate(p.v0, lo, hi, 0, 0.0, &error, &l1);
        const double floor = 100.0 * std::numeric_limits<double>::epsilon() * l1;
        if (error > std::max(1e-14, floor))
            integral = gauss_kronrod<double, 31>::integrate(p.v0, lo, hi, 10, 1e-13);
        return 0.5 * (p.u0(hi) + p.u0(lo)) + integral / (2.0 * c);
    }

    std::vector<double> first_step(const SubdomainProblem& p)
    {
        check(p);
        const Grid& g = p.grid;
        if (p.start == StartMode::ExactDalembert)
        {
            for (int j = 0; j < g.n_nodes; ++j)
                if (p.f(g.x(j), 0.0) != 0.0 || p.f(g.x(j), p.disc.dt) != 0.0)
                    throw UsageError("first_step: exact d'Alembert start requires a zero source");
        }
        std::vector<double> row(static_cast<std::size_t>(g.n_nodes));
        for (int j = 0; j < g.n_nodes; ++j)
            row[static_cast<std::size_t>(j)] = starter_value(p, g.x(j));

        const double lam2 = p.cfl() * p.cfl();
        for (Side side : {Side::Left, Side::Right})
        {
            const BoundaryCondition& bc = side == Side::Left ? p.left : p.right;
            const auto e = end_nodes(g, side);
            auto& v = row[static_cast<std::size_t>(e.node)];
            if (const auto* d = std::get_if<DirichletTrace>(&bc))
            {
                v = d->values[1];
            }
            else if (const auto* nb = std::get_if<NeumannTrace>(&bc))
            {
                // The starter assumes the ghost carries u0; shift it to the ghost
                // implied by the level-0 flux so that level 1 responds to g^0.
                const double ghost = p.u0(g.x(e.inner)) + 2.0 * g.dx * nb->values[0];
                v += 0.5 * lam2 * (ghost - p.u0(g.x(e.ghost)));
            }
            // Absorbing ends keep the starter: at level 0 the condition carries
            // no information beyond v0, and the starter only reads initial data.
        }
        return row;
    }

    SpaceTimeField solve(const SubdomainProblem& p)
    {
        check(p);
        const Grid& g = p.grid;
        const int nt = p.disc.n_time;
        const double lam2 = p.cfl() * p.cfl();
        const double dt2 = p.disc.dt * p.disc.dt;

        SpaceTimeField u(g, nt, p.disc.dt);
        for (int j = 0; j < g.n_nodes; ++j)
            u(0, j) = p.u0(g.x(j));
        if (nt == 0)
            return u;
        const auto start = first_step(p);
        std::copy(start.begin(), start.end(), u.row(1).begin());

        for (int n = 1; n < nt; ++n)
        {
            auto next = u.row(n + 1);
            auto cur = u.row(n);
            auto prev = u.row(n - 1);
            const double t = p.disc.time(n);
            for (int j = 1; j + 1 < g.n_nodes; ++j)
            {
                const auto k = static_cast<std::size_t>(j);
                next[k] = 2.0 * cur[k] - prev[k] + lam2 * (cur[k + 1] - 2.0 * cur[k] + cur[k - 1])
                          + dt2 * p.f(g.x(j), t);
            }
            advance_end(p, u, next, n, Side::Left);
            advance_end(p, u, next, n, Side::Right);
        }
        return u;
    }

    SpaceTimeField solve_monodomain(const WaveProblem& p, const Discretization& d, StartMode start)
    {
        d.validate_for(p);
        return solve(make_subproblem(p, d, global_grid(p, d), DirichletTrace{TimeTrace::sample(p.g_left, d)},
                                     DirichletTrace{TimeTrace::sample(p.g_right, d)}, start));
    }

    TimeTrace extract_flux(const SpaceTimeField& u, const SubdomainProblem& p, Side side, FluxMode mode)
    {
        if (u.n_nodes() < 3)
            throw UsageError("extract_flux: field needs at least three nodes");
        if (u.n_time() != p.disc.n_time)
            throw UsageError("extract_flux: field does not match the problem's time window");
        const auto e = end_nodes(u.grid(), side);
        const int nt = u.n_time();
        const double dx = u.grid().dx;
        std::vector<double> g(static_cast<std::size_t>(nt) + 1);

        if (mode == FluxMode::OneSided)
        {
            for (int n = 0; n <= nt; ++n)
                g[static_cast<std::size_t>(n)] = (3.0 * u(n, e.node) - 4.0 * u(n, e.inner) + u(n, e.inner2)) / (2.0 * dx);
            return TimeTrace(std::move(g), u.dt());
        }

        const double lam2 = p.cfl() * p.cfl();
        const double dt2 = p.disc.dt * p.disc.dt;
        const double x = u.grid().x(e.node);
        {
            const double ghost = p.u0(u.grid().x(e.ghost)) + 2.0 / lam2 * (u(1, e.node) - starter_value(p, x));
            g[0] = (ghost - u(0, e.inner)) / (2.0 * dx);
        }
        for (int n = 1; n < nt; ++n)
        {
            const double un = u(n, e.node);
            const double ghost = (u(n + 1, e.node) - 2.0 * un + u(n - 1, e.node)) / lam2 + 2.0 * un
                                 - u(n, e.inner) - dt2 / lam2 * p.f(x, p.disc.time(n));
            g[static_cast<std::size_t>(n)] = (ghost - u(n, e.inner)) / (2.0 * dx);
        }
        if (nt >= 1)
            g[static_cast<std::size_t>(nt)] = g[static_cast<std::size_t>(nt - 1)];
        return TimeTrace(std::move(g), u.dt());
    }

    TimeTrace absorbing_datum_for_neighbour(const SpaceTimeField& u, const SubdomainProblem& p, Side side)
    {
        const TimeTrace flux = extract_flux(u, p, side, FluxMode::SchemeConsistent);
        const auto e = end_nodes(u.grid(), side);
        const int nt = u.n_time();
        const double c = p.wave_speed;
        std::vector<double> r(static_cast<std::size_t>(nt) + 1);
        r[0] = -flux[0] + p.v0(u.grid().x(e.node)) / c;
        for (int n = 1; n < nt; ++n)
            r[static_cast<std::size_t>(n)] = -flux[n] + (u(n + 1, e.node) - u(n - 1, e.node)) / (2.0 * c * p.disc.dt);
        if (nt >= 1)
            r[static_cast<std::size_t>(nt)] = r[static_cast<std::size_t>(nt - 1)];
        return TimeTrace(std::move(r), u.dt());
    }
} // namespace wavewr
