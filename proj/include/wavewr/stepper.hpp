#ifndef WAVEWR_STEPPER_HPP
#define WAVEWR_STEPPER_HPP

#include <variant>
#include <vector>

#include "wavewr/core.hpp"

namespace wavewr
{
    class StabilityError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Prescribed values at the end node.
    struct DirichletTrace
    {
        TimeTrace values;
    };

    /// Prescribed outward normal derivative at the end node, imposed through a
    /// ghost node at distance dx outside the interval.
    struct NeumannTrace
    {
        TimeTrace values;
    };

    /// Prescribed (d/dn + (1/c) d/dt) u at the end node.
    struct AbsorbingTrace
    {
        TimeTrace values;
    };

    using BoundaryCondition = std::variant<DirichletTrace, NeumannTrace, AbsorbingTrace>;

    enum class StartMode
    {
        Taylor,
        ExactDalembert
    };

    enum class Side
    {
        Left,
        Right
    };

    enum class FluxMode
    {
        SchemeConsistent,
        OneSided
    };

    /// One leapfrog solve on the node range `grid` of the global grid.
    struct SubdomainProblem
    {
        Grid grid;
        double wave_speed = 1.0;
        SpaceFunction u0;
        SpaceFunction v0;
        SpaceTimeFunction f;
        BoundaryCondition left;
        BoundaryCondition right;
        Discretization disc;
        StartMode start = StartMode::Taylor;

        double cfl() const { return disc.cfl(wave_speed); }
    };

    /// Subproblem over `grid` inheriting data from `p`, with the given end conditions.
    SubdomainProblem make_subproblem(const WaveProblem& p, const Discretization& d, Grid grid,
                                     BoundaryCondition left, BoundaryCondition right,
                                     StartMode start);

    /// The global vertex grid of `p` (node 0 at x_left).
    Grid global_grid(const WaveProblem& p, const Discretization& d);

    /// Index of the interface node on the global grid.
    int interface_node(const WaveProblem& p, const Discretization& d);

    /// Leapfrog solve of `p` over its whole window.
    ///
    /// Interior nodes use the centred stencil with f evaluated at (x_j, t_n).
    /// Neumann and absorbing ends apply the same stencil at the end node with
    /// the ghost value eliminated through the boundary relation. Level 1 comes
    /// from first_step.
    SpaceTimeField solve(const SubdomainProblem& p);

    /// Monodomain solve of `p` with Dirichlet data at both ends.
    SpaceTimeField solve_monodomain(const WaveProblem& p, const Discretization& d, StartMode start);

    /// Level-1 row of the solve of `p`.
    ///
    /// Dirichlet end nodes take the level-1 trace value. At Neumann end nodes
    /// the free-space starter is corrected by (lambda^2/2)(u_ghost^0 - u0(x_ghost)),
    /// where u_ghost^0 follows from the level-0 flux, so that the start is the
    /// same linear relation that extract_flux inverts at n = 0. Absorbing end
    /// nodes keep the starter value.
    std::vector<double> first_step(const SubdomainProblem& p);

    /// Free-space starter value at x: Taylor or exact d'Alembert formula.
    double starter_value(const SubdomainProblem& p, double x);

    /// Outward normal derivative at the end node on `side`, levels 0..n_time.
    ///
    /// SchemeConsistent inverts the leapfrog stencil at the end node for the
    /// ghost value and returns (u_ghost - u_inner)/(2dx); at n = 0 it inverts
    /// the starter relation instead, and the last level repeats the one before.
    /// Feeding this trace to a Neumann solve of the neighbouring interval
    /// reproduces the monodomain discretisation.
    TimeTrace extract_flux(const SpaceTimeField& u, const SubdomainProblem& p, Side side, FluxMode mode);

    /// Absorbing datum (d/dm + (1/c) d/dt) u at the end node on `side`, where m
    /// is the outward normal of the neighbouring interval (m = -n). This is the
    /// right-hand side the neighbour imposes as its AbsorbingTrace; stencils
    /// match the imposition in solve.
    TimeTrace absorbing_datum_for_neighbour(const SpaceTimeField& u, const SubdomainProblem& p, Side side);
} // namespace wavewr

#endif
