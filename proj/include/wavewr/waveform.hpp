#ifndef WAVEWR_WAVEFORM_HPP
#define WAVEWR_WAVEFORM_HPP

#include <memory>
#include <string_view>
#include <vector>

#include "wavewr/core.hpp"
#include "wavewr/stepper.hpp"

namespace wavewr
{
    enum class StopMode
    {
        /// Stop once the error against the monodomain reference is below tolerance.
        Reference,
        /// Stop once the change between consecutive iterates is below tolerance.
        Increment
    };

    /// Initial interface data as a function of (x, t). Drivers sample it at
    /// the interface (DNWR, NNWR) or at the artificial boundaries (SWR).
    using InitialGuess = std::function<double(double, double)>;

    /// Guess depending on time only, e.g. h0(t) = t^2.
    InitialGuess guess_from_time(TimeFunction g);
    /// Guess read off a field at grid nodes (typically the monodomain solve).
    InitialGuess guess_from_field(std::shared_ptr<const SpaceTimeField> u);

    struct WrConfig
    {
        Method method = Method::DNWR;
        double theta = 0.5;
        int max_iterations = 20;
        double tolerance = 1e-10;
        InitialGuess initial_guess;
        int overlap_cells = 0;
        FluxMode flux_mode = FluxMode::SchemeConsistent;
        StartMode start_mode = StartMode::ExactDalembert;
        StopMode stop_mode = StopMode::Reference;
        /// Run independent stage solves (NNWR, SWR) on separate threads.
        bool parallel_stages = false;
        /// Keep the interface data of every iteration in WrResult::traces.
        bool record_traces = false;

        void validate() const;
    };

    struct WrResult
    {
        IterationHistory history;
        /// Last iterate on the nonoverlapping partition, subdomain 1 owning
        /// the interface node.
        SpaceTimeField solution;
        /// Last subdomain fields as solved (overlapping for SWR_CLASSICAL).
        SpaceTimeField u1;
        SpaceTimeField u2;
        /// Interface data h^k, w^k (DNWR/NNWR) or the interface trace of u1
        /// (SWR) after each iteration, when requested.
        std::vector<TimeTrace> traces;
        /// NNWR only: flux sum at the interface in the last iteration.
        TimeTrace flux_jump;
        /// Largest interface mismatch between u1 and u2 over the last iterate.
        double interface_discrepancy = 0.0;
        bool converged = false;
    };

    /// Optional precomputed monodomain solution on the global grid. When null
    /// and the stop mode needs it, the driver solves for it.
    using Reference = std::shared_ptr<const SpaceTimeField>;

    WrResult dnwr_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                          Reference reference = nullptr);
    WrResult nnwr_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                          Reference reference = nullptr);
    WrResult swr_classical_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                                   Reference reference = nullptr);
    WrResult swr_optimized_iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                                   Reference reference = nullptr);

    /// Dispatches on cfg.method.
    WrResult iterate(const WaveProblem& problem, const Discretization& disc, const WrConfig& cfg,
                     Reference reference = nullptr);
} // namespace wavewr

#endif
