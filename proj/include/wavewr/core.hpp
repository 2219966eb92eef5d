#ifndef WAVEWR_CORE_HPP
#define WAVEWR_CORE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace wavewr
{
    /// Raised when an operation is called with inconsistent shapes or arguments.
    class UsageError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    enum class Method
    {
        DNWR,
        NNWR,
        SwrClassical,
        SwrOptimized
    };

    std::string_view to_string(Method m);
    /// Parses DNWR, NNWR, SWR_CLASSICAL or SWR_OPTIMIZED; throws UsageError otherwise.
    Method parse_method(std::string_view s);

    using SpaceFunction = std::function<double(double)>;
    using TimeFunction = std::function<double(double)>;
    using SpaceTimeFunction = std::function<double(double, double)>;

    /// 1D wave equation u_tt - c^2 u_xx = f on (x_left, x_right) with Dirichlet
    /// data at both ends, split into two subdomains at `interface`.
    struct WaveProblem
    {
        double x_left = 0.0;
        double interface = 0.5;
        double x_right = 1.0;
        double wave_speed = 1.0;
        SpaceFunction u0;
        SpaceFunction v0;
        TimeFunction g_left;
        TimeFunction g_right;
        SpaceTimeFunction f;

        double left_length() const { return interface - x_left; }
        double right_length() const { return x_right - interface; }

        /// Throws UsageError unless x_left < interface < x_right, c > 0 and all
        /// data functions are set.
        void validate() const;

        /// The same geometry with every data function identically zero: the
        /// error equations of any iteration on this problem.
        WaveProblem homogeneous() const;
    };

    /// Uniform grid spacing and time window shared by every solve of one run.
    struct Discretization
    {
        double dx = 0.02;
        double dt = 0.02;
        int n_time = 1;

        double final_time() const { return n_time * dt; }
        double time(int n) const { return n * dt; }
        double cfl(double wave_speed) const { return wave_speed * dt / dx; }

        /// Builds the discretization whose window is [0, T]; T must be a
        /// multiple of dt (to 1e-9 relative).
        static Discretization with_window(double dx, double dt, double T);

        /// Checks dx, dt, n_time and that every subdomain length of `p` is an
        /// integer multiple of dx. CFL is checked by the stepper.
        void validate_for(const WaveProblem& p) const;

        /// Number of dx steps in `length`; throws if it is not an integer.
        int cells(double length) const;
    };

    /// Vertex-centred global grid: node i sits at origin + i*dx. A subdomain
    /// grid is the contiguous range [first, first + n_nodes).
    struct Grid
    {
        double origin = 0.0;
        double dx = 1.0;
        int first = 0;
        int n_nodes = 0;

        double x(int local) const { return origin + (first + local) * dx; }
        int last() const { return first + n_nodes - 1; }
        bool operator==(const Grid&) const = default;

        Grid sub(int global_first, int global_last) const;
    };

    /// Function of time sampled at levels 0..n_time.
    class TimeTrace
    {
    public:
        TimeTrace() = default;
        TimeTrace(std::vector<double> values, double dt);
        static TimeTrace zero(const Discretization& d);
        static TimeTrace sample(const TimeFunction& g, const Discretization& d);

        int n_time() const { return static_cast<int>(values_.size()) - 1; }
        double dt() const { return dt_; }
        double operator[](int n) const { return values_[static_cast<std::size_t>(n)]; }
        double& operator[](int n) { return values_[static_cast<std::size_t>(n)]; }
        std::span<const double> values() const { return values_; }

    private:
        std::vector<double> values_;
        double dt_ = 0.0;
    };

    /// Discrete L2 norm in time: sqrt(dt * sum_n v_n^2).
    double l2_time(const TimeTrace& v);
    TimeTrace operator-(const TimeTrace& a, const TimeTrace& b);

    /// Discrete solution over one grid range for every time level 0..n_time,
    /// stored row-major by time level.
    class SpaceTimeField
    {
    public:
        SpaceTimeField() = default;
        SpaceTimeField(Grid grid, int n_time, double dt);

        const Grid& grid() const { return grid_; }
        int n_time() const { return n_time_; }
        int n_nodes() const { return grid_.n_nodes; }
        double dt() const { return dt_; }

        double operator()(int n, int j) const { return data_[index(n, j)]; }
        double& operator()(int n, int j) { return data_[index(n, j)]; }

        std::span<const double> row(int n) const;
        std::span<double> row(int n);

        /// Values at local node j for every level.
        TimeTrace trace(int j) const;
        /// Restriction to the global node range [global_first, global_last].
        SpaceTimeField restrict_to(int global_first, int global_last) const;

    private:
        std::size_t index(int n, int j) const
        {
            return static_cast<std::size_t>(n) * static_cast<std::size_t>(grid_.n_nodes)
                   + static_cast<std::size_t>(j);
        }

        Grid grid_;
        int n_time_ = 0;
        double dt_ = 0.0;
        std::vector<double> data_;
    };

    /// sqrt(dx * sum_j v_j^2) with unit weight at every node, boundaries included.
    double l2_space(std::span<const double> row, double dx);

    /// max over levels of l2_space(u_ref[n] - u_approx[n]).
    double error_linf_l2(const SpaceTimeField& u_ref, const SpaceTimeField& u_approx);

    struct Concatenation
    {
        SpaceTimeField field;
        /// max over levels of |u1(interface) - u2(interface)|.
        double discrepancy = 0.0;
    };

    /// Joins two fields sharing one node. The shared node takes u1's value.
    Concatenation concatenate(const SpaceTimeField& u1, const SpaceTimeField& u2);

    /// Per-iteration convergence record.
    struct IterationRecord
    {
        int iteration = 0;
        double error_linf_l2 = 0.0;
        double trace_error_l2 = 0.0;
        double increment = 0.0;
        double wallclock_ms = 0.0;
    };

    class IterationHistory
    {
    public:
        void append(const IterationRecord& r);
        const std::vector<IterationRecord>& records() const { return records_; }
        bool empty() const { return records_.empty(); }
        std::size_t size() const { return records_.size(); }
        const IterationRecord& back() const { return records_.back(); }

        /// First iteration whose error_linf_l2 is <= tol.
        std::optional<int> iterations_to(double tol) const;

    private:
        std::vector<IterationRecord> records_;
    };
} // namespace wavewr

#endif
