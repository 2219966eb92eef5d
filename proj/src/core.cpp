#include "wavewr/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wavewr
{
    std::string_view to_string(Method m)
    {
        switch (m)
        {
        case Method::DNWR: return "DNWR";
        case Method::NNWR: return "NNWR";
        case Method::SwrClassical: return "SWR_CLASSICAL";
        case Method::SwrOptimized: return "SWR_OPTIMIZED";
        }
        return "?";
    }

    Method parse_method(std::string_view s)
    {
        for (Method m : {Method::DNWR, Method::NNWR, Method::SwrClassical, Method::SwrOptimized})
            if (s == to_string(m))
                return m;
        throw UsageError("unknown method '" + std::string(s) + "'");
    }

    void WaveProblem::validate() const
    {
        if (!(x_left < interface && interface < x_right))
            throw UsageError("WaveProblem: need x_left < interface < x_right");
        if (!(wave_speed > 0.0))
            throw UsageError("WaveProblem: wave speed must be positive");
        if (!u0 || !v0 || !g_left || !g_right || !f)
            throw UsageError("WaveProblem: all data functions must be set");
    }

    WaveProblem WaveProblem::homogeneous() const
    {
        WaveProblem p = *this;
        p.u0 = [](double) { return 0.0; };
        p.v0 = [](double) { return 0.0; };
        p.g_left = [](double) { return 0.0; };
        p.g_right = [](double) { return 0.0; };
        p.f = [](double, double) { return 0.0; };
        return p;
    }

    Discretization Discretization::with_window(double dx, double dt, double T)
    {
        if (!(dt > 0.0) || !(T > 0.0))
            throw UsageError("Discretization: dt and T must be positive");
        const double steps = T / dt;
        const long n = std::lround(steps);
        if (n < 1 || std::abs(steps - static_cast<double>(n)) > 1e-9 * std::max(1.0, steps))
            throw UsageError("Discretization: T = " + std::to_string(T)
                             + " is not a positive multiple of dt");
        return Discretization{dx, dt, static_cast<int>(n)};
    }

    int Discretization::cells(double length) const
    {
        const double r = length / dx;
        const long n = std::lround(r);
        if (std::abs(r - static_cast<double>(n)) > 1e-9 * std::max(1.0, std::abs(r)))
            throw UsageError("Discretization: length " + std::to_string(length)
                             + " is not a multiple of dx");
        return static_cast<int>(n);
    }

    void Discretization::validate_for(const WaveProblem& p) const
    {
        if (!(dx > 0.0) || !(dt > 0.0) || n_time < 1)
            throw UsageError("Discretization: need dx > 0, dt > 0, n_time >= 1");
        p.validate();
        if (cells(p.left_length()) < 1 || cells(p.right_length()) < 1)
            throw UsageError("Discretization: each subdomain needs at least one cell");
    }

    Grid Grid::sub(int global_first, int global_last) const
    {
        if (global_first < first || global_last > last() || global_last < global_first)
            throw UsageError("Grid::sub: range outside grid");
        return Grid{origin, dx, global_first, global_last - global_first + 1};
    }

    TimeTrace::TimeTrace(std::vector<double> values, double dt) : values_(std::move(values)), dt_(dt)
    {
        if (values_.empty())
            throw UsageError("TimeTrace: empty");
    }

    TimeTrace TimeTrace::zero(const Discretization& d)
    {
        return TimeTrace(std::vector<double>(static_cast<std::size_t>(d.n_time) + 1, 0.0), d.dt);
    }

    TimeTrace TimeTrace::sample(const TimeFunction& g, const Discretization& d)
    {
        std::vector<double> v(static_cast<std::size_t>(d.n_time) + 1);
        for (int n = 0; n <= d.n_time; ++n)
            v[static_cast<std::size_t>(n)] = g(d.time(n));
        return TimeTrace(std::move(v), d.dt);
    }

    double l2_time(const TimeTrace& v)
    {
        double s = 0.0;
        for (double x : v.values())
            s += x * x;
        return std::sqrt(v.dt() * s);
    }

    TimeTrace operator-(const TimeTrace& a, const TimeTrace& b)
    {
        if (a.n_time() != b.n_time())
            throw UsageError("TimeTrace: length mismatch");
        std::vector<double> v(a.values().begin(), a.values().end());
        for (int n = 0; n <= a.n_time(); ++n)
            v[static_cast<std::size_t>(n)] -= b[n];
        return TimeTrace(std::move(v), a.dt());
    }

    SpaceTimeField::SpaceTimeField(Grid grid, int n_time, double dt)
        : grid_(grid), n_time_(n_time), dt_(dt),
          data_(static_cast<std::size_t>(n_time + 1) * static_cast<std::size_t>(grid.n_nodes), 0.0)
    {
        if (grid.n_nodes < 1 || n_time < 0)
            throw UsageError("SpaceTimeField: empty grid");
    }

    std::span<const double> SpaceTimeField::row(int n) const
    {
        return std::span<const double>(data_).subspan(index(n, 0), static_cast<std::size_t>(grid_.n_nodes));
    }

    std::span<double> SpaceTimeField::row(int n)
    {
        return std::span<double>(data_).subspan(index(n, 0), static_cast<std::size_t>(grid_.n_nodes));
    }

    TimeTrace SpaceTimeField::trace(int j) const
    {
        if (j < 0 || j >= grid_.n_nodes)
            throw UsageError("SpaceTimeField::trace: node out of range");
        std::vector<double> v(static_cast<std::size_t>(n_time_) + 1);
        for (int n = 0; n <= n_time_; ++n)
            v[static_cast<std::size_t>(n)] = (*this)(n, j);
        return TimeTrace(std::move(v), dt_);
    }

    SpaceTimeField SpaceTimeField::restrict_to(int global_first, int global_last) const
    {
        SpaceTimeField out(grid_.sub(global_first, global_last), n_time_, dt_);
        const int offset = global_first - grid_.first;
        for (int n = 0; n <= n_time_; ++n)
        {
            auto src = row(n).subspan(static_cast<std::size_t>(offset), static_cast<std::size_t>(out.n_nodes()));
            std::copy(src.begin(), src.end(), out.row(n).begin());
        }
        return out;
    }

    double l2_space(std::span<const double> row, double dx)
    {
        if (row.empty())
            throw UsageError("l2_space: empty array");
        double s = 0.0;
        for (double v : row)
            s += v * v;
        return std::sqrt(dx * s);
    }

    double error_linf_l2(const SpaceTimeField& u_ref, const SpaceTimeField& u_approx)
    {
        if (u_ref.n_time() != u_approx.n_time() || u_ref.grid().first != u_approx.grid().first
            || u_ref.n_nodes() != u_approx.n_nodes())
            throw UsageError("error_linf_l2: shape mismatch");
        const double dx = u_ref.grid().dx;
        double worst = 0.0;
        std::vector<double> diff(static_cast<std::size_t>(u_ref.n_nodes()));
        for (int n = 0; n <= u_ref.n_time(); ++n)
        {
            auto a = u_ref.row(n);
            auto b = u_approx.row(n);
            for (std::size_t j = 0; j < diff.size(); ++j)
                diff[j] = a[j] - b[j];
            const double e = l2_space(diff, dx);
            if (std::isnan(e))
                return e;
            worst = std::max(worst, e);
        }
        return worst;
    }

    Concatenation concatenate(const SpaceTimeField& u1, const SpaceTimeField& u2)
    {
        if (u1.grid().last() != u2.grid().first || u1.grid().dx != u2.grid().dx
            || u1.grid().origin != u2.grid().origin)
            throw UsageError("concatenate: u1's right node is not u2's left node");
        if (u1.n_time() != u2.n_time())
            throw UsageError("concatenate: time level mismatch");

        Grid g = u1.grid();
        g.n_nodes = u1.n_nodes() + u2.n_nodes() - 1;
        Concatenation out{SpaceTimeField(g, u1.n_time(), u1.dt()), 0.0};
        for (int n = 0; n <= u1.n_time(); ++n)
        {
            auto dst = out.field.row(n);
            auto a = u1.row(n);
            auto b = u2.row(n);
            std::copy(a.begin(), a.end(), dst.begin());
            std::copy(b.begin() + 1, b.end(), dst.begin() + static_cast<std::ptrdiff_t>(a.size()));
            out.discrepancy = std::max(out.discrepancy, std::abs(a.back() - b.front()));
        }
        return out;
    }

    void IterationHistory::append(const IterationRecord& r)
    {
        if (!records_.empty() && r.iteration <= records_.back().iteration)
            throw UsageError("IterationHistory: iteration indices must increase");
        if (records_.empty() && r.iteration < 1)
            throw UsageError("IterationHistory: iterations start at 1");
        records_.push_back(r);
    }

    std::optional<int> IterationHistory::iterations_to(double tol) const
    {
        for (const auto& r : records_)
            if (r.error_linf_l2 <= tol)
                return r.iteration;
        return std::nullopt;
    }
} // namespace wavewr
