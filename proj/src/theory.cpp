#include "wavewr/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace wavewr::theory
{
    namespace
    {
        void require_positive_real_part(std::complex<double> s)
        {
            if (!(s.real() > 0.0))
                throw std::domain_error("kernel evaluation needs Re(s) > 0");
        }

        double rho(Method m)
        {
            if (m == Method::DNWR)
                return 2.0;
            if (m == Method::NNWR)
                return 4.0;
            throw UsageError("theory: only DNWR and NNWR have an iteration symbol");
        }
    } // namespace

    void SymbolSpec::validate() const
    {
        rho(method);
        geometry.validate();
        if (!(theta > 0.0 && theta <= 1.0))
            throw UsageError("SymbolSpec: theta must lie in (0, 1]");
    }

    std::complex<double> kernel_closed_form(double a, double b, double c, std::complex<double> s)
    {
        require_positive_real_part(s);
        Geometry{a, b, c}.validate();
        // coth(x) = (1 + e^{-2x}) / (1 - e^{-2x}), tanh(y) = (1 - e^{-2y}) / (1 + e^{-2y}).
        const std::complex<double> ea = std::exp(-2.0 * a * s / c);
        const std::complex<double> eb = std::exp(-2.0 * b * s / c);
        return 2.0 * (ea - eb) / ((1.0 - ea) * (1.0 + eb));
    }

    std::complex<double> coth_sum(double a, double b, double c, std::complex<double> s)
    {
        require_positive_real_part(s);
        Geometry{a, b, c}.validate();
        const std::complex<double> ea = std::exp(-2.0 * a * s / c);
        const std::complex<double> eb = std::exp(-2.0 * b * s / c);
        return (1.0 + ea) / (1.0 - ea) + (1.0 + eb) / (1.0 - eb);
    }

    DelayPolynomial kernel_series(const Geometry& g, double horizon)
    {
        DelayPolynomial out(g, horizon);
        for (int m = 1; out.within_horizon(m, 0); ++m)
            out.add({m, 0}, 2);
        for (int n = 1; out.within_horizon(0, n); ++n)
        {
            const int sign = n % 2 == 1 ? 1 : -1; // (-1)^(n-1)
            out.add({0, n}, -2 * sign);
            for (int m = 1; out.within_horizon(m, n); ++m)
                out.add({m, n}, -4 * sign);
        }
        return out;
    }

    double kernel_tail_bound(const Geometry& g, double horizon, double sigma)
    {
        g.validate();
        if (!(sigma > 0.0))
            throw std::domain_error("kernel_tail_bound needs Re(s) > 0");
        const DelayPolynomial probe(g, horizon);
        const double qa = std::exp(-2.0 * g.a * sigma / g.c);
        const double qb = std::exp(-2.0 * g.b * sigma / g.c);

        int m0 = 1;
        while (probe.within_horizon(m0, 0))
            ++m0;
        int n0 = 1;
        while (probe.within_horizon(0, n0))
            ++n0;
        double bound = 2.0 * std::pow(qa, m0) / (1.0 - qa) + 2.0 * std::pow(qb, n0) / (1.0 - qb);

        // Cross terms: for each m the dropped n form a geometric tail.
        int m = 1;
        for (; probe.within_horizon(m, 1); ++m)
        {
            int n = 1;
            while (probe.within_horizon(m, n))
                ++n;
            bound += 4.0 * std::pow(qa, m) * std::pow(qb, n) / (1.0 - qb);
        }
        bound += 4.0 * std::pow(qa, m) / (1.0 - qa) * qb / (1.0 - qb);
        return bound;
    }

    std::complex<double> symbol_closed_form(const SymbolSpec& spec, std::complex<double> s)
    {
        spec.validate();
        const auto& g = spec.geometry;
        const double th = spec.theta;
        if (spec.method == Method::DNWR)
            return 1.0 - 2.0 * th - th * kernel_closed_form(g.a, g.b, g.c, s);
        return 1.0 - 4.0 * th - th * (kernel_closed_form(g.a, g.b, g.c, s) + kernel_closed_form(g.b, g.a, g.c, s));
    }

    DelayPolynomial base_symbol(const SymbolSpec& spec, double horizon)
    {
        spec.validate();
        const auto& g = spec.geometry;
        const Rational theta = to_rational(spec.theta);
        DelayPolynomial kernel = kernel_series(g, horizon);
        if (spec.method == Method::NNWR)
            kernel = kernel + kernel_series(g.transposed(), horizon).transposed();
        const Rational linear = 1 - static_cast<int>(rho(spec.method)) * theta;
        return DelayPolynomial::constant(g, horizon, linear) + kernel.scaled(-theta);
    }

    DelayPolynomial symbol_power(const SymbolSpec& spec, int k, double horizon)
    {
        if (k <= 0)
            throw UsageError("symbol_power: k must be positive");
        return base_symbol(spec, horizon).pow(k);
    }

    TimeTrace predict_trace(const SymbolSpec& spec, int k, const TimeFunction& h0, const Discretization& d)
    {
        const DelayPolynomial sym = symbol_power(spec, k, d.final_time());
        std::vector<double> out(static_cast<std::size_t>(d.n_time) + 1, 0.0);
        for (const auto& [mono, coeff] : sym.terms())
        {
            const double tau = sym.geometry().delay(mono.m, mono.n);
            const double c = static_cast<double>(coeff);
            for (int n = 0; n <= d.n_time; ++n)
            {
                const double shifted = d.time(n) - tau;
                if (shifted >= -1e-9 * d.dt) // H(0) = 1
                    out[static_cast<std::size_t>(n)] += c * h0(std::max(shifted, 0.0));
            }
        }
        return TimeTrace(std::move(out), d.dt);
    }

    TimeTrace predict_trace(const SymbolSpec& spec, int k, const TimeTrace& h0)
    {
        const double dt = h0.dt();
        const int nt = h0.n_time();
        const auto interpolate = [&](double t) {
            const double pos = t / dt;
            const int i = std::min(static_cast<int>(std::floor(pos)), nt);
            if (i >= nt)
                return h0[nt];
            const double w = pos - i;
            return (1.0 - w) * h0[i] + w * h0[i + 1];
        };
        return predict_trace(spec, k, interpolate, Discretization{1.0, dt, nt});
    }

    int finite_step_bound(Method method, double a, double b, double c, double T)
    {
        Geometry{a, b, c}.validate();
        if (!(T > 0.0))
            throw UsageError("finite_step_bound: T must be positive");
        const double ratio = c * T / (rho(method) * std::min(a, b));
        return static_cast<int>(std::ceil(ratio * (1.0 - 1e-12))) + 1;
    }

    double symmetric_rate(Method method, double theta)
    {
        if (!(theta > 0.0 && theta <= 1.0))
            throw UsageError("symmetric_rate: theta must lie in (0, 1]");
        return std::abs(1.0 - rho(method) * theta);
    }
} // namespace wavewr::theory
