#ifndef WAVEWR_THEORY_HPP
#define WAVEWR_THEORY_HPP

#include <complex>

#include "wavewr/core.hpp"
#include "wavewr/delay_polynomial.hpp"

namespace wavewr::theory
{
    /// Iteration whose Laplace-domain symbol is studied: DNWR or NNWR.
    struct SymbolSpec
    {
        Method method = Method::DNWR;
        double theta = 0.5;
        Geometry geometry;

        void validate() const;
    };

    /// coth(a s / c) tanh(b s / c) - 1 for Re(s) > 0, written in terms of
    /// exp(-2 a s / c) and exp(-2 b s / c) so it never overflows.
    std::complex<double> kernel_closed_form(double a, double b, double c, std::complex<double> s);

    /// coth(a s / c) + coth(b s / c).
    std::complex<double> coth_sum(double a, double b, double c, std::complex<double> s);

    /// Delay series of kernel_closed_form truncated at delays <= horizon:
    /// +2 on (m, 0), -2 (-1)^(n-1) on (0, n), -4 (-1)^(n-1) on (m, n), m, n >= 1.
    DelayPolynomial kernel_series(const Geometry& g, double horizon);

    /// Upper bound on |kernel_closed_form - kernel_series(horizon)| at Re(s) = sigma,
    /// summing the absolute values of all dropped terms.
    double kernel_tail_bound(const Geometry& g, double horizon, double sigma);

    /// Closed form of the one-iteration symbol:
    /// DNWR 1 - theta - theta coth(as/c) tanh(bs/c);
    /// NNWR 1 - theta (2 + coth(as/c)/coth(bs/c) + coth(bs/c)/coth(as/c)).
    std::complex<double> symbol_closed_form(const SymbolSpec& spec, std::complex<double> s);

    /// One-iteration symbol as a delay polynomial:
    /// DNWR (1 - 2 theta) - theta G(a, b); NNWR (1 - 4 theta) - theta (G(a, b) + G(b, a)).
    DelayPolynomial base_symbol(const SymbolSpec& spec, double horizon);

    /// k-th power of base_symbol, truncated to the horizon after every product.
    DelayPolynomial symbol_power(const SymbolSpec& spec, int k, double horizon);

    /// Interface data after k iterations of the error equations started from h0:
    /// sum over monomials of coeff * h0(t - tau) H(t - tau), with H(0) = 1 and h0
    /// taken as zero for negative arguments.
    TimeTrace predict_trace(const SymbolSpec& spec, int k, const TimeFunction& h0, const Discretization& d);
    /// Same with sampled h0, linearly interpolated between levels.
    TimeTrace predict_trace(const SymbolSpec& spec, int k, const TimeTrace& h0);

    /// Iterations needed at the optimal theta: ceil(cT / (2 min(a, b))) + 1 for
    /// DNWR, ceil(cT / (4 min(a, b))) + 1 for NNWR.
    int finite_step_bound(Method method, double a, double b, double c, double T);

    /// Contraction factor for a = b: |1 - 2 theta| (DNWR), |1 - 4 theta| (NNWR).
    double symmetric_rate(Method method, double theta);
} // namespace wavewr::theory

#endif
